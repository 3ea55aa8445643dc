#ifndef TPEQW_CONSTANTS_HPP
#define TPEQW_CONSTANTS_HPP

#include <numbers>

#include "tpeqw/errors.hpp"

namespace tpeqw {

/// CODATA-2018 physical constants, SI units. Fixed at compile time and
/// immutable thereafter; every module computes in SI internally with
/// energies carried in eV at API boundaries.
struct Constants {
    double hbar = 1.054571817e-34;  // reduced Planck constant, J s
    double e = 1.602176634e-19;     // elementary charge, C
    double m0 = 9.1093837015e-31;   // free-electron mass, kg
    double c = 299792458.0;         // vacuum light speed, m/s
    double eps0 = 8.8541878128e-12; // vacuum permittivity, F/m
};

inline constexpr Constants constants{};

inline constexpr double joule_per_ev = 1.602176634e-19;

/// Coulomb coupling e^2/(4 pi eps0) in J m.
///
/// The emission-rate prefactors in this library are written in Gaussian
/// form, where the squared electron charge carries dimensions of
/// energy times length. This function is the single Gaussian-to-SI
/// translation site: wherever a rate formula says e^2, the code uses
/// coulomb_e2() and nothing else.
inline double coulomb_e2() {
    return constants.e * constants.e / (4.0 * std::numbers::pi * constants.eps0);
}

/// omega = 2 pi c / lambda. Rejects non-positive wavelengths.
inline double wavelength_to_angular_frequency(double lambda_m) {
    if (!(lambda_m > 0.0)) {
        throw domain_error("wavelength must be positive");
    }
    return 2.0 * std::numbers::pi * constants.c / lambda_m;
}

inline double angular_frequency_to_wavelength(double omega) {
    if (!(omega > 0.0)) {
        throw domain_error("angular frequency must be positive");
    }
    return 2.0 * std::numbers::pi * constants.c / omega;
}

/// omega = E / hbar. Negative energies are permitted (detunings).
inline double energy_ev_to_angular_frequency(double energy_ev) {
    return energy_ev * joule_per_ev / constants.hbar;
}

inline double angular_frequency_to_energy_ev(double omega) {
    return omega * constants.hbar / joule_per_ev;
}

/// h c in eV nm, handy for photon energy <-> wavelength arithmetic.
inline double hc_ev_nm() {
    return 2.0 * std::numbers::pi * constants.hbar * constants.c / joule_per_ev * 1e9;
}

} // namespace tpeqw

#endif // TPEQW_CONSTANTS_HPP
