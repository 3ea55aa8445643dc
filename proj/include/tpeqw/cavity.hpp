#ifndef TPEQW_CAVITY_HPP
#define TPEQW_CAVITY_HPP

#include <cmath>
#include <numbers>

#include "tpeqw/constants.hpp"
#include "tpeqw/errors.hpp"

namespace tpeqw {

/// Doubly-resonant vertical cavity: one mode at the signal frequency, one
/// at the idler, each with its own quality factor.
struct CavitySpec {
    double omega_s = 0.0; // signal resonance, rad/s
    double omega_i = 0.0; // idler resonance, rad/s
    double q_s = 1.0;
    double q_i = 1.0;

    void validate() const {
        if (!(omega_s > 0.0) || !(omega_i > 0.0)) {
            throw domain_error("cavity: resonance frequencies must be positive");
        }
        if (!(q_s >= 1.0) || !(q_i >= 1.0)) {
            throw domain_error("cavity: quality factors must be >= 1");
        }
    }

    double linewidth_s() const { return omega_s / (2.0 * q_s); }
    double linewidth_i() const { return omega_i / (2.0 * q_i); }

    /// The two-Lorentzian density of states assumes the lines do not
    /// overlap; callers surface a warning (never an error) when this fails.
    bool well_separated() const {
        return std::abs(omega_s - omega_i) > 10.0 * (linewidth_s() + linewidth_i());
    }
};

/// Cavity-shaped density of radiation modes, two normalized Lorentzians of
/// half weight each (unit total integral), in seconds:
///
///   F(w) = (1/2pi) [ g_s/((w-w_s)^2+g_s^2) + g_i/((w-w_i)^2+g_i^2) ],  g = w0/2Q
inline double density_of_states(double omega, const CavitySpec& spec) {
    if (!(omega >= 0.0)) throw domain_error("density_of_states: omega must be >= 0");
    spec.validate();
    const double gs = spec.linewidth_s();
    const double gi = spec.linewidth_i();
    const double ds = omega - spec.omega_s;
    const double di = omega - spec.omega_i;
    return (gs / (ds * ds + gs * gs) + gi / (di * di + gi * gi)) / (2.0 * std::numbers::pi);
}

/// Closed-form integral of the density of states over [lo, hi] via the
/// arctan antiderivative; accepts +-infinity. The full-line value is 1.
inline double density_of_states_integral(double lo, double hi, const CavitySpec& spec) {
    spec.validate();
    const auto term = [](double a, double b, double center, double gamma) {
        return (std::atan((b - center) / gamma) - std::atan((a - center) / gamma)) /
               (2.0 * std::numbers::pi);
    };
    return term(lo, hi, spec.omega_s, spec.linewidth_s()) +
           term(lo, hi, spec.omega_i, spec.linewidth_i());
}

/// Vertical cavity plus 2D grating device. Lengths in nm, area in mm^2;
/// derived quantities are SI. The fill factor is carried for config
/// fidelity only; grating electromagnetics is outside this model.
struct DeviceGeometry {
    double cavity_height_nm = 0.0;
    double grating_period_nm = 0.0;
    double fill_factor = 0.5;
    double device_area_mm2 = 0.0;
    double refractive_index = 1.0;
    double extraction_efficiency = 1.0;

    void validate() const {
        if (!(cavity_height_nm > 0.0)) throw domain_error("geometry: cavity_height_nm must be > 0");
        if (!(grating_period_nm > 0.0)) throw domain_error("geometry: grating_period_nm must be > 0");
        if (!(device_area_mm2 > 0.0)) throw domain_error("geometry: device_area_mm2 must be > 0");
        if (!(fill_factor >= 0.0 && fill_factor <= 1.0)) {
            throw domain_error("geometry: fill_factor must be in [0, 1]");
        }
        if (!(refractive_index >= 1.0)) throw domain_error("geometry: refractive_index must be >= 1");
        if (!(extraction_efficiency >= 0.0 && extraction_efficiency <= 1.0)) {
            throw domain_error("geometry: extraction_efficiency must be in [0, 1]");
        }
        if (!(unit_cell_count_unchecked() >= 1.0)) {
            throw domain_error("geometry: device area smaller than one grating unit cell");
        }
    }

    double unit_cell_count_unchecked() const {
        const double period_m = grating_period_nm * 1e-9;
        return device_area_mm2 * 1e-6 / (period_m * period_m);
    }
};

/// Field quantization volume, m^3: vertical cavity height times one grating
/// unit cell.
inline double quantization_volume(const DeviceGeometry& g) {
    g.validate();
    const double period_m = g.grating_period_nm * 1e-9;
    return g.cavity_height_nm * 1e-9 * period_m * period_m;
}

/// Number of grating unit cells across the device area.
inline double unit_cell_count(const DeviceGeometry& g) {
    g.validate();
    return g.unit_cell_count_unchecked();
}

/// Half-wavelength cavity height measured inside the material: lambda/(2n).
inline double half_wave_height_nm(double lambda_free_nm, double refractive_index) {
    if (!(lambda_free_nm > 0.0)) throw domain_error("half_wave_height: wavelength must be > 0");
    if (!(refractive_index >= 1.0)) throw domain_error("half_wave_height: index must be >= 1");
    return lambda_free_nm / (2.0 * refractive_index);
}

/// Cavity photon lifetime under the energy-decay convention tau = Q/omega.
inline double cavity_lifetime(double omega, double q) {
    if (!(omega > 0.0)) throw domain_error("cavity_lifetime: omega must be > 0");
    if (!(q >= 1.0)) throw domain_error("cavity_lifetime: Q must be >= 1");
    return q / omega;
}

/// Rate reaching the detectors after grating extraction.
inline double detected_rate(double rate_per_s, const DeviceGeometry& g) {
    if (!(rate_per_s >= 0.0)) throw domain_error("detected_rate: rate must be >= 0");
    g.validate();
    return rate_per_s * g.extraction_efficiency;
}

} // namespace tpeqw

#endif // TPEQW_CAVITY_HPP
