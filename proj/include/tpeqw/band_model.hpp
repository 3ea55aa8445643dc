#ifndef TPEQW_BAND_MODEL_HPP
#define TPEQW_BAND_MODEL_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "tpeqw/constants.hpp"
#include "tpeqw/errors.hpp"

namespace tpeqw {

enum class Band {
    conduction,       // s-like conduction band edge
    light_hole,       // light-hole valence band edge
    higher_cb_gamma7, // p-like higher conduction band, j = 1/2
    higher_cb_gamma8, // p-like higher conduction band, j = 3/2
};

/// Polarization geometry of the emitted photon pair.
enum class PolarizationGeometry {
    vertical_circular_pair,  // sigma+/sigma- pair along the growth axis z
    inplane_zz,              // both photons z-polarized, in-plane propagation
    mixed_inplane_vertical,  // one in-plane, one vertical polarization
};

enum class CircularPolarization : int {
    sigma_plus = +1,
    sigma_minus = -1,
};

/// Band-structure parameters of the 14-band description near the zone
/// center. Dipole moments are carried in the energy-length (eV nm)
/// convention; see dipole_product_ev for the momentum-form conversion.
struct MaterialParams {
    double e_gap_ev = 0.0;   // QW transition energy hbar*omega0
    double e_c_ev = 0.0;     // s to p-like conduction band energy difference
    double delta_c_ev = 0.0; // higher conduction band splitting
    double p1_ev_nm = 0.0;   // interband dipole moment, conduction s -> higher p
    double q_ev_nm = 0.0;    // interband dipole moment, valence p -> higher p
    std::string label;

    void validate() const {
        if (!(e_gap_ev > 0.0)) throw domain_error("material: e_gap_ev must be > 0");
        if (!(e_c_ev > 0.0)) throw domain_error("material: e_c_ev must be > 0");
        if (!(delta_c_ev >= 0.0)) throw domain_error("material: delta_c_ev must be >= 0");
        if (!(p1_ev_nm >= 0.0)) throw domain_error("material: p1_ev_nm must be >= 0");
        if (!(q_ev_nm >= 0.0)) throw domain_error("material: q_ev_nm must be >= 0");
        // keeps both denominator families positive for sub-gap photons
        if (!(e_c_ev > delta_c_ev)) throw domain_error("material: e_c_ev must exceed delta_c_ev");
    }
};

/// GaAs/AlGaAs quantum-well preset. Values are configuration inputs in the
/// usual 14-band parameter range, not ground truth; the transition energy
/// includes the confinement shift that puts the degenerate pair near 1.6 um.
inline MaterialParams gaas_14band() {
    return MaterialParams{1.55, 2.98, 0.20, 1.03, 0.82, "GaAs-14band"};
}

struct SpinorComponent {
    std::complex<double> coefficient;
    std::string bloch_label; // periodic Bloch function and spin, e.g. "X up"
};

/// Zone-center basis state with its spinor decomposition over the periodic
/// Bloch functions.
struct BandEdgeState {
    Band band;
    double j;   // total angular momentum
    double j_z; // projection along the growth axis
    std::vector<SpinorComponent> spinor;

    double norm_squared() const {
        double n = 0.0;
        for (const auto& c : spinor) n += std::norm(c.coefficient);
        return n;
    }
};

namespace detail {
inline void require_half_integer_jz(double j_z) {
    const double a = std::abs(j_z);
    if (a != 0.5 && a != 1.5) {
        throw domain_error("j_z must be one of +-1/2, +-3/2");
    }
}
inline std::string spin_arrow(bool up) { return up ? " up" : " down"; }
} // namespace detail

/// |S> conduction edge, j = 1/2, j_z = +-1/2.
inline BandEdgeState conduction_state(double j_z) {
    detail::require_half_integer_jz(j_z);
    if (std::abs(j_z) != 0.5) throw domain_error("conduction states carry j_z = +-1/2");
    const bool up = j_z > 0.0;
    return BandEdgeState{Band::conduction, 0.5, j_z, {{{1.0, 0.0}, "S" + detail::spin_arrow(up)}}};
}

/// Light-hole edge, (j, j_z) = (3/2, +-1/2):
///   sqrt(2/3) |Z s> -+ sqrt(1/6) |(X +- iY) -s>
inline BandEdgeState light_hole_state(double j_z) {
    detail::require_half_integer_jz(j_z);
    if (std::abs(j_z) != 0.5) throw domain_error("light-hole edge states carry j_z = +-1/2");
    const bool up = j_z > 0.0;
    const double r23 = std::sqrt(2.0 / 3.0);
    const double r16 = std::sqrt(1.0 / 6.0);
    const std::complex<double> i{0.0, 1.0};
    const double orb_sign = up ? 1.0 : -1.0; // (X + iY) pairs with spin down, (X - iY) with spin up
    return BandEdgeState{Band::light_hole, 1.5, j_z,
                         {{{r23, 0.0}, "Zv" + detail::spin_arrow(up)},
                          {-r16, "Xv" + detail::spin_arrow(!up)},
                          {-r16 * orb_sign * i, "Yv" + detail::spin_arrow(!up)}}};
}

/// Higher p-like conduction band, j = 3/2 branch:
///   (1/sqrt 2) |(X + iY) s> for the j_z = +-3/2 partners.
inline BandEdgeState higher_cb_gamma8_state(double j_z) {
    const double a = std::abs(j_z);
    if (a != 1.5) throw domain_error("gamma8 intermediate carries j_z = +-3/2 here");
    const bool up = j_z > 0.0;
    const double r12 = std::sqrt(0.5);
    const std::complex<double> i{0.0, 1.0};
    const double orb_sign = up ? 1.0 : -1.0;
    return BandEdgeState{Band::higher_cb_gamma8, 1.5, j_z,
                         {{{r12, 0.0}, "Xc" + detail::spin_arrow(up)},
                          {r12 * orb_sign * i, "Yc" + detail::spin_arrow(up)}}};
}

/// Higher p-like conduction band, j = 1/2 branch:
///   sqrt(1/3) |Z -s> - sqrt(1/3) |(X -+ iY) s>
inline BandEdgeState higher_cb_gamma7_state(double j_z) {
    detail::require_half_integer_jz(j_z);
    if (std::abs(j_z) != 0.5) throw domain_error("gamma7 intermediate carries j_z = +-1/2");
    const bool up = j_z > 0.0;
    const double r13 = std::sqrt(1.0 / 3.0);
    const std::complex<double> i{0.0, 1.0};
    const double orb_sign = up ? 1.0 : -1.0;
    return BandEdgeState{Band::higher_cb_gamma7, 0.5, j_z,
                         {{{r13, 0.0}, "Zc" + detail::spin_arrow(!up)},
                          {-r13, "Xc" + detail::spin_arrow(up)},
                          {r13 * orb_sign * i, "Yc" + detail::spin_arrow(up)}}};
}

/// One second-order transition path through a higher conduction band, with
/// the two energy denominators E_i - E_n - hbar*omega evaluated at the
/// given photon energies.
struct TransitionPath {
    BandEdgeState intermediate;
    double denominator_s_ev; // E_i - E_n - hbar*omega_s
    double denominator_i_ev; // E_i - E_n - hbar*omega_i
};

/// Denominators smaller than this signal an intermediate-state resonance.
inline constexpr double resonance_tolerance_ev = 1e-6;

namespace detail {
inline double checked_inverse(double denom_ev) {
    if (std::abs(denom_ev) < resonance_tolerance_ev) {
        throw resonance_error("photon energy resonant with an intermediate state");
    }
    return 1.0 / denom_ev;
}
} // namespace detail

/// Energy-denominator bracket of the closed-form two-photon matrix element,
/// in 1/eV:
///
///   1/(E_c + hw_s) + 1/(E_c + hw_i) - 1/(E_c + hw_s - D_c) - 1/(E_c + hw_i - D_c)
///
/// Terms are grouped pairwise per photon so the cancellation at
/// delta_c = 0 is exact.
inline double mprime_bracket(double hw_s_ev, double hw_i_ev, const MaterialParams& m) {
    if (!(hw_s_ev > 0.0) || !(hw_i_ev > 0.0)) {
        throw domain_error("photon energies must be positive");
    }
    const auto per_photon = [&m](double hw) {
        const double unshifted = detail::checked_inverse(m.e_c_ev + hw);
        const double shifted = detail::checked_inverse(m.e_c_ev + hw - m.delta_c_ev);
        return unshifted - shifted;
    };
    return per_photon(hw_s_ev) + per_photon(hw_i_ev);
}

/// Amplitude factor of the pair-polarization geometry relative to the
/// vertical sigma+/sigma- channel. The in-plane zz channel is 4x larger in
/// amplitude (16x in rate); a mixed in-plane/vertical pair is forbidden.
inline double geometry_amplitude_factor(PolarizationGeometry g) {
    switch (g) {
        case PolarizationGeometry::vertical_circular_pair: return 1.0;
        case PolarizationGeometry::inplane_zz: return 4.0;
        case PolarizationGeometry::mixed_inplane_vertical: return 0.0;
    }
    throw domain_error("invalid polarization geometry");
}

/// Product of the two dipole moments reduced to the momentum form the
/// matrix-element prefactor needs, expressed in eV.
///
/// The moments are accepted in the energy-length convention P [eV nm]; the
/// corresponding momentum matrix element is p = m0 P / hbar, so
/// P1 Q / m_e -> m0 P1 Q / hbar^2 with m_e the free-electron mass. This is
/// the one place that conversion happens.
inline double dipole_product_ev(const MaterialParams& m) {
    const double p1_si = m.p1_ev_nm * joule_per_ev * 1e-9; // J m
    const double q_si = m.q_ev_nm * joule_per_ev * 1e-9;   // J m
    return constants.m0 * p1_si * q_si / (constants.hbar * constants.hbar) / joule_per_ev;
}

/// Dimensionless second-order two-photon matrix element
///
///   M' = i sqrt(3/2) (m0 P1 Q / hbar^2) * bracket * g
///
/// purely imaginary, symmetric under signal/idler exchange, and scaled by
/// the geometry amplitude factor g.
inline std::complex<double> mprime(double hw_s_ev, double hw_i_ev, const MaterialParams& m,
                                   PolarizationGeometry geom) {
    const double bracket = mprime_bracket(hw_s_ev, hw_i_ev, m);
    const double g = geometry_amplitude_factor(geom);
    return {0.0, std::sqrt(1.5) * dipole_product_ev(m) * bracket * g};
}

/// Angular-momentum selection rule for a two-photon transition observed
/// collinearly along z: the net photon angular momentum must equal
/// j_z(initial) - j_z(final). For the conduction -> light-hole channel this
/// admits only opposite circular polarizations.
inline bool allowed_two_photon(double initial_jz, double final_jz,
                               std::pair<CircularPolarization, CircularPolarization> pol_pair) {
    detail::require_half_integer_jz(initial_jz);
    detail::require_half_integer_jz(final_jz);
    const double net_photon =
        static_cast<double>(static_cast<int>(pol_pair.first) + static_cast<int>(pol_pair.second));
    return net_photon == initial_jz - final_jz;
}

/// The two transition paths that survive at the zone center: only the
/// higher p-like conduction bands contribute as intermediates, the lower
/// bands being suppressed by the zero-k selecting cavity. Denominators are
/// evaluated at the given photon energies.
inline std::vector<TransitionPath> surviving_paths(const MaterialParams& m, double hw_s_ev,
                                                   double hw_i_ev) {
    if (!(hw_s_ev > 0.0) || !(hw_i_ev > 0.0)) {
        throw domain_error("photon energies must be positive");
    }
    // gamma8 sits at the full s-p distance E_c, gamma7 at E_c - delta_c
    const double off_g8 = -m.e_c_ev;
    const double off_g7 = -(m.e_c_ev - m.delta_c_ev);
    return {
        TransitionPath{higher_cb_gamma8_state(1.5), off_g8 - hw_s_ev, off_g8 - hw_i_ev},
        TransitionPath{higher_cb_gamma7_state(-0.5), off_g7 - hw_s_ev, off_g7 - hw_i_ev},
    };
}

/// Paths evaluated at the degenerate point hw = E_gap / 2.
inline std::vector<TransitionPath> surviving_paths(const MaterialParams& m) {
    return surviving_paths(m, m.e_gap_ev / 2.0, m.e_gap_ev / 2.0);
}

} // namespace tpeqw

#endif // TPEQW_BAND_MODEL_HPP
