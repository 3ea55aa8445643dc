#ifndef TPEQW_RATE_ENGINE_HPP
#define TPEQW_RATE_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "tpeqw/band_model.hpp"
#include "tpeqw/cavity.hpp"
#include "tpeqw/constants.hpp"
#include "tpeqw/errors.hpp"

namespace tpeqw {

/// Everything the rate calculation needs: material, device, cavity tuning,
/// injected carrier density and the total transition frequency.
struct RateInputs {
    MaterialParams material;
    DeviceGeometry geometry;
    CavitySpec cavity;
    double n_e_cm3 = 0.0; // injected carrier density
    double omega0 = 0.0;  // total transition frequency, rad/s (= E_gap / hbar)

    void validate() const {
        material.validate();
        geometry.validate();
        cavity.validate();
        if (!(n_e_cm3 > 0.0)) throw domain_error("rate inputs: n_e_cm3 must be > 0");
        if (!(omega0 > 0.0)) throw domain_error("rate inputs: omega0 must be > 0");
        // energy conservation wiring: the cavity pair must add up to omega0
        if (std::abs(cavity.omega_s + cavity.omega_i - omega0) > 1e-9 * omega0) {
            throw domain_error("rate inputs: omega_s + omega_i must equal omega0");
        }
        if (!std::isfinite(carrier_number())) {
            throw domain_error("rate inputs: carrier number not finite");
        }
    }

    /// N_e = n_e * V, carriers in one quantization cell.
    double carrier_number() const {
        return n_e_cm3 * 1e6 * quantization_volume(geometry);
    }
};

struct PairRateResult {
    double rate_per_s = 0.0;          // absolute pair-generation rate R
    double mean_interval_s = 0.0;     // tau = 1/R, mean time between pairs
    double detected_rate_per_s = 0.0; // after grating extraction
    PolarizationGeometry geometry_pol = PolarizationGeometry::vertical_circular_pair;
};

struct SpectralSample {
    double lambda_s_nm;
    double lambda_i_nm;
    double rate_per_s;
};

/// Pair-generation rate sampled against the signal wavelength, with
/// omega_s + omega_i = omega0 at every sample.
struct SpectralCurve {
    std::vector<SpectralSample> samples;
    double omega0 = 0.0;
};

/// Closed-form vertical pair-generation rate,
///
///   R = pi^3 e^4 N_c / (m0^2 V) * n_e * |M'|^2 / (omega0 omega_s omega_i)
///
/// evaluated at the cavity resonances (e^4 via the Gaussian translation in
/// coulomb_e2). The cavity quality factors do not enter: the cavity shapes
/// the emitted spectrum and direction, not the total rate.
inline PairRateResult closed_form_rate(const RateInputs& in, PolarizationGeometry geom_pol) {
    in.validate();
    const double hw_s_ev = angular_frequency_to_energy_ev(in.cavity.omega_s);
    const double hw_i_ev = angular_frequency_to_energy_ev(in.cavity.omega_i);
    const double m2 = std::norm(mprime(hw_s_ev, hw_i_ev, in.material, geom_pol));
    const double volume = quantization_volume(in.geometry);
    const double cells = unit_cell_count(in.geometry);
    const double n_e_m3 = in.n_e_cm3 * 1e6;
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    const double e4 = coulomb_e2() * coulomb_e2();

    const double rate = pi3 * e4 * cells * n_e_m3 * m2 /
                        (constants.m0 * constants.m0 * volume * in.omega0 * in.cavity.omega_s *
                         in.cavity.omega_i);
    PairRateResult out;
    out.rate_per_s = rate;
    out.mean_interval_s = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
    out.detected_rate_per_s = detected_rate(rate, in.geometry);
    out.geometry_pol = geom_pol;
    return out;
}

/// Dimensional prefactor multiplying M' in the perturbation matrix element,
/// in J:
///
///   (N_c e^2 / 2 m0 c^2)(2 pi hbar c^2 / V) / sqrt(w1 w2)
///     = pi N_c e^2 hbar / (m0 V sqrt(w1 w2))
inline double dimensional_prefactor(double omega1, double omega2, const RateInputs& in) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) {
        throw domain_error("dimensional_prefactor: frequencies must be positive");
    }
    const double volume = quantization_volume(in.geometry);
    const double cells = unit_cell_count(in.geometry);
    return std::numbers::pi * cells * coulomb_e2() * constants.hbar /
           (constants.m0 * volume * std::sqrt(omega1 * omega2));
}

/// Rate curve over the signal wavelength. The grid is uniform in angular
/// frequency and symmetric about the degenerate point omega0/2, covering
/// the conjugate closure of the requested range, so every sampled signal
/// frequency also appears as an idler frequency and mirror samples pair up
/// exactly. The cavity is retuned to (omega_s, omega0 - omega_s) at each
/// point.
inline SpectralCurve spectral_sweep(const RateInputs& in, double lambda_min_nm,
                                    double lambda_max_nm, int steps,
                                    PolarizationGeometry geom_pol =
                                        PolarizationGeometry::vertical_circular_pair) {
    in.validate();
    if (steps < 2) throw domain_error("spectral_sweep: steps must be >= 2");
    if (!(lambda_min_nm > 0.0) || !(lambda_max_nm > lambda_min_nm)) {
        throw domain_error("spectral_sweep: need 0 < lambda_min < lambda_max");
    }
    const double omega_lo = wavelength_to_angular_frequency(lambda_max_nm * 1e-9);
    const double omega_hi = wavelength_to_angular_frequency(lambda_min_nm * 1e-9);
    if (!(omega_hi < in.omega0)) {
        throw domain_error("spectral_sweep: range leaves no energy for the partner photon");
    }
    const double half = in.omega0 / 2.0;
    const double x_max = std::max(std::abs(half - omega_lo), std::abs(omega_hi - half));
    if (!(x_max < half)) {
        throw domain_error("spectral_sweep: range leaves no energy for the partner photon");
    }

    SpectralCurve curve;
    curve.omega0 = in.omega0;
    curve.samples.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        // (2k - (steps-1))/(steps-1) negates exactly under k -> steps-1-k
        const double q = (2.0 * k - (steps - 1)) / static_cast<double>(steps - 1);
        const double omega_s = half + x_max * q;
        const double omega_i = in.omega0 - omega_s;
        RateInputs point = in;
        point.cavity.omega_s = omega_s;
        point.cavity.omega_i = omega_i;
        const PairRateResult r = closed_form_rate(point, geom_pol);
        curve.samples.push_back({angular_frequency_to_wavelength(omega_s) * 1e9,
                                 angular_frequency_to_wavelength(omega_i) * 1e9, r.rate_per_s});
    }
    std::sort(curve.samples.begin(), curve.samples.end(),
              [](const SpectralSample& a, const SpectralSample& b) {
                  return a.lambda_s_nm < b.lambda_s_nm;
              });
    return curve;
}

namespace detail {

template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    // composite Simpson; panels forced even
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int k = 1; k < panels; ++k) {
        acc += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

template <typename F>
double refine_to_tolerance(F&& f, double a, double b, int initial_panels, double rel_tol) {
    double prev = simpson(f, a, b, initial_panels);
    int panels = initial_panels * 2;
    for (int iter = 0; iter < 18; ++iter, panels *= 2) {
        const double next = simpson(f, a, b, panels);
        const double scale = std::max(std::abs(next), 1e-300);
        if (std::abs(next - prev) <= rel_tol * scale) return next;
        prev = next;
    }
    throw convergence_error("quadrature did not converge to the requested tolerance");
}

inline std::vector<std::pair<double, double>> merged_windows(
    std::vector<std::pair<double, double>> w) {
    std::sort(w.begin(), w.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : w) {
        if (!out.empty() && iv.first <= out.back().second) {
            out.back().second = std::max(out.back().second, iv.second);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

} // namespace detail

/// Structural diagnostic: the golden-rule rate with the delta function
/// collapsed to one frequency integral,
///
///   R = (2 pi / hbar^2) N_e Integral F(w) F(omega0 - w) Sum |M|^2 dw
///
/// with both degenerate spin channels summed and M assembled from
/// dimensional_prefactor and mprime. Integration covers +-50 linewidths
/// around each resonance plus the degenerate midpoint, refined until
/// successive estimates agree to 1e-3 relative.
///
/// Inserting the two-Lorentzian density of states here makes the result
/// scale with the cavity quality factor, unlike closed_form_rate; the two
/// are reported side by side as a consistency diagnostic, never reconciled.
inline double quadrature_rate(const RateInputs& in, int grid) {
    in.validate();
    if (grid < 64) throw domain_error("quadrature_rate: grid must be >= 64");

    const double gs = in.cavity.linewidth_s();
    const double gi = in.cavity.linewidth_i();
    const double gm = std::max(gs, gi);
    const double lo_clip = 1e-9 * in.omega0;
    const double hi_clip = in.omega0 - lo_clip;
    std::vector<std::pair<double, double>> windows = {
        {in.cavity.omega_s - 50.0 * gs, in.cavity.omega_s + 50.0 * gs},
        {in.cavity.omega_i - 50.0 * gi, in.cavity.omega_i + 50.0 * gi},
        {in.omega0 / 2.0 - 50.0 * gm, in.omega0 / 2.0 + 50.0 * gm},
    };
    for (auto& w : windows) {
        w.first = std::max(w.first, lo_clip);
        w.second = std::min(w.second, hi_clip);
    }

    const auto integrand = [&in](double omega1) {
        const double omega2 = in.omega0 - omega1;
        const double pref = dimensional_prefactor(omega1, omega2, in);
        const double m2 = std::norm(mprime(angular_frequency_to_energy_ev(omega1),
                                           angular_frequency_to_energy_ev(omega2), in.material,
                                           PolarizationGeometry::vertical_circular_pair));
        const double channel_sum = 2.0 * pref * pref * m2; // two equal spin channels
        return density_of_states(omega1, in.cavity) * density_of_states(omega2, in.cavity) *
               channel_sum;
    };

    double integral = 0.0;
    for (const auto& [a, b] : detail::merged_windows(std::move(windows))) {
        if (b > a) integral += detail::refine_to_tolerance(integrand, a, b, grid, 1e-3);
    }
    return 2.0 * std::numbers::pi / (constants.hbar * constants.hbar) * in.carrier_number() *
           integral;
}

/// log10 of the rate advantage over a reference source.
inline double pdc_comparison(double rate_per_s, double pdc_baseline_per_s) {
    if (!(rate_per_s > 0.0) || !(pdc_baseline_per_s > 0.0)) {
        throw domain_error("pdc_comparison: both rates must be positive");
    }
    return std::log10(rate_per_s / pdc_baseline_per_s);
}

/// Poisson probability that another pair is emitted within one cavity
/// lifetime of a given pair: 1 - exp(-R tau).
inline double pair_overlap_probability(double rate_per_s, double tau_cav_s) {
    if (!(rate_per_s >= 0.0)) throw domain_error("pair_overlap_probability: rate must be >= 0");
    if (!(tau_cav_s >= 0.0)) throw domain_error("pair_overlap_probability: tau must be >= 0");
    return -std::expm1(-rate_per_s * tau_cav_s);
}

} // namespace tpeqw

#endif // TPEQW_RATE_ENGINE_HPP
