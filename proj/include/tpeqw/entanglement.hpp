#ifndef TPEQW_ENTANGLEMENT_HPP
#define TPEQW_ENTANGLEMENT_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tpeqw/errors.hpp"
#include "tpeqw/events.hpp"
#include "tpeqw/rng.hpp"

namespace tpeqw {

/// Detection arms, tagged by polarization: the right-circular (sigma+)
/// photon goes to R, the left-circular (sigma-) photon to L. This tagging
/// is fixed by the selection rules and survives any mixing of the
/// frequency degree of freedom.
enum class Arm { R, L };

/// Projective measurement on the frequency qubit of one arm, along an
/// equatorial Bloch axis at the given angle.
struct AnalyzerSetting {
    AnalyzerSetting(Arm arm, double angle_rad)
        : arm(arm), angle(std::remainder(angle_rad, 2.0 * std::numbers::pi)) {}

    Arm arm;
    double angle; // reduced mod 2pi
};

/// Two-photon state over the per-arm frequency qubit {|w_i>, |w_s>}, arms
/// ordered R then L. The purity parameter p mixes the pure energy-entangled
/// state with the maximally mixed one (Werner form); p = 1 is the pure
/// state (|w_i>_R |w_s>_L + |w_s>_R |w_i>_L)/sqrt(2).
struct TwoPhotonState {
    double omega_i = 0.0;
    double omega_s = 0.0;
    Eigen::Matrix4cd rho;
    double p = 1.0;
};

namespace detail {

inline Eigen::Vector4cd entangled_pair_ket() {
    // basis index 2*r + l with 0 = |w_i>, 1 = |w_s>
    Eigen::Vector4cd psi;
    const double a = 1.0 / std::sqrt(2.0);
    psi << 0.0, a, a, 0.0; // |01> + |10>
    return psi;
}

inline Eigen::Matrix2cd equatorial_projector(double angle, int outcome_sign) {
    Eigen::Matrix2cd p;
    const std::complex<double> off = 0.5 * static_cast<double>(outcome_sign) *
                                     std::exp(std::complex<double>(0.0, -angle));
    p << 0.5, off, std::conj(off), 0.5;
    return p;
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

} // namespace detail

/// The pure energy-entangled pair state. Degenerate frequencies cannot be
/// tagged, so they are rejected.
inline TwoPhotonState ideal_state(double omega_i, double omega_s) {
    if (omega_i == omega_s) {
        throw domain_error("ideal_state: degenerate frequencies cannot be tagged");
    }
    TwoPhotonState st;
    st.omega_i = omega_i;
    st.omega_s = omega_s;
    st.p = 1.0;
    const Eigen::Vector4cd psi = detail::entangled_pair_ket();
    st.rho = psi * psi.adjoint();
    return st;
}

/// Werner mixture: p * (pure pair state) + (1-p)/4 * identity.
inline TwoPhotonState werner_state(double omega_i, double omega_s, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("werner_state: p must be in [0, 1]");
    TwoPhotonState st = ideal_state(omega_i, omega_s);
    st.p = p;
    st.rho = p * st.rho + (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity();
    return st;
}

/// Accidental coincidences between unrelated pairs enter as white noise:
/// a pair that overlaps another one within the cavity lifetime carries no
/// usable correlation, so the state is the Werner mixture with
/// p = 1 - overlap probability.
inline TwoPhotonState accidental_degraded_state(double omega_i, double omega_s,
                                                double overlap_prob) {
    if (!(overlap_prob >= 0.0 && overlap_prob <= 1.0)) {
        throw domain_error("accidental_degraded_state: overlap probability must be in [0, 1]");
    }
    return werner_state(omega_i, omega_s, 1.0 - overlap_prob);
}

namespace detail {
inline void require_arms(const AnalyzerSetting& a, const AnalyzerSetting& b) {
    if (a.arm != Arm::R || b.arm != Arm::L) {
        throw domain_error("analyzer settings must be one R-arm and one L-arm");
    }
}
} // namespace detail

/// Born-rule probabilities of the four joint outcomes (++, +-, -+, --) for
/// one analyzer per arm.
inline std::array<double, 4> joint_outcome_probabilities(const TwoPhotonState& st,
                                                         const AnalyzerSetting& a,
                                                         const AnalyzerSetting& b) {
    detail::require_arms(a, b);
    std::array<double, 4> out{};
    int idx = 0;
    for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
            const Eigen::Matrix4cd joint = detail::kron2(detail::equatorial_projector(a.angle, sa),
                                                         detail::equatorial_projector(b.angle, sb));
            out[idx++] = (st.rho * joint).trace().real();
        }
    }
    return out;
}

/// Probability of a joint "+" outcome on both arms.
inline double coincidence_probability(const TwoPhotonState& st, const AnalyzerSetting& a,
                                      const AnalyzerSetting& b) {
    return joint_outcome_probabilities(st, a, b)[0];
}

/// +-1 outcome correlation E(a, b).
inline double correlation(const TwoPhotonState& st, const AnalyzerSetting& a,
                          const AnalyzerSetting& b) {
    const auto p = joint_outcome_probabilities(st, a, b);
    return p[0] - p[1] - p[2] + p[3];
}

/// CHSH combination S = |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)|.
inline double chsh_value(const TwoPhotonState& st, const AnalyzerSetting& a1,
                         const AnalyzerSetting& a2, const AnalyzerSetting& b1,
                         const AnalyzerSetting& b2) {
    return std::abs(correlation(st, a1, b1) + correlation(st, a1, b2) + correlation(st, a2, b1) -
                    correlation(st, a2, b2));
}

struct ChshAngles {
    AnalyzerSetting a1, a2, b1, b2;
};

/// Angle set maximizing S for the pure pair state (S = 2 sqrt 2 there).
inline ChshAngles chsh_optimal_settings() {
    const double pi4 = std::numbers::pi / 4.0;
    return ChshAngles{AnalyzerSetting(Arm::R, 0.0), AnalyzerSetting(Arm::R, 2.0 * pi4),
                      AnalyzerSetting(Arm::L, pi4), AnalyzerSetting(Arm::L, -pi4)};
}

/// Marginal "+" probability of a single arm, other arm untouched.
inline double marginal_plus_probability(const TwoPhotonState& st, const AnalyzerSetting& s) {
    const Eigen::Matrix2cd proj = detail::equatorial_projector(s.angle, +1);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix4cd joint =
        s.arm == Arm::R ? detail::kron2(proj, id) : detail::kron2(id, proj);
    return (st.rho * joint).trace().real();
}

/// Hermitian, unit trace, positive semidefinite within tolerance.
inline bool is_physical_density(const Eigen::Matrix4cd& rho, double tol = 1e-9) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho);
    return solver.eigenvalues().minCoeff() > -tol;
}

/// Tr(rho^2).
inline double state_purity(const TwoPhotonState& st) {
    return (st.rho * st.rho).trace().real();
}

struct McChshResult {
    double s_value = 0.0;
    double standard_error = 0.0;
    std::size_t events_used = 0;
};

/// Monte Carlo CHSH estimate: each emission event is assigned one of the
/// four analyzer pairs in rotation and a joint outcome is drawn from the
/// Born probabilities. Deterministic for a fixed seed.
inline McChshResult mc_chsh(const EventTrace& trace, const TwoPhotonState& st,
                            const ChshAngles& angles, std::uint64_t shots_seed) {
    const std::size_t n = trace.size();
    if (n < 100) {
        throw insufficient_statistics_error("mc_chsh: need at least 100 events");
    }
    const std::array<std::pair<const AnalyzerSetting*, const AnalyzerSetting*>, 4> pairs = {{
        {&angles.a1, &angles.b1},
        {&angles.a1, &angles.b2},
        {&angles.a2, &angles.b1},
        {&angles.a2, &angles.b2},
    }};
    std::array<std::array<double, 4>, 4> probs{};
    for (int i = 0; i < 4; ++i) {
        probs[i] = joint_outcome_probabilities(st, *pairs[i].first, *pairs[i].second);
    }

    CounterRng rng = CounterRng(shots_seed).split(0x6d635f63687368ULL); // "mc_chsh" stream
    std::array<long long, 4> sum{};
    std::array<long long, 4> count{};
    for (std::size_t k = 0; k < n; ++k) {
        const int i = static_cast<int>(k % 4);
        const double u = rng.uniform01();
        // outcomes ordered ++, +-, -+, --; products +1, -1, -1, +1
        double cdf = 0.0;
        int outcome = 3;
        for (int j = 0; j < 4; ++j) {
            cdf += probs[i][j];
            if (u < cdf) {
                outcome = j;
                break;
            }
        }
        sum[i] += (outcome == 0 || outcome == 3) ? +1 : -1;
        count[i] += 1;
    }

    double s = 0.0;
    double var = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double e = static_cast<double>(sum[i]) / static_cast<double>(count[i]);
        s += (i == 3 ? -e : e);
        var += (1.0 - e * e) / static_cast<double>(count[i]);
    }
    return McChshResult{std::abs(s), std::sqrt(var), n};
}

} // namespace tpeqw

#endif // TPEQW_ENTANGLEMENT_HPP
