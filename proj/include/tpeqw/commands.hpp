#ifndef TPEQW_COMMANDS_HPP
#define TPEQW_COMMANDS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "tpeqw/config.hpp"
#include "tpeqw/entanglement.hpp"
#include "tpeqw/events.hpp"
#include "tpeqw/rate_engine.hpp"
#include "tpeqw/report.hpp"

namespace tpeqw {

/// A command result plus any artifact files it wrote.
struct CommandOutcome {
    ResultDocument document;
    std::vector<std::filesystem::path> artifacts;
};

inline nlohmann::json config_echo(const RunConfig& cfg) {
    nlohmann::json run{{"n_e_cm3", cfg.run.n_e_cm3},
                       {"lambda_s_nm", cfg.run.lambda_s_nm},
                       {"pdc_baseline_per_s", cfg.run.pdc_baseline_per_s},
                       {"seed", cfg.run.seed},
                       {"duration_s", cfg.run.duration_s},
                       {"tau_cav_s", cfg.run.tau_cav_s},
                       {"sweep_min_nm", cfg.run.sweep_min_nm},
                       {"sweep_max_nm", cfg.run.sweep_max_nm},
                       {"sweep_steps", cfg.run.sweep_steps},
                       {"polarization", static_cast<int>(cfg.run.polarization)}};
    if (cfg.run.lambda_i_nm) run["lambda_i_nm"] = *cfg.run.lambda_i_nm;
    return nlohmann::json{
        {"material",
         {{"label", cfg.material.label},
          {"e_gap_ev", cfg.material.e_gap_ev},
          {"e_c_ev", cfg.material.e_c_ev},
          {"delta_c_ev", cfg.material.delta_c_ev},
          {"p1_ev_nm", cfg.material.p1_ev_nm},
          {"q_ev_nm", cfg.material.q_ev_nm}}},
        {"geometry",
         {{"cavity_height_nm", cfg.geometry.cavity_height_nm},
          {"grating_period_nm", cfg.geometry.grating_period_nm},
          {"fill_factor", cfg.geometry.fill_factor},
          {"device_area_mm2", cfg.geometry.device_area_mm2},
          {"refractive_index", cfg.geometry.refractive_index},
          {"extraction_efficiency", cfg.geometry.extraction_efficiency}}},
        {"cavity", {{"q_s", cfg.q_s}, {"q_i", cfg.q_i}}},
        {"run", run}};
}

namespace detail {
inline std::vector<std::string> collect_warnings(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    if (!cfg.cavity_spec().well_separated()) {
        warnings.push_back(
            "cavity resonances closer than 10 combined linewidths; the two-Lorentzian "
            "density of states assumes well-separated lines");
    }
    return warnings;
}
} // namespace detail

/// Absolute pair rate and the derived operating numbers. A forbidden
/// polarization geometry yields a zero rate; the quantities undefined at
/// zero rate are omitted and a warning says why.
inline ResultDocument cmd_rate(const RunConfig& cfg) {
    const PairRateResult rate = closed_form_rate(cfg.rate_inputs(), cfg.run.polarization);
    const double overlap = pair_overlap_probability(rate.rate_per_s, cfg.run.tau_cav_s);

    ResultDocument doc;
    doc.command = "rate";
    doc.inputs = config_echo(cfg);
    doc.warnings = detail::collect_warnings(cfg);
    doc.outputs = {
        {"pair_rate_per_s", rate.rate_per_s},
        {"detected_rate_per_s", rate.detected_rate_per_s},
        {"pair_overlap_probability", overlap},
    };
    if (rate.rate_per_s > 0.0) {
        doc.outputs["mean_interval_s"] = rate.mean_interval_s;
        doc.outputs["pdc_orders_of_magnitude"] =
            pdc_comparison(rate.rate_per_s, cfg.run.pdc_baseline_per_s);
    } else {
        doc.warnings.push_back(
            "pair rate is zero (forbidden polarization geometry); mean interval and "
            "reference comparison are undefined");
    }
    // the golden-rule quadrature models the vertical channel; report it next
    // to the closed form without reconciling the two
    if (cfg.run.polarization == PolarizationGeometry::vertical_circular_pair) {
        try {
            const double diagnostic = quadrature_rate(cfg.rate_inputs(), 64);
            doc.outputs["quadrature_diagnostic_per_s"] = diagnostic;
            doc.outputs["quadrature_to_closed_form_ratio"] = diagnostic / rate.rate_per_s;
        } catch (const convergence_error& e) {
            doc.warnings.push_back(std::string("quadrature diagnostic unavailable: ") + e.what());
        }
    }
    return doc;
}

/// Rate-vs-wavelength curve, written as a CSV artifact.
inline CommandOutcome cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const SpectralCurve curve = spectral_sweep(cfg.rate_inputs(), cfg.run.sweep_min_nm,
                                               cfg.run.sweep_max_nm, cfg.run.sweep_steps,
                                               cfg.run.polarization);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path csv_path = out_dir / "sweep.csv";
    write_file_atomic(csv_path, render_sweep_csv(curve));

    double peak_rate = 0.0;
    double peak_lambda = 0.0;
    for (const auto& s : curve.samples) {
        if (s.rate_per_s >= peak_rate) {
            peak_rate = s.rate_per_s;
            peak_lambda = s.lambda_s_nm;
        }
    }

    CommandOutcome out;
    out.document.command = "sweep";
    out.document.inputs = config_echo(cfg);
    out.document.warnings = detail::collect_warnings(cfg);
    out.document.outputs = {{"csv_path", csv_path.string()},
                            {"rows", curve.samples.size()},
                            {"peak_rate_per_s", peak_rate},
                            {"peak_lambda_s_nm", peak_lambda}};
    out.artifacts = {csv_path};
    return out;
}

/// Entanglement quality at the configured operating point: analytic CHSH,
/// Monte Carlo cross-check, and the purity implied by the pair-overlap
/// noise model.
inline ResultDocument cmd_bell(const RunConfig& cfg) {
    const PairRateResult rate = closed_form_rate(cfg.rate_inputs(), cfg.run.polarization);
    if (!(rate.rate_per_s > 0.0)) {
        throw domain_error(
            "bell: the configured polarization geometry forbids pair emission, so there "
            "are no coincidences to analyze");
    }
    const double overlap = pair_overlap_probability(rate.rate_per_s, cfg.run.tau_cav_s);
    const CavitySpec cavity = cfg.cavity_spec();
    const TwoPhotonState state =
        accidental_degraded_state(cavity.omega_i, cavity.omega_s, overlap);
    const ChshAngles angles = chsh_optimal_settings();
    const double s_analytic = chsh_value(state, angles.a1, angles.a2, angles.b1, angles.b2);

    const EventTrace trace = simulate_events(rate.rate_per_s, cfg.run.duration_s, cfg.run.seed);
    const McChshResult mc = mc_chsh(trace, state, angles, cfg.run.seed);

    ResultDocument doc;
    doc.command = "bell";
    doc.inputs = config_echo(cfg);
    doc.warnings = detail::collect_warnings(cfg);
    doc.outputs = {{"s_analytic", s_analytic},
                   {"s_monte_carlo", mc.s_value},
                   {"s_standard_error", mc.standard_error},
                   {"events_used", mc.events_used},
                   {"purity_p", state.p},
                   {"pair_overlap_probability", overlap}};
    return doc;
}

/// Poisson emission trace, written as a CSV artifact with per-event arm
/// tags, plus the observed pair-overlap fraction.
inline CommandOutcome cmd_events(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const PairRateResult rate = closed_form_rate(cfg.rate_inputs(), cfg.run.polarization);
    if (!(rate.rate_per_s > 0.0)) {
        throw domain_error(
            "events: the configured polarization geometry forbids pair emission, so there "
            "is nothing to simulate");
    }
    const EventTrace trace = simulate_events(rate.rate_per_s, cfg.run.duration_s, cfg.run.seed);
    const double observed = overlap_fraction(trace, cfg.run.tau_cav_s);
    const double analytic = pair_overlap_probability(rate.rate_per_s, cfg.run.tau_cav_s);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path csv_path = out_dir / "events.csv";
    write_file_atomic(csv_path, render_events_csv(trace));

    CommandOutcome out;
    out.document.command = "events";
    out.document.inputs = config_echo(cfg);
    out.document.warnings = detail::collect_warnings(cfg);
    out.document.outputs = {{"csv_path", csv_path.string()},
                            {"event_count", trace.size()},
                            {"expected_count", rate.rate_per_s * cfg.run.duration_s},
                            {"overlap_fraction_observed", observed},
                            {"overlap_probability_analytic", analytic}};
    out.artifacts = {csv_path};
    return out;
}

} // namespace tpeqw

#endif // TPEQW_COMMANDS_HPP
