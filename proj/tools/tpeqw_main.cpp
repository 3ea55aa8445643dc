// tpeqw: CLI for the quantum-well two-photon entangled-pair source model.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tpeqw/tpeqw.hpp"

namespace {

tpeqw::RunConfig resolve_config(const std::string& config_flag) {
    if (!config_flag.empty()) return tpeqw::load_config_file(config_flag);
    if (const char* env = std::getenv("TPEQW_CONFIG"); env != nullptr && *env != '\0') {
        return tpeqw::load_config_file(env);
    }
    return tpeqw::parse_config_text(tpeqw::default_config_text(), "<builtin default>");
}

void emit(const tpeqw::ResultDocument& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.to_json().dump(2) << "\n";
    } else {
        std::cout << doc.to_text();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Model of an electrically pumped quantum-well two-photon emission "
        "entangled-pair source: absolute pair rates, spectral sweeps, emission "
        "statistics and Bell-test figures."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "text";
    std::optional<std::uint64_t> seed_override;
    app.add_option("--config", config_path, "Config file (fallback: $TPEQW_CONFIG, then builtin)");
    app.add_option("--out", out_dir, "Directory for CSV artifacts");
    app.add_option("--seed", seed_override, "Override the run seed");
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    auto* rate = app.add_subcommand("rate", "Absolute pair-generation rate and derived numbers");
    auto* sweep = app.add_subcommand("sweep", "Rate vs. signal wavelength, written as CSV");
    auto* bell = app.add_subcommand("bell", "CHSH statistics at the operating point");
    auto* events = app.add_subcommand("events", "Simulated emission timestamps, written as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        tpeqw::RunConfig cfg = resolve_config(config_path);
        if (seed_override) cfg.run.seed = *seed_override;

        if (rate->parsed()) {
            emit(tpeqw::cmd_rate(cfg), format);
        } else if (sweep->parsed()) {
            emit(tpeqw::cmd_sweep(cfg, out_dir).document, format);
        } else if (bell->parsed()) {
            emit(tpeqw::cmd_bell(cfg), format);
        } else if (events->parsed()) {
            emit(tpeqw::cmd_events(cfg, out_dir).document, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
