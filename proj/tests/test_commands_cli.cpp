#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tpeqw/commands.hpp"
#include "tpeqw/config.hpp"
#include "test_helpers.hpp"

using namespace tpeqw;
using tpeqw_test::rel_diff;

namespace {

struct ProcessResult {
    int exit_code;
    std::string output; // stdout + stderr
};

ProcessResult run_process(const std::string& command) {
    const std::string full = command + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return ProcessResult{WEXITSTATUS(status), out};
}

std::filesystem::path scratch_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / "tpeqw_cli_test" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

const std::string cli = TPEQW_CLI_PATH;
const std::filesystem::path shipped_config =
    std::filesystem::path(TPEQW_SOURCE_DIR) / "configs" / "gaas_default.ini";

} // namespace

TEST_CASE("cmd_rate at the shipped operating point") {
    const RunConfig cfg = default_run_config();
    const ResultDocument doc = cmd_rate(cfg);

    const double r = doc.outputs.at("pair_rate_per_s").get<double>();
    REQUIRE(r > 2.5e10);
    REQUIRE(r < 2.25e11);
    REQUIRE(std::abs(doc.outputs.at("pdc_orders_of_magnitude").get<double>() - 3.0) < 0.5);
    REQUIRE(doc.outputs.at("detected_rate_per_s").get<double>() ==
            r * cfg.geometry.extraction_efficiency);
    REQUIRE(doc.warnings.empty());
    REQUIRE(doc.command == "rate");

    SECTION("doubling the carrier density doubles the reported rate") {
        RunConfig doubled = cfg;
        doubled.run.n_e_cm3 *= 2.0;
        const double r2 = cmd_rate(doubled).outputs.at("pair_rate_per_s").get<double>();
        REQUIRE(rel_diff(r2, 2.0 * r) < 1e-12);
    }
    SECTION("changing Q leaves the reported rate untouched") {
        RunConfig requality = cfg;
        requality.q_s = 100.0;
        requality.q_i = 30000.0;
        const double r2 = cmd_rate(requality).outputs.at("pair_rate_per_s").get<double>();
        REQUIRE(r2 == r);
    }
    SECTION("close resonances surface a warning, not an error") {
        RunConfig close = cfg;
        close.run.lambda_s_nm = 1598.0;
        const ResultDocument warned = cmd_rate(close);
        REQUIRE_FALSE(warned.warnings.empty());
    }
    SECTION("forbidden geometry reports a zero rate with a warning") {
        RunConfig forbidden = cfg;
        forbidden.run.polarization = PolarizationGeometry::mixed_inplane_vertical;
        const ResultDocument doc = cmd_rate(forbidden);
        REQUIRE(doc.outputs.at("pair_rate_per_s").get<double>() == 0.0);
        REQUIRE(doc.outputs.at("pair_overlap_probability").get<double>() == 0.0);
        REQUIRE_FALSE(doc.outputs.contains("mean_interval_s"));
        REQUIRE_FALSE(doc.outputs.contains("pdc_orders_of_magnitude"));
        REQUIRE_FALSE(doc.warnings.empty());
        // the statistics commands cannot run on an empty stream
        REQUIRE_THROWS_AS(cmd_bell(forbidden), domain_error);
        REQUIRE_THROWS_AS(cmd_events(forbidden, std::filesystem::temp_directory_path()),
                          domain_error);
    }
    SECTION("in-plane zz geometry is 16x the vertical rate") {
        RunConfig zz = cfg;
        zz.run.polarization = PolarizationGeometry::inplane_zz;
        const double r_zz = cmd_rate(zz).outputs.at("pair_rate_per_s").get<double>();
        REQUIRE(r_zz / r == 16.0);
    }
    SECTION("quadrature diagnostic is reported beside the closed form") {
        REQUIRE(doc.outputs.contains("quadrature_diagnostic_per_s"));
        const double ratio = doc.outputs.at("quadrature_to_closed_form_ratio").get<double>();
        REQUIRE(doc.outputs.at("quadrature_diagnostic_per_s").get<double>() == ratio * r);
        REQUIRE(ratio > 1e9); // Q-dependent, nowhere near the closed form
        REQUIRE(ratio < 1e10);
    }
}

TEST_CASE("cmd_sweep writes the curve as CSV") {
    const RunConfig cfg = default_run_config();
    const auto dir = scratch_dir("sweep");
    const CommandOutcome out = cmd_sweep(cfg, dir);
    REQUIRE(out.artifacts.size() == 1);

    const std::string csv = read_file(out.artifacts.front());
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == cfg.run.sweep_steps + 1);
    REQUIRE(csv.rfind("lambda_s_nm,lambda_i_nm,rate_per_s\n", 0) == 0);

    SECTION("csv reloads bit-identically against the in-memory curve") {
        const SpectralCurve curve = spectral_sweep(cfg.rate_inputs(), cfg.run.sweep_min_nm,
                                                   cfg.run.sweep_max_nm, cfg.run.sweep_steps,
                                                   cfg.run.polarization);
        std::size_t pos = csv.find('\n') + 1;
        for (const auto& s : curve.samples) {
            char* end = nullptr;
            const char* p = csv.c_str() + pos;
            REQUIRE(std::strtod(p, &end) == s.lambda_s_nm);
            p = end + 1;
            REQUIRE(std::strtod(p, &end) == s.lambda_i_nm);
            p = end + 1;
            REQUIRE(std::strtod(p, &end) == s.rate_per_s);
            pos = csv.find('\n', pos) + 1;
        }
    }
    SECTION("mirror rows agree to 1e-9") {
        const SpectralCurve curve = spectral_sweep(cfg.rate_inputs(), cfg.run.sweep_min_nm,
                                                   cfg.run.sweep_max_nm, cfg.run.sweep_steps,
                                                   cfg.run.polarization);
        const std::size_t n = curve.samples.size();
        for (std::size_t k = 0; k < n; ++k) {
            REQUIRE(rel_diff(curve.samples[k].rate_per_s,
                             curve.samples[n - 1 - k].rate_per_s) < 1e-9);
        }
    }
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("cmd_bell reports analytic and Monte Carlo CHSH") {
    const RunConfig cfg = default_run_config();
    const ResultDocument doc = cmd_bell(cfg);

    const double s_analytic = doc.outputs.at("s_analytic").get<double>();
    const double s_mc = doc.outputs.at("s_monte_carlo").get<double>();
    const double se = doc.outputs.at("s_standard_error").get<double>();
    const double p = doc.outputs.at("purity_p").get<double>();
    const double overlap = doc.outputs.at("pair_overlap_probability").get<double>();

    // purity follows the overlap noise model, and S follows the purity
    REQUIRE(rel_diff(p, 1.0 - overlap) < 1e-12);
    REQUIRE(rel_diff(s_analytic, p * 2.0 * std::sqrt(2.0)) < 1e-12);
    // operating point sits near the reference value and still violates 2
    REQUIRE(std::abs(s_analytic - 2.3625) < 0.05);
    REQUIRE(std::abs(s_mc - s_analytic) < 3.0 * se);

    SECTION("forcing zero overlap recovers the quantum maximum") {
        RunConfig ideal = cfg;
        ideal.run.tau_cav_s = 1e-300; // overlap -> 0
        const double s = cmd_bell(ideal).outputs.at("s_analytic").get<double>();
        REQUIRE(std::abs(s - 2.828427) < 1e-6);
    }
}

TEST_CASE("cmd_events writes a reproducible trace") {
    RunConfig cfg = default_run_config();
    cfg.run.duration_s = 2e-7; // ~1.5e4 events keeps the test fast
    const auto dir_a = scratch_dir("events_a");
    const auto dir_b = scratch_dir("events_b");

    const CommandOutcome a = cmd_events(cfg, dir_a);
    const CommandOutcome b = cmd_events(cfg, dir_b);
    REQUIRE(read_file(a.artifacts.front()) == read_file(b.artifacts.front()));

    const double count = a.document.outputs.at("event_count").get<double>();
    const double expected = a.document.outputs.at("expected_count").get<double>();
    REQUIRE(std::abs(count - expected) < 3.0 * std::sqrt(expected));

    const double observed = a.document.outputs.at("overlap_fraction_observed").get<double>();
    const double analytic = a.document.outputs.at("overlap_probability_analytic").get<double>();
    const double sigma = std::sqrt(analytic * (1.0 - analytic) / count);
    REQUIRE(std::abs(observed - analytic) < 3.0 * sigma);

    SECTION("a different seed moves the trace") {
        RunConfig reseeded = cfg;
        reseeded.run.seed += 1;
        const auto dir_c = scratch_dir("events_c");
        const CommandOutcome c = cmd_events(reseeded, dir_c);
        REQUIRE(read_file(a.artifacts.front()) != read_file(c.artifacts.front()));
    }
    SECTION("absurd event counts are refused") {
        RunConfig huge = cfg;
        huge.run.duration_s = 1.0; // ~7e10 expected events
        REQUIRE_THROWS_AS(cmd_events(huge, dir_a), resource_error);
    }
    std::filesystem::remove_all(dir_a.parent_path());
}

TEST_CASE("cli: rate runs from the shipped config and is reproducible") {
    const std::string cmd = cli + " --config " + shipped_config.string() + " --format json rate";
    const ProcessResult a = run_process(cmd);
    REQUIRE(a.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(a.output);
    REQUIRE(j.at("schema_version").get<int>() == 1);
    REQUIRE(j.at("command").get<std::string>() == "rate");
    const double r = j.at("outputs").at("pair_rate_per_s").get<double>();
    REQUIRE(r > 2.5e10);
    REQUIRE(r < 2.25e11);

    const ProcessResult b = run_process(cmd);
    REQUIRE(b.output == a.output); // byte-identical rerun
}

TEST_CASE("cli: builtin default and env fallback agree with the shipped file") {
    const ProcessResult builtin = run_process(cli + " --format json rate");
    REQUIRE(builtin.exit_code == 0);
    const ProcessResult via_env =
        run_process("TPEQW_CONFIG=" + shipped_config.string() + " " + cli + " --format json rate");
    REQUIRE(via_env.exit_code == 0);
    REQUIRE(nlohmann::json::parse(builtin.output).at("outputs") ==
            nlohmann::json::parse(via_env.output).at("outputs"));
}

TEST_CASE("cli: bell subcommand reports a consistent CHSH block") {
    const auto dir = scratch_dir("bellcfg");
    const auto cfgpath = dir / "short.ini";
    std::string text = default_config_text();
    const std::string needle = "duration_s = 2.0e-6";
    text.replace(text.find(needle), needle.size(), "duration_s = 4.0e-7");
    {
        std::ofstream out(cfgpath);
        out << text;
    }
    const ProcessResult r =
        run_process(cli + " --config " + cfgpath.string() + " --format json bell");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    const double s_analytic = j.at("outputs").at("s_analytic").get<double>();
    const double s_mc = j.at("outputs").at("s_monte_carlo").get<double>();
    const double se = j.at("outputs").at("s_standard_error").get<double>();
    REQUIRE(s_analytic > 2.0);
    REQUIRE(std::abs(s_mc - s_analytic) < 3.0 * se);
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("cli: config errors exit nonzero with a diagnostic") {
    SECTION("missing file") {
        const ProcessResult r = run_process(cli + " --config /nonexistent.ini rate");
        REQUIRE(r.exit_code != 0);
        REQUIRE(r.output.find("error:") != std::string::npos);
    }
    SECTION("unknown key is named") {
        const auto dir = scratch_dir("badcfg");
        const auto bad = dir / "bad.ini";
        {
            std::ofstream out(bad);
            out << default_config_text() << "\nmystery_knob = 12\n";
        }
        const ProcessResult r = run_process(cli + " --config " + bad.string() + " rate");
        REQUIRE(r.exit_code != 0);
        REQUIRE(r.output.find("mystery_knob") != std::string::npos);
        std::filesystem::remove_all(dir.parent_path());
    }
}

TEST_CASE("cli: warnings do not change the exit status") {
    const auto dir = scratch_dir("warncfg");
    const auto path = dir / "close.ini";
    std::string text = default_config_text();
    const std::string needle = "lambda_s_nm = 1590.0";
    text.replace(text.find(needle), needle.size(), "lambda_s_nm = 1598.0");
    {
        std::ofstream out(path);
        out << text;
    }
    const ProcessResult r = run_process(cli + " --config " + path.string() + " --format json rate");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    REQUIRE_FALSE(j.at("warnings").empty());
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("cli: sweep and events write artifacts under --out") {
    const auto dir = scratch_dir("artifacts");
    const ProcessResult sweep =
        run_process(cli + " --out " + dir.string() + " --format json sweep");
    REQUIRE(sweep.exit_code == 0);
    REQUIRE(std::filesystem::exists(dir / "sweep.csv"));

    // keep the event run short
    const auto cfgpath = dir / "short.ini";
    std::string text = default_config_text();
    const std::string needle = "duration_s = 2.0e-6";
    text.replace(text.find(needle), needle.size(), "duration_s = 2.0e-7");
    {
        std::ofstream out(cfgpath);
        out << text;
    }
    const ProcessResult events = run_process(cli + " --config " + cfgpath.string() + " --out " +
                                             dir.string() + " --format json events");
    REQUIRE(events.exit_code == 0);
    REQUIRE(std::filesystem::exists(dir / "events.csv"));

    SECTION("seed override changes the trace and is itself reproducible") {
        const auto dir2 = scratch_dir("artifacts2");
        const std::string base_cmd = cli + " --config " + cfgpath.string() + " --out " +
                                     dir2.string() + " --seed 7 events";
        REQUIRE(run_process(base_cmd).exit_code == 0);
        const std::string first = read_file(dir2 / "events.csv");
        REQUIRE(run_process(base_cmd).exit_code == 0);
        REQUIRE(read_file(dir2 / "events.csv") == first);
        REQUIRE(first != read_file(dir / "events.csv"));
        std::filesystem::remove_all(dir2);
    }
    std::filesystem::remove_all(dir.parent_path());
}
