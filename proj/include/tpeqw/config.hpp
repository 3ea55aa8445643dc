#ifndef TPEQW_CONFIG_HPP
#define TPEQW_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "tpeqw/band_model.hpp"
#include "tpeqw/cavity.hpp"
#include "tpeqw/constants.hpp"
#include "tpeqw/errors.hpp"
#include "tpeqw/rate_engine.hpp"

namespace tpeqw {

/// Run-level settings: carrier density, emission pair, references for the
/// downstream statistics, and the sweep/event parameters.
struct RunSettings {
    double n_e_cm3 = 0.0;
    double lambda_s_nm = 0.0;                 // signal wavelength; idler follows from omega0
    std::optional<double> lambda_i_nm;        // optional, checked against energy conservation
    double pdc_baseline_per_s = 7.5e7;        // reference pair rate for the comparison output
    std::uint64_t seed = 0;
    double duration_s = 0.0;                  // event-simulation span
    double tau_cav_s = 0.0;                   // cavity lifetime anchor used for overlap statistics
    double sweep_min_nm = 0.0;
    double sweep_max_nm = 0.0;
    int sweep_steps = 0;
    PolarizationGeometry polarization = PolarizationGeometry::vertical_circular_pair;
};

/// Fully validated run configuration, one block per module.
struct RunConfig {
    MaterialParams material;
    DeviceGeometry geometry;
    double q_s = 1.0;
    double q_i = 1.0;
    RunSettings run;

    double omega0() const { return energy_ev_to_angular_frequency(material.e_gap_ev); }

    CavitySpec cavity_spec() const {
        const double omega_s = wavelength_to_angular_frequency(run.lambda_s_nm * 1e-9);
        const double omega_i = run.lambda_i_nm
                                   ? wavelength_to_angular_frequency(*run.lambda_i_nm * 1e-9)
                                   : omega0() - omega_s;
        return CavitySpec{omega_s, omega_i, q_s, q_i};
    }

    RateInputs rate_inputs() const {
        return RateInputs{material, geometry, cavity_spec(), run.n_e_cm3, omega0()};
    }
};

/// Shipped GaAs/AlGaAs operating point.
inline RunConfig default_run_config() {
    RunConfig cfg;
    cfg.material = gaas_14band();
    cfg.geometry = DeviceGeometry{235.3, 490.0, 0.5, 1.0, 3.4, 0.4};
    cfg.q_s = 1000.0;
    cfg.q_i = 1000.0;
    cfg.run.n_e_cm3 = 1.0e19;
    cfg.run.lambda_s_nm = 1590.0;
    cfg.run.pdc_baseline_per_s = 7.5e7;
    cfg.run.seed = 42;
    cfg.run.duration_s = 2.0e-6;
    cfg.run.tau_cav_s = 2.4e-12;
    cfg.run.sweep_min_nm = 1450.0;
    cfg.run.sweep_max_nm = 1790.0;
    cfg.run.sweep_steps = 101;
    cfg.run.polarization = PolarizationGeometry::vertical_circular_pair;
    return cfg;
}

/// The same operating point as config text; kept in lockstep with
/// default_run_config by a unit test.
inline std::string default_config_text() {
    return R"(# Electrically pumped quantum-well two-photon entangled-pair source.
# GaAs/AlGaAs operating point: 1e19 cm^-3 injection, 1 mm^2 device,
# half-wave cavity, Q = 1000, pair near 1.6 um.

[material]
label = GaAs-14band
e_gap_ev = 1.55
e_c_ev = 2.98
delta_c_ev = 0.20
p1_ev_nm = 1.03
q_ev_nm = 0.82

[geometry]
cavity_height_nm = 235.3
grating_period_nm = 490.0
fill_factor = 0.5
device_area_mm2 = 1.0
refractive_index = 3.4
extraction_efficiency = 0.4

[cavity]
q_s = 1000.0
q_i = 1000.0

[run]
n_e_cm3 = 1.0e19
lambda_s_nm = 1590.0
pdc_baseline_per_s = 7.5e7
seed = 42
duration_s = 2.0e-6
tau_cav_s = 2.4e-12
sweep_min_nm = 1450.0
sweep_max_nm = 1790.0
sweep_steps = 101
polarization = vertical_circular_pair
)";
}

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

struct ParsedSections {
    std::map<std::string, std::map<std::string, ConfigEntry>> sections;
    std::string source;

    [[noreturn]] void fail(int line, const std::string& msg) const {
        std::ostringstream os;
        os << source << ":" << line << ": " << msg;
        throw config_error(os.str());
    }
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline ParsedSections tokenize_config(std::string_view text, std::string_view source_name) {
    ParsedSections parsed;
    parsed.source = std::string(source_name);
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') parsed.fail(line_no, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current.empty()) parsed.fail(line_no, "empty section name");
            parsed.sections[current]; // section may legitimately stay empty
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) parsed.fail(line_no, "expected 'key = value'");
        if (current.empty()) parsed.fail(line_no, "key outside any section");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) parsed.fail(line_no, "empty key");
        auto [it, inserted] = parsed.sections[current].emplace(key, ConfigEntry{value, line_no});
        if (!inserted) parsed.fail(line_no, "duplicate key '" + key + "' in section [" + current + "]");
    }
    return parsed;
}

/// Pulls typed values out of one section, erroring on unknown leftovers.
class SectionReader {
  public:
    SectionReader(ParsedSections& parsed, const std::string& name)
        : parsed_(parsed), name_(name) {
        const auto it = parsed.sections.find(name);
        if (it == parsed.sections.end()) {
            throw config_error(parsed.source + ": missing section [" + name + "]");
        }
        entries_ = &it->second;
    }

    double number(const std::string& key) {
        const ConfigEntry e = take(key);
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(e.value, &consumed);
        } catch (const std::exception&) {
            parsed_.fail(e.line, "key '" + key + "' is not a number: '" + e.value + "'");
        }
        if (consumed != e.value.size()) {
            parsed_.fail(e.line, "key '" + key + "' has trailing characters: '" + e.value + "'");
        }
        return v;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (entries_->find(key) == entries_->end()) return std::nullopt;
        return number(key);
    }

    std::uint64_t unsigned_integer(const std::string& key) {
        const ConfigEntry e = take(key);
        // stoull would wrap a leading minus sign instead of rejecting it
        if (e.value.find('-') != std::string::npos) {
            parsed_.fail(e.line, "key '" + key + "' is not an unsigned integer: '" + e.value + "'");
        }
        try {
            std::size_t consumed = 0;
            const unsigned long long v = std::stoull(e.value, &consumed);
            if (consumed != e.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            parsed_.fail(e.line, "key '" + key + "' is not an unsigned integer: '" + e.value + "'");
        }
    }

    std::string text(const std::string& key) { return take(key).value; }

    int line_of(const std::string& key) const {
        const auto it = taken_.find(key);
        return it == taken_.end() ? 0 : it->second;
    }

    /// Call after reading everything this section supports.
    void reject_unknown() const {
        for (const auto& [key, entry] : *entries_) {
            if (taken_.find(key) == taken_.end()) {
                parsed_.fail(entry.line, "unknown key '" + key + "' in section [" + name_ + "]");
            }
        }
    }

    [[noreturn]] void fail_at(const std::string& key, const std::string& msg) const {
        parsed_.fail(line_of(key), msg);
    }

  private:
    ConfigEntry take(const std::string& key) {
        const auto it = entries_->find(key);
        if (it == entries_->end()) {
            throw config_error(parsed_.source + ": missing key '" + key + "' in section [" +
                               name_ + "]");
        }
        taken_.emplace(key, it->second.line);
        return it->second;
    }

    ParsedSections& parsed_;
    std::string name_;
    const std::map<std::string, ConfigEntry>* entries_ = nullptr;
    std::map<std::string, int> taken_;
};

inline PolarizationGeometry parse_polarization(SectionReader& run) {
    const std::string v = run.text("polarization");
    if (v == "vertical_circular_pair") return PolarizationGeometry::vertical_circular_pair;
    if (v == "inplane_zz") return PolarizationGeometry::inplane_zz;
    if (v == "mixed_inplane_vertical") return PolarizationGeometry::mixed_inplane_vertical;
    run.fail_at("polarization",
                "polarization must be one of vertical_circular_pair, inplane_zz, "
                "mixed_inplane_vertical");
}

} // namespace detail

/// Parses and validates a sectioned key = value config. Unknown keys are
/// rejected by name; the first violated invariant is reported with its file
/// location.
inline RunConfig parse_config_text(std::string_view text, std::string_view source_name) {
    detail::ParsedSections parsed = detail::tokenize_config(text, source_name);
    for (const auto& [name, entries] : parsed.sections) {
        if (name != "material" && name != "geometry" && name != "cavity" && name != "run") {
            throw config_error(parsed.source + ": unknown section [" + name + "]");
        }
    }

    RunConfig cfg;
    detail::SectionReader material(parsed, "material");
    cfg.material.label = material.text("label");
    cfg.material.e_gap_ev = material.number("e_gap_ev");
    cfg.material.e_c_ev = material.number("e_c_ev");
    cfg.material.delta_c_ev = material.number("delta_c_ev");
    cfg.material.p1_ev_nm = material.number("p1_ev_nm");
    cfg.material.q_ev_nm = material.number("q_ev_nm");
    material.reject_unknown();
    try {
        cfg.material.validate();
    } catch (const domain_error& e) {
        material.fail_at("e_gap_ev", e.what());
    }

    detail::SectionReader geometry(parsed, "geometry");
    cfg.geometry.cavity_height_nm = geometry.number("cavity_height_nm");
    cfg.geometry.grating_period_nm = geometry.number("grating_period_nm");
    cfg.geometry.fill_factor = geometry.number("fill_factor");
    cfg.geometry.device_area_mm2 = geometry.number("device_area_mm2");
    cfg.geometry.refractive_index = geometry.number("refractive_index");
    cfg.geometry.extraction_efficiency = geometry.number("extraction_efficiency");
    geometry.reject_unknown();
    try {
        cfg.geometry.validate();
    } catch (const domain_error& e) {
        geometry.fail_at("cavity_height_nm", e.what());
    }

    detail::SectionReader cavity(parsed, "cavity");
    cfg.q_s = cavity.number("q_s");
    cfg.q_i = cavity.number("q_i");
    cavity.reject_unknown();

    detail::SectionReader run(parsed, "run");
    cfg.run.n_e_cm3 = run.number("n_e_cm3");
    cfg.run.lambda_s_nm = run.number("lambda_s_nm");
    cfg.run.lambda_i_nm = run.optional_number("lambda_i_nm");
    cfg.run.pdc_baseline_per_s = run.number("pdc_baseline_per_s");
    cfg.run.seed = run.unsigned_integer("seed");
    cfg.run.duration_s = run.number("duration_s");
    cfg.run.tau_cav_s = run.number("tau_cav_s");
    cfg.run.sweep_min_nm = run.number("sweep_min_nm");
    cfg.run.sweep_max_nm = run.number("sweep_max_nm");
    cfg.run.sweep_steps = static_cast<int>(run.unsigned_integer("sweep_steps"));
    cfg.run.polarization = detail::parse_polarization(run);
    run.reject_unknown();

    if (!(cfg.run.n_e_cm3 > 0.0)) run.fail_at("n_e_cm3", "n_e_cm3 must be > 0");
    if (!(cfg.run.lambda_s_nm > 0.0)) run.fail_at("lambda_s_nm", "lambda_s_nm must be > 0");
    if (!(cfg.run.pdc_baseline_per_s > 0.0)) {
        run.fail_at("pdc_baseline_per_s", "pdc_baseline_per_s must be > 0");
    }
    if (!(cfg.run.duration_s > 0.0)) run.fail_at("duration_s", "duration_s must be > 0");
    if (!(cfg.run.tau_cav_s > 0.0)) run.fail_at("tau_cav_s", "tau_cav_s must be > 0");
    if (cfg.run.sweep_steps < 2) run.fail_at("sweep_steps", "sweep_steps must be >= 2");
    if (!(cfg.run.sweep_min_nm > 0.0 && cfg.run.sweep_max_nm > cfg.run.sweep_min_nm)) {
        run.fail_at("sweep_min_nm", "need 0 < sweep_min_nm < sweep_max_nm");
    }

    try {
        cfg.cavity_spec().validate();
    } catch (const domain_error& e) {
        cavity.fail_at("q_s", e.what());
    }
    if (cfg.run.lambda_i_nm) {
        const CavitySpec spec = cfg.cavity_spec();
        if (std::abs(spec.omega_s + spec.omega_i - cfg.omega0()) > 1e-9 * cfg.omega0()) {
            run.fail_at("lambda_i_nm",
                        "lambda_i_nm violates energy conservation with e_gap_ev and lambda_s_nm");
        }
    }
    try {
        cfg.rate_inputs().validate();
    } catch (const domain_error& e) {
        run.fail_at("lambda_s_nm", e.what());
    }
    return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace tpeqw

#endif // TPEQW_CONFIG_HPP
