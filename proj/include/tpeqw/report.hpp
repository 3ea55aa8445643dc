#ifndef TPEQW_REPORT_HPP
#define TPEQW_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpeqw/errors.hpp"
#include "tpeqw/events.hpp"
#include "tpeqw/rate_engine.hpp"

namespace tpeqw {

/// Machine-readable result of one CLI command: schema version, command
/// name, an echo of the inputs, a flat key-value output map and any
/// warnings. Round-trips losslessly through serialize/parse.
struct ResultDocument {
    int schema_version = 1;
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<std::string> warnings;

    nlohmann::json to_json() const {
        return nlohmann::json{{"schema_version", schema_version},
                              {"command", command},
                              {"inputs", inputs},
                              {"outputs", outputs},
                              {"warnings", warnings}};
    }

    static ResultDocument from_json(const nlohmann::json& j) {
        ResultDocument doc;
        doc.schema_version = j.at("schema_version").get<int>();
        doc.command = j.at("command").get<std::string>();
        doc.inputs = j.at("inputs");
        doc.outputs = j.at("outputs");
        doc.warnings = j.at("warnings").get<std::vector<std::string>>();
        return doc;
    }

    bool operator==(const ResultDocument& other) const { return to_json() == other.to_json(); }

    /// Human-readable summary.
    std::string to_text() const {
        std::string out = "command: " + command + "\n";
        for (const auto& [key, value] : outputs.items()) {
            out += "  " + key + ": " + value.dump() + "\n";
        }
        for (const auto& w : warnings) out += "warning: " + w + "\n";
        return out;
    }
};

/// Full-precision scientific rendering; survives text round-trips exactly.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline std::string render_sweep_csv(const SpectralCurve& curve) {
    std::string out = "lambda_s_nm,lambda_i_nm,rate_per_s\n";
    for (const auto& s : curve.samples) {
        out += format_full(s.lambda_s_nm);
        out += ',';
        out += format_full(s.lambda_i_nm);
        out += ',';
        out += format_full(s.rate_per_s);
        out += '\n';
    }
    return out;
}

inline const char* arm_tag_name(ArmAssignment tag) {
    return tag == ArmAssignment::sigma_plus_idler ? "sigma_plus_idler" : "sigma_plus_signal";
}

inline std::string render_events_csv(const EventTrace& trace) {
    std::string out = "t_s,arm_tag\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out += format_full(trace.timestamps_s[k]);
        out += ',';
        out += arm_tag_name(trace.arm_tags[k]);
        out += '\n';
    }
    return out;
}

/// Writes through a temp file in the same directory, then renames into
/// place, so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw resource_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw resource_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace tpeqw

#endif // TPEQW_REPORT_HPP
