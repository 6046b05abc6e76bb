#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "bound.hpp"
#include "errors.hpp"
#include "series.hpp"
#include "tubempc.hpp"

namespace mrpi {

/// Shortest round-trip decimal rendering of a double. Locale-free and
/// deterministic, so identical numbers always serialize to identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw InvalidArgument("format_double: value does not render");
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) { return std::to_string(v); }

/// Write text to a file, creating parent directories as needed. Always LF
/// line endings (the content is written verbatim).
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("write_text_file: cannot open " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidArgument("write_text_file: short write to " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("read_text_file: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// CSV renderers (deterministic: same inputs, same bytes)
// ---------------------------------------------------------------------------

/// Error-decay curve: one row per truncation length.
/// Header: n,d_num,d_bound,gamma,r_w,convention,seed
inline std::string error_curve_csv(const std::vector<ErrorPoint>& curve,
                                   const std::vector<double>& bounds, double gamma, double r_w,
                                   TailExponent convention, std::uint64_t seed) {
    if (curve.size() != bounds.size())
        throw DimensionMismatch("error_curve_csv: curve/bounds length");
    std::string out = "n,d_num,d_bound,gamma,r_w,convention,seed\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out += format_int(curve[i].n);
        out += ',';
        out += format_double(curve[i].d_num);
        out += ',';
        out += format_double(bounds[i]);
        out += ',';
        out += format_double(gamma);
        out += ',';
        out += format_double(r_w);
        out += ',';
        out += tail_exponent_name(convention);
        out += ',';
        out += std::to_string(seed);
        out += '\n';
    }
    return out;
}

/// Closed-loop rollout log. Vector-valued columns are expanded per coordinate:
/// rollout,k,x_real_0,...,x_nom_0,...,u_nom_0,...,u_applied_0,...,w_0,...
inline std::string trajectory_csv(const std::vector<TrajectoryLog>& logs) {
    if (logs.empty() || logs.front().steps.empty())
        throw InvalidArgument("trajectory_csv: empty log");
    const std::size_t nx = logs.front().steps.front().x_real.size();
    const std::size_t nu = logs.front().steps.front().u_nom.size();

    std::string out = "rollout,k";
    auto emit_cols = [&out](const char* stem, std::size_t count) {
        for (std::size_t j = 0; j < count; ++j) {
            out += ',';
            out += stem;
            out += '_';
            out += std::to_string(j);
        }
    };
    emit_cols("x_real", nx);
    emit_cols("x_nom", nx);
    emit_cols("u_nom", nu);
    emit_cols("u_applied", nu);
    emit_cols("w", nx);
    out += '\n';

    auto emit_vec = [&out](const Vec& v) {
        for (double x : v) {
            out += ',';
            out += format_double(x);
        }
    };
    for (const TrajectoryLog& log : logs)
        for (const StepRecord& rec : log.steps) {
            out += format_int(log.rollout);
            out += ',';
            out += format_int(rec.k);
            emit_vec(rec.x_real);
            emit_vec(rec.x_nom);
            emit_vec(rec.u_nom);
            emit_vec(rec.u_applied);
            emit_vec(rec.w);
            out += '\n';
        }
    return out;
}

/// Feasible-set comparison: one row per design per state axis.
/// Header: design,axis,halfwidth,volume
inline std::string comparison_csv(const std::vector<DesignReport>& reports) {
    std::string out = "design,axis,halfwidth,volume\n";
    for (const DesignReport& r : reports)
        for (std::size_t j = 0; j < r.x_tight.dim(); ++j) {
            out += r.design;
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += format_double(r.x_tight.halfwidth[j]);
            out += ',';
            out += format_double(r.volume);
            out += '\n';
        }
    return out;
}

/// Truncation certificate as flat key-value text.
inline std::string certificate_text(int n, double gamma, double r_w, double tail,
                                    const std::string& norm_id, bool conservative_radius) {
    std::string out;
    out += "n = " + format_int(n) + "\n";
    out += "gamma = " + format_double(gamma) + "\n";
    out += "r_w = " + format_double(r_w) + "\n";
    out += "tail = " + format_double(tail) + "\n";
    out += "norm_id = " + norm_id + "\n";
    out += std::string("conservative_radius = ") + (conservative_radius ? "true" : "false") +
           "\n";
    return out;
}

/// Flat key-value manifest; insertion order preserved.
inline std::string manifest_text(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
    return out;
}

}  // namespace mrpi
