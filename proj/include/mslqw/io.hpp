/*
 * io.hpp — file formats: JSON/CSV serialization, plan files, run manifests
 *
 * Machine-readable artifacts of the experiment harness:
 *
 *   MarkedSet   ⇄ JSON {"n": int, "vertices": [int, ...]}
 *   WalkResult  → JSON {"peak_probability", "peak_step", "series"}
 *                 and two-column CSV (step, probability)
 *   BatchPlan   ⇄ JSON object or a flat TOML file (subset: comments,
 *                 key = value with string/int/float/bool/array values;
 *                 integer ranges may be spelled "1..30")
 *   BatchResult → long CSV (one row per scheme/k/m/sample), summary JSON
 *                 keyed "scheme/k/m", and one mean-peak surface CSV
 *                 (k rows × m columns) per scheme
 *   FitResult   → JSON plus a per-point (x, t, t_fit) CSV for plotting
 *   RunManifest → JSON recording the resolved config, seed, tool version,
 *                 timestamps, and FNV-1a hashes of every output file
 *
 * CSV cells are comma-free by construction ('.' decimal point, ';' inside
 * vertex lists), so no quoting is ever required.  Floating-point values are
 * printed with %.17g and round-trip exactly.  JSON objects serialize with
 * sorted keys, making every artifact byte-stable for fixed inputs.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"
#include "fitting.hpp"
#include "hypercube.hpp"
#include "version.hpp"
#include "walk.hpp"
#include "weights.hpp"

namespace mslqw {

using json = nlohmann::json;

// ── scalar formatting ─────────────────────────────────────────────────────────

// Shortest-exact decimal for CSV cells: %.17g always round-trips a double.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return std::string(buffer);
}

// ── plain file helpers ────────────────────────────────────────────────────────

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// FNV-1a 64-bit content hash, used by run manifests.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 0x00000100000001B3ULL;
    }
    return hash;
}

inline std::string format_hash(std::uint64_t hash) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

// ── enum names ────────────────────────────────────────────────────────────────

inline std::string format_oracle_mode(OracleMode mode) {
    switch (mode) {
        case OracleMode::none: return "none";
        case OracleMode::full_inversion: return "full";
        case OracleMode::partial_inversion: return "partial";
    }
    throw std::invalid_argument("unknown oracle mode");
}

inline OracleMode parse_oracle_mode(const std::string& name) {
    if (name == "none") return OracleMode::none;
    if (name == "full") return OracleMode::full_inversion;
    if (name == "partial") return OracleMode::partial_inversion;
    throw std::invalid_argument("unknown oracle mode '" + name +
                                "' (expected none|full|partial)");
}

inline std::string format_stop_rule(StopRule rule) {
    return rule == StopRule::confirmed_peak ? "confirmed_peak" : "full_horizon";
}

inline StopRule parse_stop_rule(const std::string& name) {
    if (name == "confirmed_peak") return StopRule::confirmed_peak;
    if (name == "full_horizon") return StopRule::full_horizon;
    throw std::invalid_argument("unknown stop rule '" + name +
                                "' (expected confirmed_peak|full_horizon)");
}

// ── MarkedSet ─────────────────────────────────────────────────────────────────

inline json marked_set_to_json(const MarkedSet& set) {
    json vertices = json::array();
    for (VertexId v : set.vertices) vertices.push_back(v);
    return json{{"n", set.degree}, {"vertices", vertices}};
}

inline MarkedSet marked_set_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("vertices"))
        throw std::invalid_argument("marked-set JSON needs {\"n\", \"vertices\"}");
    std::vector<VertexId> vertices;
    for (const json& v : j.at("vertices")) vertices.push_back(v.get<VertexId>());
    return make_marked_set(j.at("n").get<int>(), std::move(vertices));
}

// ── WalkResult ────────────────────────────────────────────────────────────────

inline json walk_result_to_json(const WalkResult& result) {
    return json{{"peak_probability", result.peak_probability},
                {"peak_step", result.peak_step},
                {"series", result.probabilities}};
}

inline std::string walk_result_to_csv(const WalkResult& result) {
    std::string csv = "step,probability\n";
    for (std::size_t t = 0; t < result.probabilities.size(); ++t)
        csv += std::to_string(t) + "," + format_double(result.probabilities[t]) + "\n";
    return csv;
}

// ── FitResult ─────────────────────────────────────────────────────────────────

inline json fit_result_to_json(const FitResult& fit) {
    return json{{"model", fit.model == FitModel::sqrt_model ? "sqrt" : "log"},
                {"c1", fit.c1},
                {"c2", fit.c2},
                {"c3", fit.c3},
                {"r_squared", fit.r_squared},
                {"converged", fit.converged},
                {"degenerate", fit.degenerate},
                {"residuals", fit.residuals}};
}

// Plot-ready fit table: observed points beside the fitted curve.
inline std::string fit_points_to_csv(const FitResult& fit,
                                     const std::vector<std::pair<double, double>>& points) {
    std::string csv = "x,t,t_fit\n";
    for (const auto& [x, t] : points) {
        const double predicted = evaluate_fit_model(fit.model, fit.c1, fit.c2, fit.c3, x);
        csv += format_double(x) + "," + format_double(t) + "," +
               format_double(predicted) + "\n";
    }
    return csv;
}

// ── BatchPlan ─────────────────────────────────────────────────────────────────

struct ParsedPlan {
    BatchPlan plan;
    bool has_master_seed = false;  // plan files may leave the seed to the caller
};

inline json batch_plan_to_json(const BatchPlan& plan) {
    json schemes = json::array();
    for (const WeightScheme& s : plan.schemes) schemes.push_back(format_weight_scheme(s));
    double alpha = 2.0;
    for (const WeightScheme& s : plan.schemes)
        if (s.kind == WeightSchemeKind::degree_pow_over_n ||
            s.kind == WeightSchemeKind::degree_pow_over_n_times_k)
            alpha = s.alpha;
    return json{{"n", plan.n},
                {"k_range", plan.k_range},
                {"m_range", plan.m_range},
                {"gamma", plan.gamma},
                {"schemes", schemes},
                {"oracle", format_oracle_mode(plan.oracle)},
                {"s", plan.s},
                {"alpha", alpha},
                {"master_seed", plan.master_seed},
                {"horizon", plan.horizon},
                {"stop", format_stop_rule(plan.stop)}};
}

namespace detail {

// Accepts [1, 2, 3], a single integer, or the string "a..b" (inclusive).
inline std::vector<int> parse_int_range(const json& value, const std::string& key) {
    std::vector<int> out;
    if (value.is_array()) {
        for (const json& v : value) {
            if (!v.is_number_integer())
                throw std::invalid_argument("plan key '" + key + "' must hold integers");
            out.push_back(v.get<int>());
        }
    } else if (value.is_number_integer()) {
        out.push_back(value.get<int>());
    } else if (value.is_string()) {
        const std::string text = value.get<std::string>();
        const std::size_t dots = text.find("..");
        if (dots == std::string::npos)
            throw std::invalid_argument("plan key '" + key + "': range strings look like \"1..30\"");
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (hi < lo)
            throw std::invalid_argument("plan key '" + key + "': empty range " + text);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
        throw std::invalid_argument("plan key '" + key +
                                    "' must be an integer, an array, or \"a..b\"");
    }
    return out;
}

} // namespace detail

inline ParsedPlan batch_plan_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("batch plan must be a JSON object");
    static const std::vector<std::string> known_keys{
        "n", "k_range", "m_range", "gamma", "schemes", "oracle",
        "s", "alpha", "master_seed", "horizon", "stop"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const std::string& k : known_keys) known |= (k == key);
        if (!known) throw std::invalid_argument("unknown plan key '" + key + "'");
    }
    for (const std::string& key : {"n", "k_range", "m_range", "schemes", "oracle"})
        if (!j.contains(key))
            throw std::invalid_argument("plan is missing required key '" + key + "'");

    ParsedPlan parsed;
    BatchPlan& plan = parsed.plan;
    plan.n = j.at("n").get<int>();
    plan.k_range = detail::parse_int_range(j.at("k_range"), "k_range");
    plan.m_range = detail::parse_int_range(j.at("m_range"), "m_range");
    plan.gamma = j.value("gamma", 10);
    const double alpha = j.value("alpha", 2.0);
    for (const json& name : j.at("schemes"))
        plan.schemes.push_back(parse_weight_scheme(name.get<std::string>(), alpha));
    plan.oracle = parse_oracle_mode(j.at("oracle").get<std::string>());
    plan.s = j.value("s", 1);
    plan.horizon = j.value("horizon", 0);
    plan.stop = parse_stop_rule(j.value("stop", std::string("confirmed_peak")));
    if (j.contains("master_seed")) {
        plan.master_seed = j.at("master_seed").get<std::uint64_t>();
        parsed.has_master_seed = true;
    }
    validate_plan(plan);
    return parsed;
}

// ── TOML subset ───────────────────────────────────────────────────────────────
// Flat `key = value` lines with # comments; values are strings, integers,
// floats, booleans, or single-line arrays of those.  This covers every plan
// file shipped with the repository without pulling in a full TOML parser.

namespace detail {

inline std::string trim(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const std::size_t last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

inline json parse_toml_scalar(const std::string& raw, int line_number) {
    const std::string text = trim(raw);
    if (text.empty())
        throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                    ": empty value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                        ": unterminated string");
        return json(text.substr(1, text.size() - 2));
    }
    if (text == "true") return json(true);
    if (text == "false") return json(false);
    try {
        std::size_t used = 0;
        if (text.find_first_of(".eE") == std::string::npos) {
            const long long integer = std::stoll(text, &used);
            if (used == text.size()) return json(integer);
        } else {
            const double real = std::stod(text, &used);
            if (used == text.size()) return json(real);
        }
    } catch (const std::exception&) {
        // fall through to the error below
    }
    throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                ": cannot parse value '" + text + "'");
}

// Strip a trailing # comment, respecting quoted strings.
inline std::string strip_toml_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

} // namespace detail

inline json parse_toml_subset(const std::string& text) {
    json result = json::object();
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        line = detail::trim(detail::strip_toml_comment(line));
        if (line.empty()) continue;
        const std::size_t equals = line.find('=');
        if (equals == std::string::npos)
            throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, equals));
        const std::string value = detail::trim(line.substr(equals + 1));
        if (key.empty())
            throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                        ": empty key");
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']')
                throw std::invalid_argument("TOML line " + std::to_string(line_number) +
                                            ": arrays must close on the same line");
            json array = json::array();
            const std::string body = value.substr(1, value.size() - 2);
            std::string element;
            bool in_string = false;
            for (char c : body) {
                if (c == '"') in_string = !in_string;
                if (c == ',' && !in_string) {
                    array.push_back(detail::parse_toml_scalar(element, line_number));
                    element.clear();
                } else {
                    element += c;
                }
            }
            if (!detail::trim(element).empty())
                array.push_back(detail::parse_toml_scalar(element, line_number));
            result[key] = array;
        } else {
            result[key] = detail::parse_toml_scalar(value, line_number);
        }
    }
    return result;
}

// Load a plan file, dispatching on its extension (.toml or .json).
inline ParsedPlan load_batch_plan(const std::string& path) {
    const std::string text = read_text_file(path);
    const bool is_toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
    try {
        const json j = is_toml ? parse_toml_subset(text) : json::parse(text);
        return batch_plan_from_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument("cannot parse plan file " + path + ": " + e.what());
    }
}

// ── BatchResult artifacts ─────────────────────────────────────────────────────

inline std::string cell_key_string(const CellKey& key) {
    return key.scheme + "/" + std::to_string(key.k) + "/" + std::to_string(key.m);
}

inline std::string marked_vertices_field(const MarkedSet& set) {
    std::string out;
    for (std::size_t i = 0; i < set.vertices.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(set.vertices[i]);
    }
    return out;
}

// Summary JSON: plan echo plus one aggregate record per cell, keyed
// "scheme/k/m".  Sorted keys make the bytes reproducible.
inline json batch_summary_to_json(const BatchResult& result) {
    json cells = json::object();
    for (const auto& [key, stats] : result.cells) {
        json cell{{"mean_peak_probability", stats.mean_peak_probability},
                  {"cv_peak_probability", stats.cv_peak_probability},
                  {"mean_peak_step", stats.mean_peak_step},
                  {"cv_peak_step", stats.cv_peak_step},
                  {"gamma_effective", stats.gamma_effective}};
        if (!stats.error.empty()) cell["error"] = stats.error;
        cells[cell_key_string(key)] = cell;
    }
    return json{{"plan", batch_plan_to_json(result.plan)}, {"cells", cells}};
}

// Long CSV: one row per (scheme, k, m, sample).  Failed cells emit a single
// row with empty numeric fields and the error message.
inline std::string batch_long_csv(const BatchResult& result) {
    std::string csv =
        "scheme,k,m,sample_index,marked_vertices,peak_probability,peak_step,error\n";
    for (const auto& [key, stats] : result.cells) {
        const std::string prefix = key.scheme + "," + std::to_string(key.k) + "," +
                                   std::to_string(key.m) + ",";
        if (!stats.error.empty()) {
            std::string message = stats.error;
            for (char& c : message)
                if (c == ',' || c == '\n' || c == '\r') c = ';';
            csv += prefix + ",,,," + message + "\n";
            continue;
        }
        for (const SampleRecord& sample : stats.samples) {
            csv += prefix + std::to_string(sample.sample_index) + "," +
                   marked_vertices_field(sample.marked) + "," +
                   format_double(sample.peak_probability) + "," +
                   std::to_string(sample.peak_step) + ",\n";
        }
    }
    return csv;
}

// Mean-peak surface for one scheme: rows are k, columns are m.
inline std::string batch_surface_csv(const BatchResult& result, const std::string& scheme) {
    std::vector<int> ks = result.plan.k_range;
    std::vector<int> ms = result.plan.m_range;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

    std::string csv = "k";
    for (int m : ms) csv += ",m" + std::to_string(m);
    csv += "\n";
    for (int k : ks) {
        csv += std::to_string(k);
        for (int m : ms) {
            csv += ",";
            const auto it = result.cells.find(CellKey{scheme, k, m});
            if (it != result.cells.end() && it->second.error.empty())
                csv += format_double(it->second.mean_peak_probability);
        }
        csv += "\n";
    }
    return csv;
}

// ── RunManifest ───────────────────────────────────────────────────────────────

inline std::string utc_timestamp(std::time_t when) {
    std::tm parts{};
    gmtime_r(&when, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return std::string(buffer);
}

// Record of one CLI invocation: what ran, with which resolved inputs, and
// the hash of every file it wrote.
inline json make_manifest(const std::string& command, const json& resolved_config,
                          std::uint64_t master_seed, const std::vector<std::string>& outputs,
                          std::time_t started, std::time_t finished) {
    json files = json::array();
    for (const std::string& path : outputs) {
        const std::string bytes = read_text_file(path);
        files.push_back(json{{"path", path},
                             {"bytes", bytes.size()},
                             {"fnv1a64", format_hash(fnv1a64(bytes))}});
    }
    return json{{"command", command},
                {"config", resolved_config},
                {"master_seed", master_seed},
                {"tool_version", version_string},
                {"started_utc", utc_timestamp(started)},
                {"finished_utc", utc_timestamp(finished)},
                {"outputs", files}};
}

} // namespace mslqw
