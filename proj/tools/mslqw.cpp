/*
 * mslqw — command-line front end for the lackadaisical-walk library
 *
 * Subcommands:
 *
 *   walk    run one walk (sampled or explicit marked set), write the
 *           result series as JSON + CSV, print the peak to stdout
 *   batch   execute a sweep plan (TOML or JSON) over (scheme, k, m),
 *           writing long CSV, summary JSON, per-scheme surface CSVs
 *   fit     fit the sqrt or log runtime model to batch summaries,
 *           writing the fit JSON and a plot-ready points CSV
 *   sample  draw mutually non-adjacent marked sets for inspection
 *
 * Every file-writing command also writes a manifest recording the resolved
 * configuration, the master seed, and an FNV-1a hash of each output, so any
 * artifact can be traced back to an exact invocation.
 *
 * Exit codes: 0 success, 2 usage/validation error, 3 runtime failure
 * (sampling that cannot satisfy the non-adjacency constraint, unreadable
 * files, ...).  The master seed resolves flag > plan file > MSLQW_SEED > 0.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <mslqw/io.hpp>

namespace fs = std::filesystem;
using mslqw::json;

namespace {

// ── shared helpers ────────────────────────────────────────────────────────────

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
    try {
        std::size_t used = 0;
        const std::uint64_t value = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(source + " must be an unsigned integer, got '" +
                                    text + "'");
    }
}

// flag > plan file > MSLQW_SEED environment variable > 0.
std::uint64_t resolve_master_seed(bool flag_given, std::uint64_t flag_value,
                                  bool plan_given, std::uint64_t plan_value) {
    if (flag_given) return flag_value;
    if (plan_given) return plan_value;
    if (const char* env = std::getenv("MSLQW_SEED"))
        return parse_seed_text(env, "MSLQW_SEED");
    return 0;
}

std::vector<mslqw::VertexId> parse_vertex_list(const std::string& text) {
    std::vector<mslqw::VertexId> vertices;
    std::string element;
    std::istringstream stream(text);
    while (std::getline(stream, element, ',')) {
        if (element.empty()) continue;
        try {
            std::size_t used = 0;
            vertices.push_back(std::stoull(element, &used));
            if (used != element.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("--marked expects comma-separated vertex ids, got '" +
                                        element + "'");
        }
    }
    return vertices;
}

std::string sanitize_file_component(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return out;
}

void require_readable(const std::string& path, const std::string& what) {
    if (!fs::exists(path))
        throw std::invalid_argument(what + " not found: " + path);
}

void write_file_reporting(const std::string& path, const std::string& content,
                          std::vector<std::string>& outputs) {
    mslqw::write_text_file(path, content);
    outputs.push_back(path);
    std::cout << "wrote " << path << "\n";
}

void write_manifest(const std::string& command, const json& config,
                    std::uint64_t master_seed, const std::vector<std::string>& outputs,
                    std::time_t started, const std::string& path) {
    const json manifest = mslqw::make_manifest(command, config, master_seed, outputs,
                                               started, std::time(nullptr));
    mslqw::write_text_file(path, manifest.dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
}

// ── walk ──────────────────────────────────────────────────────────────────────

struct WalkArgs {
    int n = 0;
    int m = 1;
    int s = -1;  // -1 → 1 when loops exist, else 0
    std::string scheme;
    double alpha = 2.0;
    std::string oracle;
    std::string marked_text;
    bool marked_given = false;
    int k = -1;
    bool k_given = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int horizon = 0;
    std::string stop = "confirmed_peak";
    std::string out_dir = ".";
};

int run_walk_command(const WalkArgs& args) {
    if (args.marked_given == args.k_given)
        throw std::invalid_argument("provide exactly one of --marked or --k");

    mslqw::WalkConfig config;
    config.n = args.n;
    config.m = args.m;
    config.s = args.s >= 0 ? args.s : (args.m > 0 ? 1 : 0);
    config.scheme = mslqw::parse_weight_scheme(args.scheme, args.alpha);
    config.oracle = mslqw::parse_oracle_mode(args.oracle);
    mslqw::validate_config(config);

    const std::uint64_t master_seed =
        resolve_master_seed(args.seed_given, args.seed, false, 0);

    mslqw::MarkedSet marked;
    if (args.marked_given) {
        marked = mslqw::make_marked_set(config.n, parse_vertex_list(args.marked_text));
    } else if (args.k == 0) {
        marked = mslqw::make_marked_set(config.n, {});
    } else {
        if (args.k < 0) throw std::invalid_argument("--k must be >= 0");
        marked = mslqw::sample_non_adjacent_set(
            config.n, args.k, mslqw::derive_sample_seed(master_seed, args.k, 0));
    }

    const int horizon =
        args.horizon > 0 ? args.horizon : mslqw::default_horizon(config);
    const mslqw::StopRule stop = mslqw::parse_stop_rule(args.stop);

    const std::time_t started = std::time(nullptr);
    const mslqw::WalkResult result = mslqw::run_walk(config, marked, horizon, stop);

    std::cout << "peak_probability " << mslqw::format_double(result.peak_probability)
              << "\n"
              << "peak_step " << result.peak_step << "\n"
              << "steps_run " << result.steps_run << "\n"
              << "marked " << mslqw::marked_vertices_field(marked) << "\n";

    fs::create_directories(args.out_dir);
    const json resolved{{"n", config.n},
                        {"m", config.m},
                        {"s", config.s},
                        {"scheme", mslqw::format_weight_scheme(config.scheme)},
                        {"oracle", mslqw::format_oracle_mode(config.oracle)},
                        {"marked", mslqw::marked_set_to_json(marked)},
                        {"horizon", horizon},
                        {"stop", mslqw::format_stop_rule(stop)}};

    std::vector<std::string> outputs;
    write_file_reporting((fs::path(args.out_dir) / "walk_result.json").string(),
                         mslqw::walk_result_to_json(result).dump(2) + "\n", outputs);
    write_file_reporting((fs::path(args.out_dir) / "walk_result.csv").string(),
                         mslqw::walk_result_to_csv(result), outputs);
    write_manifest("walk", resolved, master_seed, outputs, started,
                   (fs::path(args.out_dir) / "manifest.json").string());
    return 0;
}

// ── batch ─────────────────────────────────────────────────────────────────────

struct BatchArgs {
    std::string plan_path;
    std::string out_dir;
    int jobs = 0;  // <1 → available parallelism
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int run_batch_command(const BatchArgs& args) {
    require_readable(args.plan_path, "plan file");
    mslqw::ParsedPlan parsed = mslqw::load_batch_plan(args.plan_path);
    parsed.plan.master_seed =
        resolve_master_seed(args.seed_given, args.seed, parsed.has_master_seed,
                            parsed.plan.master_seed);

    const std::time_t started = std::time(nullptr);
    const mslqw::BatchResult result = mslqw::run_batch(parsed.plan, args.jobs);

    int failed = 0;
    for (const auto& [key, stats] : result.cells)
        if (!stats.error.empty()) ++failed;
    std::cout << "cells " << result.cells.size() << " (" << failed << " failed)\n";
    for (const mslqw::BestMRow& row : mslqw::best_m_table(result)) {
        std::cout << "best " << row.scheme << " k=" << row.k << " m=" << row.best_m
                  << " mean_peak=" << mslqw::format_double(row.mean_peak_probability)
                  << " mean_step=" << mslqw::format_double(row.mean_peak_step) << "\n";
    }

    fs::create_directories(args.out_dir);
    std::vector<std::string> outputs;
    write_file_reporting((fs::path(args.out_dir) / "results_long.csv").string(),
                         mslqw::batch_long_csv(result), outputs);
    write_file_reporting((fs::path(args.out_dir) / "summary.json").string(),
                         mslqw::batch_summary_to_json(result).dump(2) + "\n", outputs);

    std::set<std::string> scheme_names;
    for (const mslqw::WeightScheme& scheme : parsed.plan.schemes)
        scheme_names.insert(mslqw::format_weight_scheme(scheme));
    for (const std::string& name : scheme_names) {
        const std::string file = "surface_" + sanitize_file_component(name) + ".csv";
        write_file_reporting((fs::path(args.out_dir) / file).string(),
                             mslqw::batch_surface_csv(result, name), outputs);
    }

    write_manifest("batch", mslqw::batch_plan_to_json(parsed.plan),
                   parsed.plan.master_seed, outputs, started,
                   (fs::path(args.out_dir) / "manifest.json").string());
    return 0;
}

// ── fit ───────────────────────────────────────────────────────────────────────

struct FitArgs {
    std::string model;
    std::vector<std::string> inputs;
    std::string out_path;
    std::string series = "best_m";
    std::string scheme;  // optional selector
    int k = 0;
    bool k_given = false;
};

struct SummaryCell {
    double mean_peak_probability = 0.0;
    double mean_peak_step = 0.0;
};

struct LoadedSummary {
    int n = 0;
    std::uint64_t N = 0;
    // scheme → k → m → aggregates (failed cells are dropped on load)
    std::map<std::string, std::map<int, std::map<int, SummaryCell>>> cells;
};

LoadedSummary load_summary(const std::string& path) {
    require_readable(path, "summary file");
    LoadedSummary summary;
    json j;
    try {
        j = json::parse(mslqw::read_text_file(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument("cannot parse summary " + path + ": " + e.what());
    }
    try {
        summary.n = j.at("plan").at("n").get<int>();
        summary.N = mslqw::vertex_count(summary.n);
        for (const auto& [key, cell] : j.at("cells").items()) {
            if (cell.contains("error")) continue;
            const std::size_t last = key.rfind('/');
            const std::size_t second =
                last == std::string::npos ? std::string::npos : key.rfind('/', last - 1);
            if (second == std::string::npos)
                throw std::invalid_argument("malformed cell key '" + key + "'");
            const std::string scheme = key.substr(0, second);
            const int k = std::stoi(key.substr(second + 1, last - second - 1));
            const int m = std::stoi(key.substr(last + 1));
            summary.cells[scheme][k][m] =
                SummaryCell{cell.at("mean_peak_probability").get<double>(),
                            cell.at("mean_peak_step").get<double>()};
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("summary " + path + " is missing fields: " + e.what());
    }
    if (summary.cells.empty())
        throw std::invalid_argument("summary " + path + " holds no usable cells");
    return summary;
}

// Pick the single scheme/k the fit applies to, or demand an explicit choice.
const std::map<int, SummaryCell>& select_series(const LoadedSummary& summary,
                                                const FitArgs& args,
                                                const std::string& path) {
    const auto scheme_it = args.scheme.empty()
                               ? (summary.cells.size() == 1
                                      ? summary.cells.begin()
                                      : throw std::invalid_argument(
                                            path + " holds several schemes; pass --scheme"))
                               : summary.cells.find(args.scheme);
    if (scheme_it == summary.cells.end())
        throw std::invalid_argument(path + " has no cells for scheme '" + args.scheme + "'");

    const auto& by_k = scheme_it->second;
    const auto k_it =
        !args.k_given ? (by_k.size() == 1
                             ? by_k.begin()
                             : throw std::invalid_argument(
                                   path + " holds several marked counts; pass --k"))
                      : by_k.find(args.k);
    if (k_it == by_k.end())
        throw std::invalid_argument(path + " has no cells for k=" +
                                    std::to_string(args.k));
    return k_it->second;
}

// The best-m cell of a series: highest mean peak, ties to the smaller m.
std::pair<int, SummaryCell> best_m_cell(const std::map<int, SummaryCell>& by_m) {
    std::pair<int, SummaryCell> best{0, {}};
    bool have = false;
    for (const auto& [m, cell] : by_m) {
        if (!have || cell.mean_peak_probability > best.second.mean_peak_probability) {
            best = {m, cell};
            have = true;
        }
    }
    return best;
}

int run_fit_command(const FitArgs& args) {
    std::vector<std::pair<double, double>> points;  // (x, t) for the CSV
    mslqw::FitResult fit;

    if (args.model == "sqrt") {
        for (const std::string& path : args.inputs) {
            const LoadedSummary summary = load_summary(path);
            const std::map<int, SummaryCell>& by_m = select_series(summary, args, path);
            int m = 1;
            SummaryCell cell;
            if (args.series == "m1") {
                const auto it = by_m.find(1);
                if (it == by_m.end())
                    throw std::invalid_argument(path + " has no m=1 cell for the fit");
                cell = it->second;
            } else {
                const std::pair<int, SummaryCell> best = best_m_cell(by_m);
                m = best.first;
                cell = best.second;
            }
            const double x = (static_cast<double>(summary.n) + m) *
                             static_cast<double>(summary.N);
            points.emplace_back(x, cell.mean_peak_step);
        }
        std::sort(points.begin(), points.end());
        fit = mslqw::fit_sqrt_model(points);
    } else {
        if (args.inputs.size() != 1)
            throw std::invalid_argument(
                "the log model fits one summary swept over m; pass exactly one --in");
        const LoadedSummary summary = load_summary(args.inputs.front());
        const std::map<int, SummaryCell>& by_m =
            select_series(summary, args, args.inputs.front());
        std::vector<std::pair<double, double>> m_steps;
        for (const auto& [m, cell] : by_m) {
            m_steps.emplace_back(static_cast<double>(m), cell.mean_peak_step);
            points.emplace_back((static_cast<double>(summary.n) + m) *
                                    static_cast<double>(summary.N),
                                cell.mean_peak_step);
        }
        fit = mslqw::fit_log_model(m_steps, summary.n, summary.N);
    }

    std::cout << "model " << args.model << "\n"
              << "c1 " << mslqw::format_double(fit.c1) << "\n"
              << "c2 " << mslqw::format_double(fit.c2) << "\n"
              << "c3 " << mslqw::format_double(fit.c3) << "\n"
              << "r_squared " << mslqw::format_double(fit.r_squared) << "\n"
              << "converged " << (fit.converged ? "true" : "false") << "\n"
              << "degenerate " << (fit.degenerate ? "true" : "false") << "\n"
              << "points " << points.size() << "\n";

    const fs::path out(args.out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    const fs::path stem = out.parent_path() / out.stem();
    const std::time_t started = std::time(nullptr);

    std::vector<std::string> outputs;
    write_file_reporting(args.out_path, mslqw::fit_result_to_json(fit).dump(2) + "\n",
                         outputs);
    write_file_reporting(stem.string() + "_points.csv",
                         mslqw::fit_points_to_csv(fit, points), outputs);

    json inputs = json::array();
    for (const std::string& path : args.inputs) inputs.push_back(path);
    json config{{"model", args.model}, {"series", args.series}, {"inputs", inputs}};
    if (!args.scheme.empty()) config["scheme"] = args.scheme;
    if (args.k_given) config["k"] = args.k;
    write_manifest("fit", config, 0, outputs, started,
                   stem.string() + "_manifest.json");
    return 0;
}

// ── sample ────────────────────────────────────────────────────────────────────

struct SampleArgs {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int count = 1;
};

int run_sample_command(const SampleArgs& args) {
    if (args.count < 1) throw std::invalid_argument("--count must be >= 1");
    const std::uint64_t master_seed =
        resolve_master_seed(args.seed_given, args.seed, false, 0);
    for (int index = 0; index < args.count; ++index) {
        const mslqw::MarkedSet set = mslqw::sample_non_adjacent_set(
            args.n, args.k, mslqw::derive_sample_seed(master_seed, args.k, index));
        std::cout << mslqw::marked_set_to_json(set).dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lackadaisical quantum-walk search: walks, sweeps, and runtime fits"};
    app.require_subcommand(1);

    WalkArgs walk_args;
    CLI::App* walk = app.add_subcommand("walk", "Run one walk and report its peak");
    walk->add_option("--n", walk_args.n, "hypercube degree")->required();
    walk->add_option("--m", walk_args.m, "self-loops per vertex (default 1)");
    walk->add_option("--s", walk_args.s, "inverted self-loops (default 1, 0 when m=0)");
    walk->add_option("--scheme", walk_args.scheme,
                     "weight scheme: n_over_N, n_over_N_times_k, n_pow_over_N, "
                     "n_pow_over_N_times_k, explicit:<l>")
        ->required();
    walk->add_option("--alpha", walk_args.alpha, "degree exponent for pow schemes");
    walk->add_option("--oracle", walk_args.oracle, "oracle mode: none, full, partial")
        ->required();
    CLI::Option* marked_opt =
        walk->add_option("--marked", walk_args.marked_text, "explicit vertices v1,v2,...");
    CLI::Option* walk_k = walk->add_option("--k", walk_args.k,
                                           "sample this many non-adjacent vertices");
    CLI::Option* walk_seed = walk->add_option("--seed", walk_args.seed, "master seed");
    walk->add_option("--horizon", walk_args.horizon, "step cap (default: auto)");
    walk->add_option("--stop", walk_args.stop, "confirmed_peak or full_horizon")
        ->check(CLI::IsMember({"confirmed_peak", "full_horizon"}));
    walk->add_option("--out", walk_args.out_dir, "output directory (default .)");

    BatchArgs batch_args;
    CLI::App* batch = app.add_subcommand("batch", "Run a sweep plan over (scheme, k, m)");
    batch->add_option("--plan", batch_args.plan_path, "plan file (.toml or .json)")
        ->required();
    batch->add_option("--out", batch_args.out_dir, "output directory")->required();
    batch->add_option("--jobs", batch_args.jobs,
                      "worker threads (default: available parallelism)");
    CLI::Option* batch_seed =
        batch->add_option("--seed", batch_args.seed, "master seed override");

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Fit a runtime model to batch summaries");
    fit->add_option("--model", fit_args.model, "sqrt or log")
        ->required()
        ->check(CLI::IsMember({"sqrt", "log"}));
    fit->add_option("--in", fit_args.inputs, "summary.json inputs")->required();
    fit->add_option("--out", fit_args.out_path, "fit JSON output path")->required();
    fit->add_option("--series", fit_args.series,
                    "step-count series: m1 or best_m (sqrt model)")
        ->check(CLI::IsMember({"m1", "best_m"}));
    fit->add_option("--scheme", fit_args.scheme, "scheme selector for mixed summaries");
    CLI::Option* fit_k = fit->add_option("--k", fit_args.k, "marked-count selector");

    SampleArgs sample_args;
    CLI::App* sample =
        app.add_subcommand("sample", "Draw mutually non-adjacent marked sets");
    sample->add_option("--n", sample_args.n, "hypercube degree")->required();
    sample->add_option("--k", sample_args.k, "vertices per set")->required();
    CLI::Option* sample_seed = sample->add_option("--seed", sample_args.seed, "master seed");
    sample->add_option("--count", sample_args.count, "number of sets (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    walk_args.marked_given = marked_opt->count() > 0;
    walk_args.k_given = walk_k->count() > 0;
    walk_args.seed_given = walk_seed->count() > 0;
    batch_args.seed_given = batch_seed->count() > 0;
    fit_args.k_given = fit_k->count() > 0;
    sample_args.seed_given = sample_seed->count() > 0;

    try {
        if (walk->parsed()) return run_walk_command(walk_args);
        if (batch->parsed()) return run_batch_command(batch_args);
        if (fit->parsed()) return run_fit_command(fit_args);
        if (sample->parsed()) return run_sample_command(sample_args);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const mslqw::sampling_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
