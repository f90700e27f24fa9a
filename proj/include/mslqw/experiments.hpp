/*
 * experiments.hpp — seeded parameter sweeps over (scheme, k, m) grids
 *
 * A BatchPlan fixes one hypercube degree and sweeps weight schemes, marked
 * counts k and self-loop counts m.  For each k, gamma marked sets are drawn
 * once and reused across every (scheme, m) cell, so cells differ only in
 * the parameter under study, never in the sample.  Per-sample seeds are
 * derived from the master seed by splitmix64 chaining on (k, sample index),
 * making every walk reproducible in isolation.
 *
 * Cells are independent jobs; run_batch may execute them on any number of
 * worker threads.  Results are written into preallocated slots and
 * aggregated by sorted key, so the outcome is byte-for-byte identical
 * regardless of worker count or completion order.
 */

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hypercube.hpp"
#include "walk.hpp"
#include "weights.hpp"

namespace mslqw {

// ── plan ──────────────────────────────────────────────────────────────────────

struct BatchPlan {
    int n = 12;
    std::vector<int> k_range;           // marked counts to sweep
    std::vector<int> m_range;           // self-loop counts to sweep
    int gamma = 10;                     // marked-set samples per k
    std::vector<WeightScheme> schemes;  // weight schemes to sweep
    OracleMode oracle = OracleMode::partial_inversion;
    int s = 1;                          // loops inverted by the partial oracle
    std::uint64_t master_seed = 0;
    int horizon = 0;                    // 0 → default_horizon per config
    StopRule stop = StopRule::confirmed_peak;
};

inline void validate_plan(const BatchPlan& plan) {
    vertex_count(plan.n);
    if (plan.k_range.empty()) throw std::invalid_argument("plan k_range must be non-empty");
    if (plan.m_range.empty()) throw std::invalid_argument("plan m_range must be non-empty");
    if (plan.schemes.empty()) throw std::invalid_argument("plan schemes must be non-empty");
    if (plan.gamma < 1) throw std::invalid_argument("plan gamma must be >= 1");
    if (plan.horizon < 0) throw std::invalid_argument("plan horizon must be >= 0");
    for (int k : plan.k_range)
        if (k < 1) throw std::invalid_argument("plan k values must be >= 1");
    for (int m : plan.m_range) {
        WalkConfig config{plan.n, m, plan.s, WeightScheme::explicit_weight(0.0), plan.oracle};
        validate_config(config);
    }
}

// Seed for sample `index` of marked-count group `k`: a splitmix64 chain over
// the master seed, stable across platforms and worker counts.
inline std::uint64_t derive_sample_seed(std::uint64_t master_seed, int k, int index) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(k));
    h = splitmix64(h ^ static_cast<std::uint64_t>(index));
    return h;
}

// ── results ───────────────────────────────────────────────────────────────────

struct CellKey {
    std::string scheme;  // canonical scheme name
    int k = 0;
    int m = 0;

    friend bool operator<(const CellKey& a, const CellKey& b) {
        return std::tie(a.scheme, a.k, a.m) < std::tie(b.scheme, b.k, b.m);
    }
    friend bool operator==(const CellKey& a, const CellKey& b) {
        return std::tie(a.scheme, a.k, a.m) == std::tie(b.scheme, b.k, b.m);
    }
};

struct SampleRecord {
    int sample_index = 0;
    MarkedSet marked;
    double peak_probability = 0.0;
    int peak_step = 0;
};

struct CellStats {
    double mean_peak_probability = 0.0;
    double cv_peak_probability = 0.0;
    double mean_peak_step = 0.0;
    double cv_peak_step = 0.0;
    int gamma_effective = 0;           // samples that completed
    std::vector<SampleRecord> samples;
    std::string error;                 // non-empty if the cell failed
};

struct BatchResult {
    BatchPlan plan;
    std::map<CellKey, CellStats> cells;  // sorted keys → deterministic output
};

// ── statistics ────────────────────────────────────────────────────────────────

// Population standard deviation divided by the mean.  A zero mean leaves the
// ratio undefined; it is reported as 0 and flagged through `defined`.
inline double coefficient_of_variation(const std::vector<double>& values,
                                       bool* defined = nullptr) {
    if (values.empty())
        throw std::invalid_argument("coefficient of variation needs at least one value");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) {
        if (defined) *defined = false;
        return 0.0;
    }
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    if (defined) *defined = true;
    return std::sqrt(var) / mean;
}

// ── batch runner ──────────────────────────────────────────────────────────────

namespace detail {

struct CellJob {
    CellKey key;
    WalkConfig config;
    int k = 0;
};

inline CellStats run_cell(const CellJob& job, const std::vector<MarkedSet>& samples,
                          const BatchPlan& plan) {
    CellStats stats;
    try {
        std::vector<double> peaks, steps;
        peaks.reserve(samples.size());
        steps.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const int horizon =
                plan.horizon > 0 ? plan.horizon : default_horizon(job.config);
            const WalkResult result =
                run_walk(job.config, samples[i], horizon, plan.stop);
            stats.samples.push_back(SampleRecord{static_cast<int>(i), samples[i],
                                                 result.peak_probability,
                                                 result.peak_step});
            peaks.push_back(result.peak_probability);
            steps.push_back(static_cast<double>(result.peak_step));
        }
        stats.gamma_effective = static_cast<int>(samples.size());
        double mean_p = 0.0, mean_t = 0.0;
        for (double p : peaks) mean_p += p;
        for (double t : steps) mean_t += t;
        stats.mean_peak_probability = mean_p / static_cast<double>(peaks.size());
        stats.mean_peak_step = mean_t / static_cast<double>(steps.size());
        stats.cv_peak_probability = coefficient_of_variation(peaks);
        stats.cv_peak_step = coefficient_of_variation(steps);
    } catch (const std::exception& e) {
        stats = CellStats{};
        stats.error = e.what();
    }
    return stats;
}

} // namespace detail

// Execute the full (scheme × k × m) grid of a plan on `jobs` worker threads
// (jobs < 1 → hardware concurrency).  Marked sets are drawn once per k;
// a failed cell records its error instead of aborting the batch.
inline BatchResult run_batch(const BatchPlan& plan, int jobs = 1) {
    validate_plan(plan);

    // Draw the per-k samples up front, shared across schemes and m.
    std::map<int, std::vector<MarkedSet>> samples_by_k;
    for (int k : plan.k_range) {
        if (samples_by_k.count(k)) continue;  // duplicate k entries share samples
        std::vector<MarkedSet> samples;
        samples.reserve(static_cast<std::size_t>(plan.gamma));
        for (int g = 0; g < plan.gamma; ++g)
            samples.push_back(sample_non_adjacent_set(
                plan.n, k, derive_sample_seed(plan.master_seed, k, g)));
        samples_by_k.emplace(k, std::move(samples));
    }

    // One job per grid cell, in deterministic order.
    std::vector<detail::CellJob> job_list;
    for (const WeightScheme& scheme : plan.schemes) {
        const std::string name = format_weight_scheme(scheme);
        for (int k : plan.k_range)
            for (int m : plan.m_range)
                job_list.push_back(detail::CellJob{
                    CellKey{name, k, m},
                    WalkConfig{plan.n, m, plan.s, scheme, plan.oracle}, k});
    }

    std::vector<CellStats> slots(job_list.size());
    int workers = jobs >= 1 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(job_list.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= job_list.size()) return;
            slots[i] = detail::run_cell(job_list[i], samples_by_k.at(job_list[i].k), plan);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    BatchResult result;
    result.plan = plan;
    for (std::size_t i = 0; i < job_list.size(); ++i)
        result.cells.emplace(job_list[i].key, std::move(slots[i]));
    return result;
}

// ── best-m summary ────────────────────────────────────────────────────────────

struct BestMRow {
    std::string scheme;
    int k = 0;
    int best_m = 0;
    double mean_peak_probability = 0.0;
    double cv_peak_probability = 0.0;
    double mean_peak_step = 0.0;
};

// For each (scheme, k): the m maximizing the mean peak probability, ties
// broken toward the smaller m.  Failed cells are skipped.
inline std::vector<BestMRow> best_m_table(const BatchResult& result) {
    if (result.cells.empty())
        throw std::invalid_argument("best_m_table needs a non-empty batch result");
    std::map<std::pair<std::string, int>, BestMRow> rows;
    for (const auto& [key, stats] : result.cells) {
        if (!stats.error.empty()) continue;
        const std::pair<std::string, int> group{key.scheme, key.k};
        auto it = rows.find(group);
        // Map iteration is ascending in m, so strict > keeps the smallest m on ties.
        if (it == rows.end() || stats.mean_peak_probability > it->second.mean_peak_probability) {
            rows[group] = BestMRow{key.scheme, key.k, key.m, stats.mean_peak_probability,
                                   stats.cv_peak_probability, stats.mean_peak_step};
        }
    }
    std::vector<BestMRow> out;
    out.reserve(rows.size());
    for (auto& [group, row] : rows) out.push_back(row);
    return out;
}

} // namespace mslqw
