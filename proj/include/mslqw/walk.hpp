/*
 * walk.hpp — multi-self-loop lackadaisical quantum walk kernel
 *
 * State space: coin ⊗ vertex, with n + m coin directions per vertex of the
 * n-cube (n edge directions, then m self-loops) and N = 2^n vertices.  One
 * evolution step applies, in order,
 *
 *     oracle  — phase inversion on marked-vertex components (full: all
 *               n + m components; partial: the n edges plus the first s
 *               self-loops; none: identity),
 *     coin    — Grover reflection 2|s><s| − I about the weighted uniform
 *               coin state, blockwise per vertex,
 *     shift   — flip-flop |i, x> → |i, x ⊕ e_i> on edge directions,
 *               identity on self-loops.
 *
 * All three operators are real orthogonal, so amplitudes stay real and the
 * norm is preserved to rounding; the kernel therefore stores plain reals.
 * Each operator is applied in O((n+m)·N) without materializing matrices.
 *
 * run_walk tracks the success probability (total squared amplitude on the
 * marked vertices) per step.  Its default stopping rule ends the run once
 * the series' first local maximum is confirmed: the success probability of
 * a tuned search rises to a peak and then collapses before the next
 * revival, and the revival period is roughly twice the time-to-peak, so a
 * confirmation window of max(10, peak_step) non-improving steps separates
 * the genuine peak from both micro-plateaus and later revivals.  A hard
 * horizon (default ~6·sqrt((n+m)·N) + 100 steps) caps the run either way;
 * full-horizon mode disables early stopping for series-level comparisons.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercube.hpp"
#include "weights.hpp"

namespace mslqw {

// ── configuration ─────────────────────────────────────────────────────────────

enum class OracleMode {
    none,               // no marking; the bare walk
    full_inversion,     // negate every coin component at marked vertices
    partial_inversion,  // negate the n edges and the first s self-loops
};

struct WalkConfig {
    int n = 1;                 // hypercube degree
    int m = 1;                 // self-loops per vertex
    int s = 1;                 // loops inverted by the partial oracle
    WeightScheme scheme;       // self-loop weight rule
    OracleMode oracle = OracleMode::full_inversion;
};

inline std::uint64_t vertex_count(const WalkConfig& config) {
    return vertex_count(config.n);
}

inline int coin_dimension(const WalkConfig& config) {
    return config.n + config.m;
}

inline void validate_config(const WalkConfig& config) {
    vertex_count(config.n);  // degree range check
    if (config.m < 0)
        throw std::invalid_argument("self-loop count m must be >= 0");
    if (config.s < 0 || config.s > config.m)
        throw std::invalid_argument("inverted-loop count s must satisfy 0 <= s <= m");
    if (config.oracle == OracleMode::partial_inversion && (config.m < 1 || config.s < 1))
        throw std::invalid_argument("partial inversion requires m >= 1 and s >= 1");
}

// Resolve the loop weights for a marked count k.  m = 0 demands a zero total
// weight (the loopless walk); any scheme yielding l > 0 is rejected there.
inline LoopWeights resolve_loop_weights(const WalkConfig& config, int k) {
    validate_config(config);
    const double l = self_loop_weight(config.scheme, config.n, vertex_count(config), k);
    return split_per_loop(l, config.m);
}

// ── state vector ──────────────────────────────────────────────────────────────
// Real amplitudes over the (coin, vertex) basis, coin-major: component
// (c, x) lives at amplitudes[c·N + x].  Coin-major layout keeps the shift a
// contiguous in-plane permutation and the coin two linear passes.
//
template <class Real = double>
struct StateVector {
    int coin_dim = 0;
    std::uint64_t num_vertices = 0;
    std::vector<Real> amplitudes;  // size coin_dim * num_vertices

    Real& at(int c, VertexId x) {
        return amplitudes[static_cast<std::size_t>(c) * num_vertices + x];
    }
    Real at(int c, VertexId x) const {
        return amplitudes[static_cast<std::size_t>(c) * num_vertices + x];
    }
};

template <class Real>
inline void check_dimensions(const StateVector<Real>& state, const WalkConfig& config) {
    if (state.coin_dim != coin_dimension(config) ||
        state.num_vertices != vertex_count(config) ||
        state.amplitudes.size() !=
            static_cast<std::size_t>(state.coin_dim) * state.num_vertices)
        throw std::invalid_argument("state dimensions do not match the walk configuration");
}

// Per-direction coin amplitudes of the weighted uniform coin state |s>:
// 1/sqrt(n+l) on each edge direction, sqrt(l')/sqrt(n+l) on each self-loop.
template <class Real = double>
inline std::vector<Real> coin_state_weights(const WalkConfig& config, const LoopWeights& weights) {
    const double denom = std::sqrt(static_cast<double>(config.n) + weights.total);
    const double edge = 1.0 / denom;
    const double loop = std::sqrt(weights.per_loop) / denom;
    std::vector<Real> w(static_cast<std::size_t>(coin_dimension(config)));
    for (int c = 0; c < config.n; ++c) w[static_cast<std::size_t>(c)] = static_cast<Real>(edge);
    for (int c = config.n; c < coin_dimension(config); ++c)
        w[static_cast<std::size_t>(c)] = static_cast<Real>(loop);
    return w;
}

// The equal superposition over the whole graph: coin state |s> at every
// vertex, uniformly.  k_for_weight feeds the ·k weight schemes.
template <class Real = double>
inline StateVector<Real> initial_state(const WalkConfig& config, int k_for_weight) {
    const LoopWeights weights = resolve_loop_weights(config, k_for_weight);
    const std::uint64_t N = vertex_count(config);
    const std::vector<Real> w = coin_state_weights<Real>(config, weights);
    const Real root_n = static_cast<Real>(std::sqrt(static_cast<double>(N)));

    StateVector<Real> state;
    state.coin_dim = coin_dimension(config);
    state.num_vertices = N;
    state.amplitudes.resize(static_cast<std::size_t>(state.coin_dim) * N);
    for (int c = 0; c < state.coin_dim; ++c) {
        const Real a = w[static_cast<std::size_t>(c)] / root_n;
        Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        std::fill(plane, plane + N, a);
    }
    return state;
}

// ── operators ─────────────────────────────────────────────────────────────────

// Negate every coin component of every marked vertex.
template <class Real>
inline void apply_oracle_full(StateVector<Real>& state, const MarkedSet& marked) {
    const std::uint64_t N = state.num_vertices;
    for (int c = 0; c < state.coin_dim; ++c) {
        Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        for (VertexId v : marked.vertices) plane[v] = -plane[v];
    }
}

// Negate the n edge components and the first s self-loop components of every
// marked vertex; the remaining m − s loops and all unmarked vertices are
// untouched.
template <class Real>
inline void apply_oracle_partial(StateVector<Real>& state, const MarkedSet& marked,
                                 int n, int s) {
    const std::uint64_t N = state.num_vertices;
    const int inverted = n + s;
    for (int c = 0; c < inverted; ++c) {
        Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        for (VertexId v : marked.vertices) plane[v] = -plane[v];
    }
}

// Grover reflection about |s> per vertex block: psi_x ← 2<s|psi_x>·s − psi_x.
// Two passes over the state: accumulate the per-vertex overlap, then reflect.
template <class Real>
inline void apply_coin(StateVector<Real>& state, const WalkConfig& config,
                       const LoopWeights& weights) {
    check_dimensions(state, config);
    const std::uint64_t N = state.num_vertices;
    const std::vector<Real> w = coin_state_weights<Real>(config, weights);

    std::vector<Real> overlap(N, Real{0});
    for (int c = 0; c < state.coin_dim; ++c) {
        const Real wc = w[static_cast<std::size_t>(c)];
        const Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        for (std::uint64_t x = 0; x < N; ++x) overlap[x] += wc * plane[x];
    }
    for (int c = 0; c < state.coin_dim; ++c) {
        const Real two_wc = Real{2} * w[static_cast<std::size_t>(c)];
        Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        for (std::uint64_t x = 0; x < N; ++x) plane[x] = two_wc * overlap[x] - plane[x];
    }
}

// Flip-flop shift: swap the amplitudes at (i, x) and (i, x ⊕ e_i) for every
// edge direction i; self-loop planes stay put.  Involution by construction.
template <class Real>
inline void apply_shift(StateVector<Real>& state, const WalkConfig& config) {
    check_dimensions(state, config);
    const std::uint64_t N = state.num_vertices;
    for (int i = 0; i < config.n; ++i) {
        Real* plane = state.amplitudes.data() + static_cast<std::size_t>(i) * N;
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t x = 0; x < N; ++x) {
            const std::uint64_t y = x | bit;   // partner with bit i set
            if (x == y) continue;              // x already has the bit
            std::swap(plane[x], plane[y]);
        }
    }
}

// One evolution step: oracle, then coin, then shift.
template <class Real>
inline void step(StateVector<Real>& state, const MarkedSet& marked,
                 const WalkConfig& config, const LoopWeights& weights) {
    switch (config.oracle) {
        case OracleMode::none:
            break;
        case OracleMode::full_inversion:
            apply_oracle_full(state, marked);
            break;
        case OracleMode::partial_inversion:
            apply_oracle_partial(state, marked, config.n, config.s);
            break;
    }
    apply_coin(state, config, weights);
    apply_shift(state, config);
}

// Total squared amplitude on the marked vertices, over all coin directions.
template <class Real>
inline double success_probability(const StateVector<Real>& state, const MarkedSet& marked) {
    const std::uint64_t N = state.num_vertices;
    double p = 0.0;
    for (int c = 0; c < state.coin_dim; ++c) {
        const Real* plane = state.amplitudes.data() + static_cast<std::size_t>(c) * N;
        for (VertexId v : marked.vertices) {
            const double a = static_cast<double>(plane[v]);
            p += a * a;
        }
    }
    return p;
}

// ── full runs ─────────────────────────────────────────────────────────────────

enum class StopRule {
    confirmed_peak,  // stop once the first peak is confirmed (default)
    full_horizon,    // always run the full horizon
};

struct WalkResult {
    std::vector<double> probabilities;  // success probability per step; [0] is t = 0
    double peak_probability = 0.0;      // max over the recorded series
    int peak_step = 0;                  // first step attaining the max
    int steps_run = 0;                  // probabilities.size() - 1
};

// Hard cap on walk length: a generous multiple of the sqrt((n+m)·N) scale on
// which tuned searches peak.
inline int default_horizon(const WalkConfig& config) {
    const double space = static_cast<double>(coin_dimension(config)) *
                         static_cast<double>(vertex_count(config));
    return static_cast<int>(std::ceil(6.0 * std::sqrt(space))) + 100;
}

// Evolve from the equal superposition, recording the success probability at
// every step.  Under StopRule::confirmed_peak the run ends once
// max(10, peak_step) consecutive steps fail to improve on the best value —
// i.e. the first local maximum has been confirmed — or at the horizon,
// whichever comes first.  Ties keep the earliest step.
template <class Real = double>
inline WalkResult run_walk(const WalkConfig& config, const MarkedSet& marked, int horizon,
                           StopRule stop = StopRule::confirmed_peak) {
    validate_config(config);
    if (horizon < 1)
        throw std::invalid_argument("walk horizon must be >= 1");
    if (marked.degree != config.n && !marked.empty())
        throw std::invalid_argument("marked set degree does not match the walk configuration");

    const int k = static_cast<int>(marked.size());
    const LoopWeights weights = resolve_loop_weights(config, k);
    StateVector<Real> state = initial_state<Real>(config, k);

    WalkResult result;
    result.probabilities.reserve(static_cast<std::size_t>(horizon) + 1);
    result.probabilities.push_back(success_probability(state, marked));
    result.peak_probability = result.probabilities.front();
    result.peak_step = 0;

    int since_improvement = 0;
    for (int t = 1; t <= horizon; ++t) {
        step(state, marked, config, weights);
        const double p = success_probability(state, marked);
        result.probabilities.push_back(p);
        if (p > result.peak_probability) {
            result.peak_probability = p;
            result.peak_step = t;
            since_improvement = 0;
        } else if (stop == StopRule::confirmed_peak) {
            ++since_improvement;
            if (since_improvement >= std::max(10, result.peak_step)) break;
        }
    }
    result.steps_run = static_cast<int>(result.probabilities.size()) - 1;
    return result;
}

// Convenience overload using the default horizon.
template <class Real = double>
inline WalkResult run_walk(const WalkConfig& config, const MarkedSet& marked,
                           StopRule stop = StopRule::confirmed_peak) {
    return run_walk<Real>(config, marked, default_horizon(config), stop);
}

} // namespace mslqw
