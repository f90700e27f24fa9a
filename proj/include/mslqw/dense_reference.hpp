/*
 * dense_reference.hpp — brute-force dense operators for kernel validation
 *
 * Materializes the shift, coin and oracle of the lackadaisical walk as
 * explicit (n+m)·N × (n+m)·N matrices and applies them by dense
 * multiplication.  This is the independent reference the structured kernel
 * in walk.hpp is tested against: same basis layout (coin-major, index
 * c·N + x), same operator order, no shared code paths.
 *
 * Deliberately capped at dimension 4096 — this module exists only to
 * cross-check small instances, never to run experiments.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "walk.hpp"

namespace mslqw {

// ── DenseOperator ─────────────────────────────────────────────────────────────

inline constexpr std::uint64_t dense_dimension_cap = 4096;

struct DenseOperator {
    std::uint64_t dim = 0;
    std::vector<double> entries;  // row-major dim × dim

    double& at(std::uint64_t row, std::uint64_t col) { return entries[row * dim + col]; }
    double at(std::uint64_t row, std::uint64_t col) const { return entries[row * dim + col]; }
};

inline std::uint64_t dense_dimension(const WalkConfig& config) {
    const std::uint64_t dim =
        static_cast<std::uint64_t>(coin_dimension(config)) * vertex_count(config);
    if (dim > dense_dimension_cap)
        throw std::invalid_argument("dense reference capped at dimension " +
                                    std::to_string(dense_dimension_cap) +
                                    "; requested " + std::to_string(dim));
    return dim;
}

inline DenseOperator zero_operator(std::uint64_t dim) {
    DenseOperator op;
    op.dim = dim;
    op.entries.assign(dim * dim, 0.0);
    return op;
}

// Worst orthogonality defect max|MᵀM − I|; 0 for an exactly orthogonal matrix.
inline double orthogonality_defect(const DenseOperator& op) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < op.dim; ++i) {
        for (std::uint64_t j = 0; j < op.dim; ++j) {
            double dot = 0.0;
            for (std::uint64_t r = 0; r < op.dim; ++r) dot += op.at(r, i) * op.at(r, j);
            const double target = (i == j) ? 1.0 : 0.0;
            const double defect = std::abs(dot - target);
            if (defect > worst) worst = defect;
        }
    }
    return worst;
}

// ── operator construction ─────────────────────────────────────────────────────

// Flip-flop shift as a permutation matrix: |i, x> → |i, x ⊕ e_i> on the n
// edge directions, identity on the m self-loop directions.
inline DenseOperator build_shift_dense(const WalkConfig& config) {
    validate_config(config);
    const std::uint64_t N = vertex_count(config);
    const std::uint64_t dim = dense_dimension(config);
    DenseOperator op = zero_operator(dim);
    for (int c = 0; c < coin_dimension(config); ++c) {
        for (std::uint64_t x = 0; x < N; ++x) {
            const std::uint64_t from = static_cast<std::uint64_t>(c) * N + x;
            const std::uint64_t to =
                (c < config.n)
                    ? static_cast<std::uint64_t>(c) * N + neighbor(x, c, config.n)
                    : from;
            op.at(to, from) = 1.0;
        }
    }
    return op;
}

// Grover coin 2|s><s| − I on the coin factor, tensored with the vertex
// identity: entries 2·w_a·w_b − δ_ab within each vertex block.
inline DenseOperator build_coin_dense(const WalkConfig& config, const LoopWeights& weights) {
    validate_config(config);
    const std::uint64_t N = vertex_count(config);
    const std::uint64_t dim = dense_dimension(config);
    const std::vector<double> w = coin_state_weights<double>(config, weights);
    DenseOperator op = zero_operator(dim);
    for (int a = 0; a < coin_dimension(config); ++a) {
        for (int b = 0; b < coin_dimension(config); ++b) {
            const double entry = 2.0 * w[static_cast<std::size_t>(a)] *
                                     w[static_cast<std::size_t>(b)] -
                                 (a == b ? 1.0 : 0.0);
            for (std::uint64_t x = 0; x < N; ++x)
                op.at(static_cast<std::uint64_t>(a) * N + x,
                      static_cast<std::uint64_t>(b) * N + x) = entry;
        }
    }
    return op;
}

// Oracle as a diagonal ±1 matrix: −1 on every inverted component of a marked
// vertex, +1 elsewhere.  Full inversion flips all n + m components; partial
// inversion flips the n edges and the first s self-loops.
inline DenseOperator build_oracle_dense(const WalkConfig& config, const MarkedSet& marked,
                                        OracleMode mode) {
    validate_config(config);
    const std::uint64_t N = vertex_count(config);
    const std::uint64_t dim = dense_dimension(config);
    DenseOperator op = zero_operator(dim);
    for (std::uint64_t i = 0; i < dim; ++i) op.at(i, i) = 1.0;
    if (mode == OracleMode::none) return op;

    const int inverted_dirs =
        mode == OracleMode::full_inversion ? coin_dimension(config) : config.n + config.s;
    for (int c = 0; c < inverted_dirs; ++c)
        for (VertexId v : marked.vertices)
            op.at(static_cast<std::uint64_t>(c) * N + v,
                  static_cast<std::uint64_t>(c) * N + v) = -1.0;
    return op;
}

// ── dense evolution ───────────────────────────────────────────────────────────

inline std::vector<double> dense_apply(const DenseOperator& op, const std::vector<double>& v) {
    if (v.size() != op.dim)
        throw std::invalid_argument("dense operator/state dimension mismatch");
    std::vector<double> out(op.dim, 0.0);
    for (std::uint64_t r = 0; r < op.dim; ++r) {
        double acc = 0.0;
        const double* row = op.entries.data() + r * op.dim;
        for (std::uint64_t c = 0; c < op.dim; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

// One evolution step as the explicit product shift · coin · oracle, applied
// right to left — the reference semantics for walk.hpp's step().
inline std::vector<double> dense_step(const WalkConfig& config, const MarkedSet& marked,
                                      const LoopWeights& weights,
                                      const std::vector<double>& state) {
    const DenseOperator oracle = build_oracle_dense(config, marked, config.oracle);
    const DenseOperator coin = build_coin_dense(config, weights);
    const DenseOperator shift = build_shift_dense(config);
    return dense_apply(shift, dense_apply(coin, dense_apply(oracle, state)));
}

} // namespace mslqw
