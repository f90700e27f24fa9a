/*
 * weights.hpp — self-loop weight schemes for the lackadaisical walk
 *
 * A lackadaisical walk attaches m weighted self-loops to every vertex; the
 * total loop weight l controls how "sticky" the walker is.  Four named
 * schemes compute l from the hypercube degree n, vertex count N and marked
 * count k:
 *
 *     n_over_N               l = n/N
 *     n_over_N_times_k       l = (n/N)·k
 *     n_pow_over_N           l = n^alpha/N        (alpha defaults to 2)
 *     n_pow_over_N_times_k   l = (n^alpha/N)·k
 *
 * plus an explicit scheme carrying a fixed l for regressions and sweeps.
 * The total weight is split evenly over the m loops as l' = l/m.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mslqw {

// ── WeightScheme ──────────────────────────────────────────────────────────────

enum class WeightSchemeKind {
    degree_over_n,              // l = n/N
    degree_over_n_times_k,      // l = (n/N)·k
    degree_pow_over_n,          // l = n^alpha/N
    degree_pow_over_n_times_k,  // l = (n^alpha/N)·k
    explicit_weight,            // l supplied directly
};

struct WeightScheme {
    WeightSchemeKind kind = WeightSchemeKind::degree_over_n;
    double alpha = 1.0;       // degree exponent; meaningful for the pow schemes
    double explicit_l = 0.0;  // used only by explicit_weight

    // Named constructors keep alpha consistent: exactly 1 for the plain
    // schemes, caller-chosen (default 2) for the pow schemes.
    static WeightScheme degree_over_n() {
        return {WeightSchemeKind::degree_over_n, 1.0, 0.0};
    }
    static WeightScheme degree_over_n_times_k() {
        return {WeightSchemeKind::degree_over_n_times_k, 1.0, 0.0};
    }
    static WeightScheme degree_pow_over_n(double alpha = 2.0) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("weight exponent alpha must be positive");
        return {WeightSchemeKind::degree_pow_over_n, alpha, 0.0};
    }
    static WeightScheme degree_pow_over_n_times_k(double alpha = 2.0) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("weight exponent alpha must be positive");
        return {WeightSchemeKind::degree_pow_over_n_times_k, alpha, 0.0};
    }
    static WeightScheme explicit_weight(double l) {
        if (!(l >= 0.0))
            throw std::invalid_argument("explicit self-loop weight must be >= 0");
        return {WeightSchemeKind::explicit_weight, 1.0, l};
    }
};

// ── LoopWeights ───────────────────────────────────────────────────────────────
// Resolved weights for one configuration: the total l and the even per-loop
// split l' = l/m.  per_loop * count recovers total (exactly for m = 1).
//
struct LoopWeights {
    double total = 0.0;     // l
    double per_loop = 0.0;  // l' = l/m (0 when m = 0)
    int count = 0;          // m
};

// ── operations ────────────────────────────────────────────────────────────────

// Total self-loop weight l for a scheme at degree n, vertex count N and
// marked count k.  The ·k schemes require k >= 1.
inline double self_loop_weight(const WeightScheme& scheme, int n, std::uint64_t N, int k) {
    const bool scales_with_k = scheme.kind == WeightSchemeKind::degree_over_n_times_k ||
                               scheme.kind == WeightSchemeKind::degree_pow_over_n_times_k;
    if (scales_with_k && k < 1)
        throw std::invalid_argument("marked count k must be >= 1 for a *_times_k weight scheme");

    const double nd = static_cast<double>(n);
    const double Nd = static_cast<double>(N);
    switch (scheme.kind) {
        case WeightSchemeKind::degree_over_n:
            return nd / Nd;
        case WeightSchemeKind::degree_over_n_times_k:
            return nd / Nd * static_cast<double>(k);
        case WeightSchemeKind::degree_pow_over_n:
            return std::pow(nd, scheme.alpha) / Nd;
        case WeightSchemeKind::degree_pow_over_n_times_k:
            return std::pow(nd, scheme.alpha) / Nd * static_cast<double>(k);
        case WeightSchemeKind::explicit_weight:
            return scheme.explicit_l;
    }
    throw std::invalid_argument("unknown weight scheme kind");
}

// Split a total weight l evenly over m loops.  m = 0 is only meaningful for
// the loopless walk, i.e. requires l = 0.
inline LoopWeights split_per_loop(double l, int m) {
    if (!(l >= 0.0))
        throw std::invalid_argument("self-loop weight must be >= 0");
    if (m < 0)
        throw std::invalid_argument("self-loop count must be >= 0");
    if (m == 0) {
        if (l != 0.0)
            throw std::invalid_argument("m = 0 requires self-loop weight l = 0");
        return LoopWeights{0.0, 0.0, 0};
    }
    return LoopWeights{l, l / static_cast<double>(m), m};
}

// ── CLI / config names ────────────────────────────────────────────────────────
// Canonical scheme spellings: "n_over_N", "n_over_N_times_k", "n_pow_over_N",
// "n_pow_over_N_times_k", "explicit:<float>".

inline std::string format_weight_scheme(const WeightScheme& scheme) {
    switch (scheme.kind) {
        case WeightSchemeKind::degree_over_n:             return "n_over_N";
        case WeightSchemeKind::degree_over_n_times_k:     return "n_over_N_times_k";
        case WeightSchemeKind::degree_pow_over_n:         return "n_pow_over_N";
        case WeightSchemeKind::degree_pow_over_n_times_k: return "n_pow_over_N_times_k";
        case WeightSchemeKind::explicit_weight:
            return "explicit:" + std::to_string(scheme.explicit_l);
    }
    throw std::invalid_argument("unknown weight scheme kind");
}

// Parse a scheme name as spelled above.  alpha applies to the pow schemes.
inline WeightScheme parse_weight_scheme(const std::string& name, double alpha = 2.0) {
    if (name == "n_over_N") return WeightScheme::degree_over_n();
    if (name == "n_over_N_times_k") return WeightScheme::degree_over_n_times_k();
    if (name == "n_pow_over_N") return WeightScheme::degree_pow_over_n(alpha);
    if (name == "n_pow_over_N_times_k") return WeightScheme::degree_pow_over_n_times_k(alpha);
    if (name.rfind("explicit:", 0) == 0) {
        const std::string value = name.substr(9);
        std::size_t used = 0;
        double l = 0.0;
        try {
            l = std::stod(value, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad explicit weight value '" + value + "'");
        }
        if (used != value.size())
            throw std::invalid_argument("bad explicit weight value '" + value + "'");
        return WeightScheme::explicit_weight(l);
    }
    throw std::invalid_argument("unknown weight scheme '" + name + "'");
}

} // namespace mslqw
