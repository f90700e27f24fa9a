/*
 * fitting.hpp — least-squares fits of steps-to-peak against two runtime models
 *
 *     sqrt model:  t = c1 · sqrt(x^c2) + c3          with x = (n+m)·N
 *     log model:   t = c1 · log(x + c2) + c3
 *
 * Both models are linear in (c1, c3) once c2 is fixed, so each objective
 * evaluation solves (c1, c3) in closed form is cheap.  The fit seeds a
 * derivative-free Nelder–Mead simplex from the best point of a coarse c2
 * grid — [0.3, 2.0] for the sqrt exponent, a signed log-spaced sweep of
 * x_min + c2 for the log offset, whose optimum can sit many orders of
 * magnitude below −1 — and polishes all three parameters jointly.  The
 * simplex uses only objective comparisons and relative tolerances, so
 * rescaling every t by a constant rescales c1 and c3 and leaves the fitted
 * exponent untouched.
 *
 * Fits are flagged rather than thrown on trouble: `converged` reports
 * whether the simplex settled within its iteration cap, and `degenerate`
 * marks constant-t inputs, where any c1 = 0 line is an exact fit.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mslqw {

// ── FitResult ─────────────────────────────────────────────────────────────────

enum class FitModel { sqrt_model, log_model };

struct FitResult {
    FitModel model = FitModel::sqrt_model;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;  // t_i − model(x_i), in input order
    bool converged = false;
    bool degenerate = false;        // constant t: parameters underdetermined
};

inline double evaluate_fit_model(FitModel model, double c1, double c2, double c3, double x) {
    switch (model) {
        case FitModel::sqrt_model: return c1 * std::sqrt(std::pow(x, c2)) + c3;
        case FitModel::log_model:  return c1 * std::log(x + c2) + c3;
    }
    throw std::invalid_argument("unknown fit model");
}

// ── Nelder–Mead simplex ───────────────────────────────────────────────────────

namespace detail {

// Standard Nelder–Mead (reflection 1, expansion 2, contraction 0.5, shrink
// 0.5) over a small parameter vector.  Deterministic; relies only on
// objective comparisons, never on absolute objective values.  Returns true
// when the simplex' objective spread fell below the relative tolerance.
inline bool nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                        std::vector<double>& x, const std::vector<double>& initial_step,
                        int max_iterations) {
    const std::size_t dim = x.size();
    std::vector<std::vector<double>> simplex(dim + 1, x);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += initial_step[i];
    std::vector<double> value(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) value[i] = objective(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];

        if (std::abs(value[worst] - value[best]) <=
            1e-14 * (std::abs(value[best]) + std::abs(value[worst])) +
                std::numeric_limits<double>::min()) {
            x = simplex[best];
            return true;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
        }
        for (std::size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(dim);

        auto blend = [&](double coefficient) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + coefficient * (simplex[worst][d] - centroid[d]);
            return p;
        };

        const std::vector<double> reflected = blend(-1.0);
        const double reflected_value = objective(reflected);
        if (reflected_value < value[best]) {
            const std::vector<double> expanded = blend(-2.0);
            const double expanded_value = objective(expanded);
            if (expanded_value < reflected_value) {
                simplex[worst] = expanded;
                value[worst] = expanded_value;
            } else {
                simplex[worst] = reflected;
                value[worst] = reflected_value;
            }
        } else if (reflected_value < value[second]) {
            simplex[worst] = reflected;
            value[worst] = reflected_value;
        } else {
            const std::vector<double> contracted = blend(0.5);
            const double contracted_value = objective(contracted);
            if (contracted_value < value[worst]) {
                simplex[worst] = contracted;
                value[worst] = contracted_value;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d)
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    value[i] = objective(simplex[i]);
                }
            }
        }
    }
    for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    x = simplex[order[0]];
    return false;
}

// Closed-form least squares for (c1, c3) given the basis column b_i:
// minimize Σ (t_i − c1·b_i − c3)².  Returns {c1, c3, SS_res}.
inline std::array<double, 3> linear_solve(const std::vector<double>& basis,
                                          const std::vector<double>& t) {
    const double count = static_cast<double>(t.size());
    double sum_b = 0.0, sum_bb = 0.0, sum_t = 0.0, sum_bt = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sum_b += basis[i];
        sum_bb += basis[i] * basis[i];
        sum_t += t[i];
        sum_bt += basis[i] * t[i];
    }
    const double det = sum_bb * count - sum_b * sum_b;
    double c1 = 0.0, c3 = sum_t / count;
    if (std::abs(det) > 1e-300) {
        c1 = (sum_bt * count - sum_b * sum_t) / det;
        c3 = (sum_t - c1 * sum_b) / count;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = t[i] - c1 * basis[i] - c3;
        ss += r * r;
    }
    return {c1, c3, ss};
}

struct GridSeed {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double ss = std::numeric_limits<double>::infinity();
};

} // namespace detail

// ── model fits ────────────────────────────────────────────────────────────────

namespace detail {

inline FitResult fit_common(FitModel model, const std::vector<double>& x,
                            const std::vector<double>& t,
                            const std::vector<double>& c2_grid,
                            const std::function<bool(double)>& c2_in_domain) {
    if (x.size() < 4)
        throw std::invalid_argument("fitting a 3-parameter model needs at least 4 points");

    double sum_t = 0.0;
    for (double v : t) sum_t += v;
    const double mean_t = sum_t / static_cast<double>(t.size());
    double ss_tot = 0.0;
    for (double v : t) ss_tot += (v - mean_t) * (v - mean_t);

    auto basis_at = [&](double c2) {
        std::vector<double> b(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            b[i] = model == FitModel::sqrt_model ? std::sqrt(std::pow(x[i], c2))
                                                 : std::log(x[i] + c2);
        return b;
    };

    // Coarse c2 sweep with exact (c1, c3) per candidate.
    GridSeed seed;
    for (double c2 : c2_grid) {
        if (!c2_in_domain(c2)) continue;
        const std::array<double, 3> sol = linear_solve(basis_at(c2), t);
        if (sol[2] < seed.ss) seed = GridSeed{sol[0], c2, sol[1], sol[2]};
    }
    if (!std::isfinite(seed.ss))
        throw std::invalid_argument("no feasible c2 seed for the fit");

    FitResult result;
    result.model = model;
    result.degenerate = ss_tot <= 1e-30 * (1.0 + mean_t * mean_t);

    const auto objective = [&](const std::vector<double>& p) {
        if (!c2_in_domain(p[1])) return std::numeric_limits<double>::max();
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = t[i] - evaluate_fit_model(model, p[0], p[1], p[2], x[i]);
            ss += r * r;
        }
        return std::isfinite(ss) ? ss : std::numeric_limits<double>::max();
    };

    std::vector<double> p{seed.c1, seed.c2, seed.c3};
    if (seed.ss == 0.0 || result.degenerate) {
        // Already an exact (or underdetermined) fit; polishing adds nothing.
        result.converged = true;
    } else {
        // Step sizes proportional to problem scale so the descent path is
        // invariant under a uniform rescaling of t (c2's scale is intrinsic).
        const double magnitude = std::abs(seed.c1) + std::abs(seed.c3) + std::abs(mean_t);
        const double c2_step =
            model == FitModel::sqrt_model ? 0.05 : 0.1 * (std::abs(seed.c2) + 1.0);
        std::vector<double> step{
            std::max(0.1 * std::abs(seed.c1), 1e-9 * magnitude), c2_step,
            std::max(0.1 * std::abs(seed.c3), 1e-9 * magnitude)};
        result.converged = nelder_mead(objective, p, step, 4000);
        // Re-solve the linear pair at the polished c2: exact conditional optimum.
        if (c2_in_domain(p[1])) {
            const std::array<double, 3> sol = linear_solve(basis_at(p[1]), t);
            if (sol[2] <= objective(p)) {
                p[0] = sol[0];
                p[2] = sol[1];
            }
        }
    }

    result.c1 = p[0];
    result.c2 = p[1];
    result.c3 = p[2];
    result.residuals.resize(x.size());
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        result.residuals[i] = t[i] - evaluate_fit_model(model, p[0], p[1], p[2], x[i]);
        ss_res += result.residuals[i] * result.residuals[i];
    }
    result.r_squared = result.degenerate ? (ss_res == 0.0 ? 1.0 : 0.0)
                                         : 1.0 - ss_res / ss_tot;
    return result;
}

} // namespace detail

// Fit t = c1·sqrt(x^c2) + c3 to points (x, t) with x = (n+m)·N.
inline FitResult fit_sqrt_model(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> x, t;
    x.reserve(points.size());
    t.reserve(points.size());
    for (const auto& [xi, ti] : points) {
        if (!(xi > 0.0))
            throw std::invalid_argument("sqrt-model points need x > 0");
        x.push_back(xi);
        t.push_back(ti);
    }
    std::vector<double> grid;
    for (double c2 = 0.3; c2 <= 2.0 + 1e-12; c2 += 0.05) grid.push_back(c2);
    return detail::fit_common(FitModel::sqrt_model, x, t, grid,
                              [](double) { return true; });
}

// Fit t = c1·log((n+m)·N + c2) + c3 to points (m, t) at fixed degree n and
// vertex count N.  The c2 search space is signed and spans many decades:
// candidates place x_min + c2 at 10^p for p in [−6, 8], covering offsets
// from −x_min (log blow-up) out to large positive shifts.
inline FitResult fit_log_model(const std::vector<std::pair<double, double>>& m_steps, int n,
                               std::uint64_t N) {
    std::vector<double> x, t;
    x.reserve(m_steps.size());
    t.reserve(m_steps.size());
    for (const auto& [mi, ti] : m_steps) {
        x.push_back((static_cast<double>(n) + mi) * static_cast<double>(N));
        t.push_back(ti);
    }
    const double x_min = x.empty() ? 1.0 : *std::min_element(x.begin(), x.end());
    std::vector<double> grid;
    for (int p = -6; p <= 8; ++p) grid.push_back(-x_min + std::pow(10.0, p));
    grid.push_back(0.0);
    const auto in_domain = [x_min](double c2) { return x_min + c2 > 0.0; };
    return detail::fit_common(FitModel::log_model, x, t, grid, in_domain);
}

} // namespace mslqw
