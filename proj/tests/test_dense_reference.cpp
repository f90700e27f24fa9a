#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <mslqw/dense_reference.hpp>

using namespace mslqw;
using Catch::Matchers::WithinAbs;

namespace {

StateVector<double> random_state(const WalkConfig& config, std::uint64_t seed) {
    StateVector<double> state;
    state.coin_dim = coin_dimension(config);
    state.num_vertices = vertex_count(config);
    state.amplitudes.resize(static_cast<std::size_t>(state.coin_dim) * state.num_vertices);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm_sq = 0.0;
    for (double& a : state.amplitudes) {
        a = gauss(rng);
        norm_sq += a * a;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& a : state.amplitudes) a /= norm;
    return state;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double trace(const DenseOperator& op) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < op.dim; ++i) sum += op.at(i, i);
    return sum;
}

// A fixed mutually non-adjacent marked set per (degree, k); k = 2 needs
// degree >= 2 to find two vertices at Hamming distance >= 2.
MarkedSet marked_for(int n, int k) {
    switch (k) {
        case 0: return make_marked_set(n, {});
        case 1: return make_marked_set(n, {static_cast<VertexId>(vertex_count(n) - 1)});
        case 2:
            REQUIRE(n >= 2);
            return make_marked_set(n, {0, static_cast<VertexId>(3)});
        default: FAIL("unsupported marked count"); return make_marked_set(n, {});
    }
}

}  // namespace

TEST_CASE("dense dimension is hard-capped", "[dense]") {
    WalkConfig config;
    config.n = 12;
    config.m = 1;
    config.scheme = WeightScheme::degree_over_n();
    CHECK_THROWS_AS(dense_dimension(config), std::invalid_argument);

    config.n = 4;
    config.m = 3;
    CHECK(dense_dimension(config) == 112);
}

TEST_CASE("dense operators are orthogonal with the expected structure", "[dense]") {
    WalkConfig config;
    config.n = 3;
    config.m = 2;
    config.s = 1;
    config.scheme = WeightScheme::explicit_weight(0.45);
    config.oracle = OracleMode::partial_inversion;
    const LoopWeights weights = resolve_loop_weights(config, 2);
    const MarkedSet marked = make_marked_set(3, {1, 6});

    SECTION("shift is a permutation") {
        const DenseOperator shift = build_shift_dense(config);
        CHECK(orthogonality_defect(shift) == 0.0);
        for (std::uint64_t col = 0; col < shift.dim; ++col) {
            double col_sum = 0.0;
            for (std::uint64_t row = 0; row < shift.dim; ++row) {
                CHECK((shift.at(row, col) == 0.0 || shift.at(row, col) == 1.0));
                col_sum += shift.at(row, col);
            }
            CHECK(col_sum == 1.0);
        }
    }
    SECTION("coin is a symmetric reflection") {
        const DenseOperator coin = build_coin_dense(config, weights);
        CHECK(orthogonality_defect(coin) < 1e-13);
        for (std::uint64_t r = 0; r < coin.dim; ++r)
            for (std::uint64_t c = r + 1; c < coin.dim; ++c)
                CHECK(coin.at(r, c) == coin.at(c, r));
    }
    SECTION("oracles are diagonal sign matrices with the counted trace") {
        const DenseOperator full =
            build_oracle_dense(config, marked, OracleMode::full_inversion);
        const DenseOperator partial =
            build_oracle_dense(config, marked, OracleMode::partial_inversion);
        const DenseOperator none = build_oracle_dense(config, marked, OracleMode::none);
        CHECK(orthogonality_defect(full) == 0.0);

        for (std::uint64_t r = 0; r < full.dim; ++r) {
            for (std::uint64_t c = 0; c < full.dim; ++c) {
                if (r == c) continue;
                CHECK(full.at(r, c) == 0.0);
                CHECK(partial.at(r, c) == 0.0);
            }
        }
        // dim = 40, k = 2: full flips all 5 directions, partial flips n + s = 4.
        CHECK(trace(full) == 40.0 - 2.0 * 2 * 5);
        CHECK(trace(partial) == 40.0 - 2.0 * 2 * 4);
        CHECK(trace(none) == 40.0);
    }
}

TEST_CASE("each structured operator matches its dense counterpart", "[dense]") {
    WalkConfig config;
    config.n = 3;
    config.m = 2;
    config.s = 1;
    config.scheme = WeightScheme::explicit_weight(0.45);
    config.oracle = OracleMode::partial_inversion;
    const LoopWeights weights = resolve_loop_weights(config, 1);
    const MarkedSet marked = make_marked_set(3, {5});

    const StateVector<double> start = random_state(config, 314);

    SECTION("coin") {
        StateVector<double> structured = start;
        apply_coin(structured, config, weights);
        const std::vector<double> dense =
            dense_apply(build_coin_dense(config, weights), start.amplitudes);
        CHECK(max_abs_difference(structured.amplitudes, dense) < 1e-13);
    }
    SECTION("shift") {
        StateVector<double> structured = start;
        apply_shift(structured, config);
        const std::vector<double> dense =
            dense_apply(build_shift_dense(config), start.amplitudes);
        CHECK(max_abs_difference(structured.amplitudes, dense) == 0.0);
    }
    SECTION("oracles") {
        StateVector<double> structured = start;
        apply_oracle_partial(structured, marked, config.n, config.s);
        const std::vector<double> dense = dense_apply(
            build_oracle_dense(config, marked, OracleMode::partial_inversion),
            start.amplitudes);
        CHECK(max_abs_difference(structured.amplitudes, dense) == 0.0);

        StateVector<double> full = start;
        apply_oracle_full(full, marked);
        const std::vector<double> dense_full = dense_apply(
            build_oracle_dense(config, marked, OracleMode::full_inversion),
            start.amplitudes);
        CHECK(max_abs_difference(full.amplitudes, dense_full) == 0.0);
    }
}

TEST_CASE("the uniform loopless state is stationary under the dense bare walk", "[dense]") {
    WalkConfig config;
    config.n = 3;
    config.m = 0;
    config.s = 0;
    config.scheme = WeightScheme::explicit_weight(0.0);
    config.oracle = OracleMode::none;
    const LoopWeights weights = resolve_loop_weights(config, 0);
    const MarkedSet nothing = make_marked_set(3, {});

    const StateVector<double> uniform = initial_state<double>(config, 0);
    const std::vector<double> after = dense_step(config, nothing, weights, uniform.amplitudes);
    CHECK(max_abs_difference(after, uniform.amplitudes) < 1e-13);

    StateVector<double> structured = uniform;
    step(structured, nothing, config, weights);
    CHECK(max_abs_difference(structured.amplitudes, after) < 1e-14);
}

TEST_CASE("structured steps match dense steps across the small-instance grid", "[dense]") {
    int comparisons = 0;
    for (int n = 1; n <= 4; ++n) {
        for (int m = 0; m <= 3; ++m) {
            for (int k = 0; k <= 2; ++k) {
                if (k == 2 && n < 2) continue;  // no non-adjacent pair exists
                for (OracleMode mode :
                     {OracleMode::full_inversion, OracleMode::partial_inversion}) {
                    if (mode == OracleMode::partial_inversion && m == 0) continue;
                    WalkConfig config;
                    config.n = n;
                    config.m = m;
                    config.s = m > 0 ? 1 : 0;
                    config.scheme =
                        m > 0 ? WeightScheme::explicit_weight(0.45)
                              : WeightScheme::explicit_weight(0.0);
                    config.oracle = mode;
                    const LoopWeights weights = resolve_loop_weights(config, std::max(k, 1));
                    const MarkedSet marked = marked_for(n, k);

                    double worst = 0.0;
                    for (int trial = 0; trial < 100; ++trial) {
                        const std::uint64_t seed =
                            static_cast<std::uint64_t>(((n * 10 + m) * 10 + k) * 1000 + trial) +
                            (mode == OracleMode::full_inversion ? 0u : 500u);
                        StateVector<double> structured = random_state(config, seed);
                        const std::vector<double> dense =
                            dense_step(config, marked, weights, structured.amplitudes);
                        step(structured, marked, config, weights);
                        worst = std::max(worst,
                                         max_abs_difference(structured.amplitudes, dense));
                    }
                    INFO("n=" << n << " m=" << m << " k=" << k << " mode="
                              << (mode == OracleMode::full_inversion ? "full" : "partial"));
                    CHECK(worst < 1e-12);
                    ++comparisons;
                }
            }
        }
    }
    CHECK(comparisons > 40);
}

TEST_CASE("a full trajectory tracks the dense reference step by step", "[dense]") {
    struct Scenario {
        int n;
        int m;
        std::vector<VertexId> marked;
        OracleMode mode;
    };
    const Scenario scenarios[] = {
        {3, 2, {5}, OracleMode::partial_inversion},
        {4, 3, {0, 3}, OracleMode::full_inversion},
    };
    for (const Scenario& sc : scenarios) {
        WalkConfig config;
        config.n = sc.n;
        config.m = sc.m;
        config.s = 1;
        config.scheme = WeightScheme::explicit_weight(0.3);
        config.oracle = sc.mode;
        const LoopWeights weights =
            resolve_loop_weights(config, static_cast<int>(sc.marked.size()));
        const MarkedSet marked = make_marked_set(sc.n, sc.marked);

        StateVector<double> structured = initial_state<double>(config, 1);
        std::vector<double> dense = structured.amplitudes;
        for (int t = 0; t < 50; ++t) {
            step(structured, marked, config, weights);
            dense = dense_step(config, marked, weights, dense);
            INFO("n=" << sc.n << " step " << t + 1);
            REQUIRE(max_abs_difference(structured.amplitudes, dense) < 1e-12);
        }
    }
}
