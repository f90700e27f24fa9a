#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <mslqw/experiments.hpp>

using namespace mslqw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BatchPlan tiny_plan() {
    BatchPlan plan;
    plan.n = 5;
    plan.k_range = {1, 2};
    plan.m_range = {1, 2};
    plan.gamma = 3;
    plan.schemes = {WeightScheme::degree_over_n_times_k(),
                    WeightScheme::explicit_weight(0.3)};
    plan.oracle = OracleMode::partial_inversion;
    plan.s = 1;
    plan.master_seed = 7;
    return plan;
}

bool same_samples(const CellStats& a, const CellStats& b) {
    if (a.samples.size() != b.samples.size()) return false;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i].marked.vertices != b.samples[i].marked.vertices) return false;
    return true;
}

}  // namespace

TEST_CASE("coefficient of variation uses the population spread", "[experiments]") {
    CHECK_THAT(coefficient_of_variation({1.0, 3.0}), WithinRel(0.5, 1e-15));
    CHECK(coefficient_of_variation({4.0, 4.0, 4.0}) == 0.0);
    CHECK_THROWS_AS(coefficient_of_variation({}), std::invalid_argument);

    SECTION("a zero mean is reported as undefined, not an exception") {
        bool defined = true;
        CHECK(coefficient_of_variation({-1.0, 1.0}, &defined) == 0.0);
        CHECK_FALSE(defined);
        coefficient_of_variation({1.0, 2.0}, &defined);
        CHECK(defined);
    }
}

TEST_CASE("sample seeds derive deterministically and spread across groups", "[experiments]") {
    CHECK(derive_sample_seed(2024, 3, 5) == derive_sample_seed(2024, 3, 5));

    std::set<std::uint64_t> seen;
    for (int k = 1; k <= 8; ++k)
        for (int g = 0; g < 16; ++g) seen.insert(derive_sample_seed(2024, k, g));
    CHECK(seen.size() == 8 * 16);

    CHECK(derive_sample_seed(1, 2, 3) != derive_sample_seed(2, 2, 3));
}

TEST_CASE("plan validation rejects malformed sweeps", "[experiments]") {
    BatchPlan plan = tiny_plan();
    CHECK_NOTHROW(validate_plan(plan));

    SECTION("empty ranges") {
        plan.k_range.clear();
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
    SECTION("empty schemes") {
        plan.schemes.clear();
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
    SECTION("non-positive gamma") {
        plan.gamma = 0;
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
    SECTION("marked counts below one") {
        plan.k_range = {0};
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
    SECTION("loop counts incompatible with the oracle") {
        plan.m_range = {0};
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
    SECTION("negative horizon") {
        plan.horizon = -1;
        CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    }
}

TEST_CASE("a batch runs every cell and reuses samples within each k group", "[experiments]") {
    const BatchPlan plan = tiny_plan();
    const BatchResult result = run_batch(plan);

    REQUIRE(result.cells.size() == 8);  // 2 schemes × 2 k × 2 m
    for (const auto& [key, stats] : result.cells) {
        INFO(key.scheme << " k=" << key.k << " m=" << key.m);
        CHECK(stats.error.empty());
        CHECK(stats.gamma_effective == 3);
        CHECK(stats.samples.size() == 3);
        CHECK(stats.mean_peak_probability > 0.0);
        CHECK(stats.mean_peak_probability <= 1.0 + 1e-12);
        for (const SampleRecord& record : stats.samples) {
            CHECK(record.marked.size() == static_cast<std::size_t>(key.k));
            CHECK(is_mutually_non_adjacent(record.marked));
        }
    }

    SECTION("cells with the same k share the same marked sets") {
        const CellKey a{"n_over_N_times_k", 2, 1};
        const CellKey b{"n_over_N_times_k", 2, 2};
        const CellKey c{"explicit:" + std::to_string(0.3), 2, 1};
        REQUIRE(result.cells.count(a) == 1);
        REQUIRE(result.cells.count(b) == 1);
        REQUIRE(result.cells.count(c) == 1);
        CHECK(same_samples(result.cells.at(a), result.cells.at(b)));
        CHECK(same_samples(result.cells.at(a), result.cells.at(c)));
    }
    SECTION("different k groups draw different sets") {
        const CellKey k1{"n_over_N_times_k", 1, 1};
        const CellKey k2{"n_over_N_times_k", 2, 1};
        CHECK_FALSE(same_samples(result.cells.at(k1), result.cells.at(k2)));
    }
    SECTION("duplicate k entries collapse to one cell per key") {
        BatchPlan duplicated = plan;
        duplicated.k_range = {1, 1};
        const BatchResult dup = run_batch(duplicated);
        CHECK(dup.cells.size() == 4);  // 2 schemes × 1 distinct k × 2 m
    }
}

TEST_CASE("batch results are identical across reruns and worker counts", "[experiments]") {
    const BatchPlan plan = tiny_plan();
    const BatchResult serial_a = run_batch(plan, 1);
    const BatchResult serial_b = run_batch(plan, 1);
    const BatchResult threaded = run_batch(plan, 2);

    REQUIRE(serial_a.cells.size() == serial_b.cells.size());
    REQUIRE(serial_a.cells.size() == threaded.cells.size());
    for (const auto& [key, stats] : serial_a.cells) {
        for (const BatchResult* other : {&serial_b, &threaded}) {
            REQUIRE(other->cells.count(key) == 1);
            const CellStats& theirs = other->cells.at(key);
            CHECK(stats.mean_peak_probability == theirs.mean_peak_probability);
            CHECK(stats.cv_peak_probability == theirs.cv_peak_probability);
            CHECK(stats.mean_peak_step == theirs.mean_peak_step);
            CHECK(stats.cv_peak_step == theirs.cv_peak_step);
            CHECK(same_samples(stats, theirs));
        }
    }

    SECTION("a different master seed draws different samples") {
        BatchPlan reseeded = plan;
        reseeded.master_seed = 8;
        const BatchResult other = run_batch(reseeded);
        const CellKey key{"n_over_N_times_k", 2, 1};
        CHECK_FALSE(same_samples(serial_a.cells.at(key), other.cells.at(key)));
    }
}

TEST_CASE("a failing cell records its error and spares the batch", "[experiments]") {
    BatchPlan plan;
    plan.n = 3;
    plan.k_range = {1};
    plan.m_range = {0};
    plan.gamma = 2;
    plan.s = 0;
    plan.oracle = OracleMode::full_inversion;
    plan.schemes = {WeightScheme::explicit_weight(0.5), WeightScheme::explicit_weight(0.0)};
    plan.master_seed = 1;

    const BatchResult result = run_batch(plan);
    REQUIRE(result.cells.size() == 2);

    const CellKey bad{"explicit:" + std::to_string(0.5), 1, 0};
    const CellKey good{"explicit:" + std::to_string(0.0), 1, 0};
    REQUIRE(result.cells.count(bad) == 1);
    REQUIRE(result.cells.count(good) == 1);

    CHECK_FALSE(result.cells.at(bad).error.empty());
    CHECK(result.cells.at(bad).gamma_effective == 0);
    CHECK(result.cells.at(bad).samples.empty());

    CHECK(result.cells.at(good).error.empty());
    CHECK(result.cells.at(good).gamma_effective == 2);

    SECTION("the best-m table skips failed cells") {
        const std::vector<BestMRow> rows = best_m_table(result);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].scheme == good.scheme);
    }
}

TEST_CASE("the best-m table keeps the smallest m on ties", "[experiments]") {
    BatchResult result;
    const auto cell = [](double mean) {
        CellStats stats;
        stats.mean_peak_probability = mean;
        stats.gamma_effective = 1;
        return stats;
    };
    result.cells.emplace(CellKey{"a", 2, 1}, cell(0.5));
    result.cells.emplace(CellKey{"a", 2, 2}, cell(0.9));
    result.cells.emplace(CellKey{"a", 2, 3}, cell(0.9));
    result.cells.emplace(CellKey{"a", 3, 1}, cell(0.7));
    result.cells.emplace(CellKey{"b", 2, 1}, cell(0.4));

    const std::vector<BestMRow> rows = best_m_table(result);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].scheme == "a");
    CHECK(rows[0].k == 2);
    CHECK(rows[0].best_m == 2);  // 0.9 tie between m=2 and m=3 resolves down
    CHECK(rows[0].mean_peak_probability == 0.9);

    CHECK(rows[1].k == 3);
    CHECK(rows[1].best_m == 1);

    CHECK(rows[2].scheme == "b");

    CHECK_THROWS_AS(best_m_table(BatchResult{}), std::invalid_argument);
}

TEST_CASE("peak probability barely depends on where the marked vertices sit",
          "[experiments][slow]") {
    BatchPlan plan;
    plan.n = 12;
    plan.k_range = {2, 3, 4};
    plan.m_range = {11, 12, 13};
    plan.gamma = 10;
    plan.schemes = {WeightScheme::degree_pow_over_n_times_k(2.0)};
    plan.oracle = OracleMode::partial_inversion;
    plan.s = 1;
    plan.master_seed = 2024;

    const BatchResult result = run_batch(plan);
    const std::vector<BestMRow> rows = best_m_table(result);
    REQUIRE(rows.size() == 3);
    for (const BestMRow& row : rows) {
        INFO("k=" << row.k << " best m=" << row.best_m);
        CHECK(row.mean_peak_probability > 0.9);
        CHECK(row.cv_peak_probability < 1e-2);
    }
}
