#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>
#include <set>

#include <mslqw/hypercube.hpp>

using namespace mslqw;

TEST_CASE("hamming_distance counts differing bits", "[hypercube]") {
    SECTION("explicit 12-bit labels") {
        // Frozen against the popcount of the XOR, computed independently.
        CHECK(hamming_distance(0b000011111110, 0b010111011010) ==
              std::popcount(0b000011111110ULL ^ 0b010111011010ULL));
        CHECK(hamming_distance(254, 1498) == 4);
    }
    SECTION("identity and full flip") {
        std::mt19937_64 rng(42);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 20);
            const VertexId x = rng() & (vertex_count(n) - 1);
            CHECK(hamming_distance(x, x) == 0);
            CHECK(hamming_distance(0, vertex_count(n) - 1) == n);
        }
    }
}

TEST_CASE("neighbor flips exactly one bit and is an involution", "[hypercube]") {
    SECTION("explicit flips") {
        CHECK(neighbor(0b0000, 2, 4) == 0b0100);
        CHECK(neighbor(0b0100, 2, 4) == 0b0000);
    }
    SECTION("property over random vertices") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 24);
            const VertexId x = rng() & (vertex_count(n) - 1);
            const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            const VertexId y = neighbor(x, i, n);
            CHECK(hamming_distance(x, y) == 1);
            CHECK(neighbor(y, i, n) == x);
        }
    }
    SECTION("out-of-range direction is rejected") {
        CHECK_THROWS_AS(neighbor(0, 4, 4), std::invalid_argument);
        CHECK_THROWS_AS(neighbor(0, -1, 4), std::invalid_argument);
    }
}

TEST_CASE("marked sets are canonical: sorted, distinct, in range", "[hypercube]") {
    const MarkedSet set = make_marked_set(12, {1498, 254});
    CHECK(set.vertices == std::vector<VertexId>{254, 1498});
    CHECK(set.size() == 2);

    CHECK_THROWS_AS(make_marked_set(3, {8}), std::invalid_argument);   // out of range
    CHECK_THROWS_AS(make_marked_set(3, {5, 5}), std::invalid_argument);  // duplicate
}

TEST_CASE("is_mutually_non_adjacent checks pairwise Hamming distance", "[hypercube]") {
    CHECK(is_mutually_non_adjacent(make_marked_set(12, {254, 1498})));
    CHECK_FALSE(is_mutually_non_adjacent(make_marked_set(12, {0, 1})));
    CHECK(is_mutually_non_adjacent(make_marked_set(12, {})));
    CHECK(is_mutually_non_adjacent(make_marked_set(12, {77})));
}

TEST_CASE("sample_non_adjacent_set draws valid reproducible sets", "[hypercube]") {
    SECTION("always mutually non-adjacent, right size, in range") {
        std::mt19937_64 seeds(2024);
        for (int trial = 0; trial < 60; ++trial) {
            const int k = 1 + static_cast<int>(seeds() % 12);
            const MarkedSet set = sample_non_adjacent_set(12, k, seeds());
            CHECK(static_cast<int>(set.size()) == k);
            CHECK(is_mutually_non_adjacent(set));
            for (VertexId v : set.vertices) CHECK(v < vertex_count(12));
        }
    }
    SECTION("deterministic for a fixed seed") {
        const MarkedSet a = sample_non_adjacent_set(12, 5, 99);
        const MarkedSet b = sample_non_adjacent_set(12, 5, 99);
        CHECK(a.vertices == b.vertices);
        const MarkedSet c = sample_non_adjacent_set(12, 5, 100);
        CHECK(a.vertices != c.vertices);  // different stream
    }
    SECTION("the 3-cube holds four mutually non-adjacent vertices but not five") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const MarkedSet set = sample_non_adjacent_set(3, 4, seed);
            CHECK(is_mutually_non_adjacent(set));
        }
        CHECK_THROWS_AS(sample_non_adjacent_set(3, 5, 0), sampling_error);
    }
    SECTION("k < 1 is a usage error") {
        CHECK_THROWS_AS(sample_non_adjacent_set(12, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("splitmix64 is a fixed deterministic mix", "[hypercube]") {
    // Reference values from the published splitmix64 algorithm.
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(1) != splitmix64(2));
    CHECK(splitmix64(42) == splitmix64(42));
}
