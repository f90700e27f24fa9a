/*
 * hypercube.hpp — n-dimensional hypercube topology and marked-vertex sampling
 *
 * Vertices of the n-cube are the integers [0, 2^n), read as n-bit strings;
 * two vertices are adjacent exactly when their labels differ in a single bit
 * (Hamming distance 1).  Flipping bit i of a label walks the edge in
 * direction i.
 *
 * Search experiments mark sets of mutually non-adjacent vertices (pairwise
 * Hamming distance >= 2).  sample_non_adjacent_set draws such sets by seeded
 * rejection sampling, so every experiment is reproducible from its seed.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mslqw {

// Vertex label, interpreted as an n-bit string.
using VertexId = std::uint64_t;

// Largest supported hypercube degree: labels and direction masks must fit
// in the 64-bit VertexId.
inline constexpr int max_degree = 63;

// Thrown when rejection sampling cannot place the requested number of
// mutually non-adjacent vertices within the attempt cap.
struct sampling_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ── basic topology ────────────────────────────────────────────────────────────

inline std::uint64_t vertex_count(int degree) {
    if (degree < 1 || degree > max_degree)
        throw std::invalid_argument("hypercube degree must be in [1, " +
                                    std::to_string(max_degree) + "], got " +
                                    std::to_string(degree));
    return std::uint64_t{1} << degree;
}

// Number of bit positions in which two labels differ.
inline int hamming_distance(VertexId x, VertexId y) {
    return std::popcount(x ^ y);
}

// The vertex reached from x along edge direction i, i.e. x with bit i
// flipped.  Involution: neighbor(neighbor(x, i, n), i, n) == x.
inline VertexId neighbor(VertexId x, int direction, int degree) {
    if (direction < 0 || direction >= degree)
        throw std::invalid_argument("edge direction " + std::to_string(direction) +
                                    " out of range for degree " + std::to_string(degree));
    return x ^ (VertexId{1} << direction);
}

// ── MarkedSet ─────────────────────────────────────────────────────────────────
// The search targets: distinct vertices of one hypercube, stored sorted
// ascending so equal sets compare equal and batch records stay canonical.
// Mutual non-adjacency is a property of the *sampled* sets (and queryable
// via is_mutually_non_adjacent), not a construction-time requirement: the
// oracle and measurement operate on any vertex set.
//
struct MarkedSet {
    int degree = 0;                   // ambient hypercube degree n
    std::vector<VertexId> vertices;   // sorted ascending, no duplicates

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
};

inline MarkedSet make_marked_set(int degree, std::vector<VertexId> vertices) {
    const std::uint64_t count = vertex_count(degree);
    std::sort(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= count)
            throw std::invalid_argument("marked vertex " + std::to_string(vertices[i]) +
                                        " out of range for degree " + std::to_string(degree));
        if (i > 0 && vertices[i] == vertices[i - 1])
            throw std::invalid_argument("duplicate marked vertex " +
                                        std::to_string(vertices[i]));
    }
    return MarkedSet{degree, std::move(vertices)};
}

// True iff every pair of vertices has Hamming distance >= 2.  Empty sets and
// singletons are vacuously non-adjacent.
inline bool is_mutually_non_adjacent(const MarkedSet& set) {
    for (std::size_t i = 0; i < set.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < set.vertices.size(); ++j)
            if (hamming_distance(set.vertices[i], set.vertices[j]) < 2)
                return false;
    return true;
}

// ── seeded sampling ───────────────────────────────────────────────────────────

// splitmix64: the standard 64-bit mix used to derive independent streams from
// one master seed.  Deterministic and platform-independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Draw k distinct, mutually non-adjacent vertices uniformly by rejection:
// propose uniform labels and reject any within Hamming distance 1 of the
// partial set.  Deterministic for a fixed (degree, k, seed).  Capped at
// 10,000 proposals, after which the requested set is deemed infeasible.
inline MarkedSet sample_non_adjacent_set(int degree, int k, std::uint64_t seed) {
    const std::uint64_t count = vertex_count(degree);
    if (k < 1)
        throw std::invalid_argument("sample size k must be >= 1, got " + std::to_string(k));

    constexpr int attempt_cap = 10000;
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = count - 1;

    std::vector<VertexId> picked;
    picked.reserve(static_cast<std::size_t>(k));
    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
        const VertexId v = rng() & mask;
        bool ok = true;
        for (VertexId u : picked) {
            if (hamming_distance(u, v) < 2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        picked.push_back(v);
        if (static_cast<int>(picked.size()) == k)
            return make_marked_set(degree, std::move(picked));
    }
    throw sampling_error("could not place " + std::to_string(k) +
                         " mutually non-adjacent vertices on the " +
                         std::to_string(degree) + "-cube within " +
                         std::to_string(attempt_cap) + " attempts");
}

} // namespace mslqw
