// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <doctest.h>

#include "hypertree/boundary.hpp"
#include "hypertree/combinatorics.hpp"
#include "hypertree/exact_linalg.hpp"
#include "hypertree/kernel.hpp"
#include "hypertree/rng.hpp"
#include "hypertree/sampler.hpp"

using namespace hypertree;

TEST_CASE("samples are hypertrees: right count, sorted, independent columns") {
    const RowMajorMatrixXd cobasis = orthonormal_cobasis(7, 2);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const HypertreeSample sample = sample_hypertree(cobasis, 7, 2, seed);
        CHECK(sample.n == 7);
        CHECK(sample.d == 2);
        CHECK(sample.seed == seed);
        REQUIRE(sample.faces.size() == binom(6, 2));
        CHECK(std::is_sorted(sample.faces.begin(), sample.faces.end()));
        CHECK(std::adjacent_find(sample.faces.begin(), sample.faces.end()) ==
              sample.faces.end());
        CHECK(sample.min_selection_mass > 1e-9);

        const SignedBoundaryMatrix B = boundary_matrix_for_faces(7, 2, sample.faces);
        CHECK(has_full_column_rank(B.to_dense_int()));
    }
}

TEST_CASE("sampling is deterministic in the seed and execution policy") {
    const RowMajorMatrixXd cobasis = orthonormal_cobasis(12, 2);
    const HypertreeSample a = sample_hypertree(cobasis, 12, 2, 99, ExecPolicy::Parallel);
    const HypertreeSample b = sample_hypertree(cobasis, 12, 2, 99, ExecPolicy::Serial);
    CHECK(a.faces == b.faces);

    const HypertreeSample c = sample_hypertree(12, 2, 99);  // convenience overload
    CHECK(a.faces == c.faces);

    const HypertreeSample other = sample_hypertree(cobasis, 12, 2, 100);
    CHECK(a.faces != other.faces);
}

TEST_CASE("empirical law on 4 vertices matches the determinantal law") {
    // All four 3-subsets of the triangles on 4 vertices are hypertrees with
    // probability 1/4 each. With 10000 draws, a 3.3-sigma band around 1/4 is
    // about +-0.0143.
    const RowMajorMatrixXd cobasis = orthonormal_cobasis(4, 2);
    std::array<std::uint64_t, 4> missing_counts{};
    const std::uint64_t draws = 10000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const HypertreeSample sample =
            sample_hypertree(cobasis, 4, 2, derive_seed(2026, 4, i));
        REQUIRE(sample.faces.size() == 3);
        std::uint64_t missing = 0 + 1 + 2 + 3;
        for (const std::uint64_t f : sample.faces) missing -= f;
        REQUIRE(missing < 4);
        ++missing_counts[missing];
    }
    for (const std::uint64_t count : missing_counts) {
        const double freq = static_cast<double>(count) / static_cast<double>(draws);
        CHECK(std::abs(freq - 0.25) < 0.0143);
    }
}

TEST_CASE("inclusion frequencies match the kernel diagonal") {
    // E|X intersect A| = |A| (d+1)/n for any fixed face set A.
    const int n = 6, d = 2;
    const RowMajorMatrixXd cobasis = orthonormal_cobasis(n, d);
    const std::vector<std::uint64_t> A = {0, 3, 5, 8, 11, 14, 19};  // |A| = 7
    const double expected = 7.0 * (d + 1.0) / n;  // 3.5

    const std::uint64_t draws = 2000;
    double total = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const HypertreeSample sample =
            sample_hypertree(cobasis, n, d, derive_seed(777, n, i));
        for (const std::uint64_t f : A)
            total += std::binary_search(sample.faces.begin(), sample.faces.end(), f) ? 1.0 : 0.0;
    }
    const double mean = total / static_cast<double>(draws);
    // Per-draw variance of |X intersect A| is at most |A|/4; five sigma here.
    CHECK(std::abs(mean - expected) < 0.15);
}

TEST_CASE("distinct seeds exercise distinct hypertrees") {
    // A weak mixing smoke check: 30 seeds at n = 10 should not collide.
    const RowMajorMatrixXd cobasis = orthonormal_cobasis(10, 2);
    std::map<std::vector<std::uint64_t>, int> seen;
    for (std::uint64_t seed = 0; seed < 30; ++seed)
        ++seen[sample_hypertree(cobasis, 10, 2, derive_seed(5, 10, seed)).faces];
    CHECK(seen.size() == 30);
}

TEST_CASE("moderate size smoke test") {
    const HypertreeSample sample = sample_hypertree(20, 2, 7);
    CHECK(sample.faces.size() == binom(19, 2));
    CHECK(sample.min_selection_mass > 1e-9);
}
