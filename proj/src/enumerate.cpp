// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include <boost/math/special_functions/gamma.hpp>

#include "hypertree/boundary.hpp"
#include "hypertree/combinatorics.hpp"
#include "hypertree/homology.hpp"

namespace hypertree {

EnumerationResult enumerate_hypertrees(int n, int d, ExecPolicy policy) {
    if (d < 1 || n < d + 1) throw input_error("enumerate_hypertrees: require n >= d+1 >= 2");
    const std::uint64_t num_faces = binom(n, d + 1);
    const std::uint64_t r = binom(n - 1, d);
    const BigInt candidates = binom_mpz(num_faces, r);
    if (!binom_at_most(static_cast<int>(num_faces), static_cast<int>(r),
                       kMaxEnumerationCandidates))
        throw input_error("enumerate_hypertrees: " + candidates.get_str() +
                          " candidate subsets exceed the envelope of " +
                          std::to_string(kMaxEnumerationCandidates));
    const std::uint64_t ridges = binom(n, d);
    if (ridges > 64)
        throw internal_error("enumerate_hypertrees: more than 64 ridge faces inside the "
                             "candidate envelope");

    const SignedBoundaryMatrix full = boundary_matrix(n, d);
    // Covering prune data: the facet set of each d-face as a row bitmask.
    std::vector<std::uint64_t> face_mask(num_faces, 0);
    for (std::uint64_t j = 0; j < num_faces; ++j) {
        const auto* col = full.column(j);
        for (int i = 0; i <= d; ++i) face_mask[j] |= std::uint64_t{1} << col[i].row;
    }
    const std::uint64_t covered_all =
        (ridges == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << ridges) - 1;

    const std::uint64_t total = binom(static_cast<int>(num_faces), static_cast<int>(r));
    const int workers =
        policy == ExecPolicy::Parallel ? std::max(1, omp_get_max_threads()) : 1;
    std::vector<std::vector<HypertreeRecord>> found(workers);
    std::vector<BigInt> weight(workers, BigInt(0));

#pragma omp parallel for schedule(static, 1) num_threads(workers)
    for (int t = 0; t < workers; ++t) {
        const std::uint64_t lo = total * static_cast<std::uint64_t>(t) / workers;
        const std::uint64_t hi = total * (static_cast<std::uint64_t>(t) + 1) / workers;
        if (lo == hi) continue;
        std::vector<int> idx;
        combination_from_rank(idx, static_cast<int>(num_faces), static_cast<int>(r), lo);
        std::vector<std::uint64_t> faces(r);
        for (std::uint64_t rank = lo; rank < hi; ++rank) {
            std::uint64_t covered = 0;
            for (int j : idx) covered |= face_mask[static_cast<std::uint64_t>(j)];
            if (covered == covered_all) {
                for (std::size_t i = 0; i < faces.size(); ++i)
                    faces[i] = static_cast<std::uint64_t>(idx[i]);
                const SignedBoundaryMatrix B = restrict_columns(full, faces);
                if (has_full_column_rank(B.to_dense_int())) {
                    // The Smith route cross-checks the Gram identity inside.
                    TorsionRecord rec =
                        torsion_record(B, false, TorsionRoute::Smith, ExecPolicy::Serial);
                    weight[t] += rec.order * rec.order;
                    found[t].push_back(
                        {faces, std::move(rec.order), BigInt(0)});
                    found[t].back().weight = found[t].back().torsion * found[t].back().torsion;
                }
            }
            if (rank + 1 < hi && !next_combination(idx, static_cast<int>(num_faces)))
                throw internal_error("enumerate_hypertrees: combination stream exhausted early");
        }
    }

    EnumerationResult result;
    result.n = n;
    result.d = d;
    result.candidate_count = candidates;
    result.expected_weight = pow_big(static_cast<unsigned long>(n),
                                     static_cast<unsigned long>(binom(n - 2, d)));
    result.total_weight = 0;
    std::size_t count = 0;
    for (const auto& part : found) count += part.size();
    result.hypertrees.reserve(count);
    for (int t = 0; t < workers; ++t) {
        result.total_weight += weight[t];
        for (auto& rec : found[t]) result.hypertrees.push_back(std::move(rec));
    }
    return result;
}

std::map<std::vector<std::uint64_t>, mpq_class> exact_distribution(
    const EnumerationResult& result) {
    std::map<std::vector<std::uint64_t>, mpq_class> law;
    mpq_class sum(0);
    for (const auto& rec : result.hypertrees) {
        mpq_class p(rec.weight, result.expected_weight);
        p.canonicalize();
        sum += p;
        law.emplace(rec.faces, std::move(p));
    }
    if (!result.hypertrees.empty() && sum != 1)
        throw internal_error("exact_distribution: probabilities sum to " + sum.get_str() +
                             ", not 1");
    return law;
}

GofReport sampler_goodness_of_fit(const EnumerationResult& result,
                                  const std::vector<std::vector<std::uint64_t>>& samples,
                                  double alpha) {
    if (result.hypertrees.empty())
        throw input_error("sampler_goodness_of_fit: empty enumeration");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw input_error("sampler_goodness_of_fit: require 0 < alpha < 1");

    std::map<std::vector<std::uint64_t>, std::size_t> index;
    for (std::size_t i = 0; i < result.hypertrees.size(); ++i)
        index.emplace(result.hypertrees[i].faces, i);

    std::vector<std::uint64_t> observed(result.hypertrees.size(), 0);
    GofReport report;
    report.alpha = alpha;
    for (const auto& sample : samples) {
        auto it = index.find(sample);
        if (it == index.end())
            ++report.out_of_support;
        else
            ++observed[it->second];
    }

    const double total = static_cast<double>(samples.size());
    const double scale = mpz_get_d(result.expected_weight.get_mpz_t());
    double statistic = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected =
            total * mpz_get_d(result.hypertrees[i].weight.get_mpz_t()) / scale;
        const double diff = static_cast<double>(observed[i]) - expected;
        statistic += diff * diff / expected;
    }
    report.degrees_of_freedom = result.hypertrees.size() - 1;
    report.sufficient = samples.size() >= 20 * result.hypertrees.size();
    if (report.out_of_support > 0) {
        // Mass outside the support: the law puts probability 0 there, so the
        // fit is rejected outright.
        report.statistic = std::numeric_limits<double>::infinity();
        report.p_value = 0.0;
        report.pass = false;
        return report;
    }
    report.statistic = statistic;
    report.p_value = boost::math::gamma_q(static_cast<double>(report.degrees_of_freedom) / 2.0,
                                          statistic / 2.0);
    report.pass = report.p_value > alpha;
    return report;
}

}  // namespace hypertree
