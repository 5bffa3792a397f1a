// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_ENUMERATE_HPP_
#define HYPERTREE_ENUMERATE_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "hypertree/exact_linalg.hpp"

namespace hypertree {

// One enumerated hypertree: its face set (sorted lex ranks), the exact
// torsion order |H| and the sampling weight |H|^2.
struct HypertreeRecord {
    std::vector<std::uint64_t> faces;
    BigInt torsion;
    BigInt weight;
};

struct EnumerationResult {
    int n = 0;
    int d = 0;
    std::vector<HypertreeRecord> hypertrees;  // lex order of face sets
    BigInt total_weight;                      // sum of |H|^2, must be n^C(n-2,d)
    BigInt expected_weight;                   // n^C(n-2,d)
    BigInt candidate_count;                   // C(C(n,d+1), C(n-1,d))
};

// Largest number of C(n-1,d)-subsets the exhaustive enumerator will walk.
inline constexpr std::uint64_t kMaxEnumerationCandidates = 10'000'000;

// Walks every C(n-1,d)-subset of the d-faces in lex order (streamed, no
// candidate list), prunes subsets leaving some (d-1)-face uncovered (an
// uncovered face makes the codimension-one homology infinite), and keeps
// exactly those whose restricted boundary has full column rank, with exact
// torsion. Workers split the lex-rank range; merging interval results in
// rank order makes the output identical to the serial walk.
EnumerationResult enumerate_hypertrees(int n, int d,
                                       ExecPolicy policy = ExecPolicy::Parallel);

// Exact sampling law on the enumerated support: face set -> |H|^2 / n^C(n-2,d).
// Probabilities sum to exactly 1.
std::map<std::vector<std::uint64_t>, mpq_class> exact_distribution(
    const EnumerationResult& result);

// Pearson chi-squared goodness-of-fit of sampled face sets against the
// enumerated law. Any sample outside the support fails the test outright
// (infinite statistic). Too few samples only degrades `sufficient`.
struct GofReport {
    double statistic = 0.0;
    std::uint64_t degrees_of_freedom = 0;
    double p_value = 0.0;
    double alpha = 0.0;
    bool pass = false;                 // p_value > alpha
    std::uint64_t out_of_support = 0;  // samples matching no hypertree
    bool sufficient = false;           // #samples >= 20 * #hypertrees
};
GofReport sampler_goodness_of_fit(const EnumerationResult& result,
                                  const std::vector<std::vector<std::uint64_t>>& samples,
                                  double alpha = 0.01);

}  // namespace hypertree

#endif  // HYPERTREE_ENUMERATE_HPP_
