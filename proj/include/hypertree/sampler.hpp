// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_SAMPLER_HPP_
#define HYPERTREE_SAMPLER_HPP_

#include <cstdint>
#include <vector>

#include "hypertree/exact_linalg.hpp"
#include "hypertree/kernel.hpp"

namespace hypertree {

// One draw of the determinantal face process: exactly C(n-1,d) d-faces whose
// restricted boundary has full column rank (finite codimension-one homology).
struct HypertreeSample {
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;                // seed of the per-sample stream
    std::vector<std::uint64_t> faces;      // sorted lex ranks of the d-faces
    double min_selection_mass = 0.0;       // smallest row mass at pick time
};

// Draws one sample of the face process with kernel U U^T by sequential
// conditioning: at step t a row j is selected with probability
// ||row_j(W)||^2 / (r - t + 1), then the working basis W is reflected so the
// selected direction occupies one coordinate, which is dropped. The selected
// row masses certify full column rank of the output (each pick's mass is its
// squared distance from the span of the previous picks).
//
// The cobasis must come from orthonormal_cobasis(n, d). Every draw is a pure
// function of (cobasis, seed); the policy only toggles OpenMP in the row
// updates, which are bitwise order-independent.
HypertreeSample sample_hypertree(const RowMajorMatrixXd& cobasis, int n, int d,
                                 std::uint64_t seed,
                                 ExecPolicy policy = ExecPolicy::Parallel);

// Convenience overload that builds the cobasis itself; prefer the other
// overload when drawing many samples at the same (n, d).
HypertreeSample sample_hypertree(int n, int d, std::uint64_t seed,
                                 ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace hypertree

#endif  // HYPERTREE_SAMPLER_HPP_
