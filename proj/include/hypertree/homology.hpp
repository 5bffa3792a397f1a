// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "hypertree/boundary.hpp"
#include "hypertree/exact_linalg.hpp"

namespace hypertree {

/// Exact description of the codimension-one homology of a face set with
/// finite homology: its order, the Gram determinant det(B^T B), and the
/// invariant factors when they were computed.
struct TorsionRecord {
    BigInt order{1};
    BigInt gram_det{0};
    std::optional<std::vector<BigInt>> invariant_factors;
};

/// Exact determinant of B^T B for a full-column-rank boundary restriction.
/// Throws input_error("not a hypertree") when the columns are dependent.
BigInt gram_determinant(const SignedBoundaryMatrix& B,
                        ExecPolicy policy = ExecPolicy::Parallel);

enum class TorsionRoute {
    Auto,   ///< Gram determinant route; Smith form when n is small.
    Gram,   ///< det(B^T B) = n^C(n-2,d-1) * order^2, solved for order.
    Smith,  ///< product of the invariant factors of B.
};

/// |H_{d-1}| of the complex with complete (d-1)-skeleton and d-faces equal to
/// the columns of B. Requires full column rank (finite homology).
BigInt torsion_order(const SignedBoundaryMatrix& B, TorsionRoute route = TorsionRoute::Auto,
                     ExecPolicy policy = ExecPolicy::Parallel);

/// Full record; computes invariant factors when `want_factors` is set or the
/// chosen route is Smith.
TorsionRecord torsion_record(const SignedBoundaryMatrix& B, bool want_factors = false,
                             TorsionRoute route = TorsionRoute::Auto,
                             ExecPolicy policy = ExecPolicy::Parallel);

/// n^C(n-2,d-1), the exact ratio gram_det / order^2.
BigInt gram_torsion_scale(int n, int d);

/// Upper bound log|H| <= C(n-1,d) * log(d+1) / 2, valid for every hypertree.
double torsion_log_upper_bound(int n, int d);

}  // namespace hypertree
