// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Dense>

#include "hypertree/combinatorics.hpp"

namespace hypertree {

using BigInt = mpz_class;

/// Natural log of a positive big integer, usable far beyond double range.
double log_big(const BigInt& x);

/// Exact integer square root; throws internal_error if x is not a perfect square.
BigInt isqrt_exact(const BigInt& x);

/// base^exp for unsigned base and exponent.
BigInt pow_big(unsigned long base, unsigned long exp);

/// Dense row-major big-integer matrix, small enough for exact elimination work.
struct BigMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<BigInt> a;

    BigMatrix() = default;
    BigMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    BigInt& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const BigInt& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static BigMatrix from_int(const Eigen::MatrixXi& m);
};

enum class ExecPolicy { Serial, Parallel };

/// Exact determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Returns 0 for singular input. The matrix is consumed.
BigInt bareiss_determinant(BigMatrix m, ExecPolicy policy = ExecPolicy::Parallel);

/// Rank over the rationals by fraction-free elimination with early abort.
/// Entries must be small (|entry| <= few); intermediate growth is handled
/// by switching to big integers when 64-bit words would overflow.
int rational_rank(const Eigen::MatrixXi& m);

/// True iff the matrix has full column rank over the rationals.
bool has_full_column_rank(const Eigen::MatrixXi& m);

/// Invariant factors d_1 | d_2 | ... | d_r of an integer matrix, r = rank.
/// All factors positive; empty matrix yields an empty list.
///
/// Plain elimination can suffer severe coefficient growth on wide inputs.
/// If `modulus` is a positive multiple of the largest determinantal divisor
/// (the gcd of all r x r minors; the Gram determinant det(M^T M) of a
/// full-column-rank matrix qualifies by Cauchy-Binet), the same invariant
/// factors are produced with every intermediate entry bounded by the
/// modulus: unimodular operations preserve each determinantal-divisor gcd
/// with the modulus, and entrywise reduction changes any minor by a
/// multiple of it. Modular runs cannot see the rank (entries that are
/// nonzero multiples of the modulus reduce to zero), so `known_rank` must
/// supply it; throws internal_error if the observed structure contradicts
/// the promised modulus or rank. With modulus == 0 the elimination is
/// plain and `known_rank`, when nonnegative, is only validated.
std::vector<BigInt> smith_normal_form(BigMatrix m, const BigInt& modulus = BigInt(0),
                                      int known_rank = -1);

/// One entry of a sparse integer matrix.
struct SparseEntry {
    int row = 0;
    int col = 0;
    std::int64_t value = 0;
};

/// Smith normal form tuned for very sparse inputs (boundary matrices have
/// d+2 nonzeros per column): unit pivots are eliminated first with
/// fill-minimizing (Markowitz) pivot choice, each contributing an invariant
/// factor 1 without any coefficient growth worth naming; only the small
/// residual core without unit entries goes through the dense big-integer
/// routine. Falls back to the dense routine outright if intermediate values
/// leave the fast 64-bit range. `modulus` and `known_rank` have the same
/// meaning as for smith_normal_form and are forwarded to the dense core
/// (with the rank reduced by the unit pivots already extracted).
std::vector<BigInt> smith_normal_form_sparse(int rows, int cols,
                                             const std::vector<SparseEntry>& entries,
                                             const BigInt& modulus = BigInt(0),
                                             int known_rank = -1);

}  // namespace hypertree
