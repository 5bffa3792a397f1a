// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/homology.hpp"

#include <cmath>

namespace hypertree {

BigInt gram_torsion_scale(int n, int d) {
    if (n < d + 1 || d < 1) throw input_error("gram_torsion_scale: bad (n,d)");
    mpz_class e = binom_mpz(static_cast<unsigned long>(n - 2), static_cast<unsigned long>(d - 1));
    if (!e.fits_ulong_p()) throw input_error("gram_torsion_scale: exponent out of range");
    return pow_big(static_cast<unsigned long>(n), e.get_ui());
}

double torsion_log_upper_bound(int n, int d) {
    return 0.5 * static_cast<double>(binom(n - 1, d)) * std::log(static_cast<double>(d + 1));
}

BigInt gram_determinant(const SignedBoundaryMatrix& B, ExecPolicy policy) {
    const Eigen::MatrixXi G = B.gram_int();
    BigInt det = bareiss_determinant(BigMatrix::from_int(G), policy);
    if (det == 0) throw input_error("gram_determinant: not a hypertree (rank-deficient columns)");
    if (det < 0) throw internal_error("gram_determinant: Gram determinant must be positive");
    return det;
}

namespace {

std::vector<SparseEntry> boundary_entries(const SignedBoundaryMatrix& B) {
    std::vector<SparseEntry> entries;
    entries.reserve(B.entries.size());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        const auto* col = B.column(j);
        for (int i = 0; i <= B.d; ++i)
            entries.push_back({static_cast<int>(col[i].row), static_cast<int>(j),
                               static_cast<std::int64_t>(col[i].sign)});
    }
    return entries;
}


BigInt torsion_from_gram(const BigInt& gram, int n, int d) {
    const BigInt scale = gram_torsion_scale(n, d);
    BigInt sq;
    BigInt rem;
    mpz_fdiv_qr(sq.get_mpz_t(), rem.get_mpz_t(), gram.get_mpz_t(), scale.get_mpz_t());
    if (rem != 0)
        throw internal_error("torsion_order: Gram determinant not divisible by n^C(n-2,d-1)");
    return isqrt_exact(sq);
}

BigInt torsion_from_smith(const std::vector<BigInt>& factors, const SignedBoundaryMatrix& B) {
    if (static_cast<std::uint64_t>(factors.size()) != B.cols())
        throw input_error("torsion_order: not a hypertree (rank-deficient columns)");
    BigInt p(1);
    for (const BigInt& f : factors) p *= f;
    return p;
}

bool use_smith_by_default(const SignedBoundaryMatrix& B) { return B.n <= 20; }

}  // namespace

BigInt torsion_order(const SignedBoundaryMatrix& B, TorsionRoute route, ExecPolicy policy) {
    if (route == TorsionRoute::Auto)
        route = use_smith_by_default(B) ? TorsionRoute::Smith : TorsionRoute::Gram;
    if (route == TorsionRoute::Smith) {
        return torsion_from_smith(smith_normal_form_sparse(static_cast<int>(B.rows),
                                                            static_cast<int>(B.cols()),
                                                            boundary_entries(B)),
                                  B);
    }
    return torsion_from_gram(gram_determinant(B, policy), B.n, B.d);
}

TorsionRecord torsion_record(const SignedBoundaryMatrix& B, bool want_factors, TorsionRoute route,
                             ExecPolicy policy) {
    TorsionRecord rec;
    rec.gram_det = gram_determinant(B, policy);
    if (route == TorsionRoute::Auto && !want_factors)
        route = use_smith_by_default(B) ? TorsionRoute::Smith : TorsionRoute::Gram;

    if (want_factors || route == TorsionRoute::Smith) {
        // Plain elimination explodes on wide boundaries. Beyond this width
        // the Smith routine runs modulo the Gram determinant, a multiple of
        // the largest determinantal divisor by Cauchy-Binet; narrower inputs
        // keep the plain route so the cross-check stays fully independent of
        // the Bareiss result.
        const bool modular = B.cols() > 200;
        auto factors = smith_normal_form_sparse(
            static_cast<int>(B.rows), static_cast<int>(B.cols()), boundary_entries(B),
            modular ? rec.gram_det : BigInt(0), modular ? static_cast<int>(B.cols()) : -1);
        rec.order = torsion_from_smith(factors, B);
        rec.invariant_factors = std::move(factors);
        // The Gram identity must agree with the Smith route exactly.
        if (torsion_from_gram(rec.gram_det, B.n, B.d) != rec.order)
            throw internal_error("torsion_record: Smith and Gram routes disagree");
    } else {
        rec.order = torsion_from_gram(rec.gram_det, B.n, B.d);
    }
    return rec;
}

}  // namespace hypertree
