// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/kernel.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/Sparse>

#include "hypertree/combinatorics.hpp"
#include "hypertree/spectral.hpp"

namespace hypertree {

namespace {

void check_envelope(int n, int d, const char* what) {
    if (d < 1 || n < d + 1) throw input_error(std::string(what) + ": require n >= d+1 >= 2");
    if (!binom_at_most(n, d + 1, kMaxKernelFaces))
        throw input_error(std::string(what) + ": C(n,d+1) exceeds the supported envelope of " +
                          std::to_string(kMaxKernelFaces) + " faces");
}

}  // namespace

ProjectionKernel projection_kernel(int n, int d) {
    check_envelope(n, d, "projection_kernel");
    const SignedBoundaryMatrix B = boundary_matrix(n, d);
    const Eigen::SparseMatrix<double> S = B.to_sparse();
    ProjectionKernel K;
    K.n = n;
    K.d = d;
    K.rank = binom(n - 1, d);
    K.matrix = Eigen::MatrixXd(S.transpose() * S) / static_cast<double>(n);
    return K;
}

double idempotency_error(const ProjectionKernel& kernel) {
    const Eigen::MatrixXd& P = kernel.matrix;
    return (P * P - P).cwiseAbs().maxCoeff();
}

RowMajorMatrixXd orthonormal_cobasis(int n, int d) {
    check_envelope(n, d, "orthonormal_cobasis");
    const SignedBoundaryMatrix B = boundary_matrix(n, d);
    const Eigen::SparseMatrix<double> S = B.to_sparse();
    const auto M = static_cast<Eigen::Index>(B.rows);
    const auto r = static_cast<Eigen::Index>(binom(n - 1, d));

    // Up-Laplacian on (d-1)-faces of the complete skeleton. Its spectrum is
    // {0, n} with the zero eigenspace of dimension M - r, so the top-r
    // eigenvectors V give an exact orthonormal basis of range(B), and
    // U = B^T V / sqrt(n) has orthonormal columns spanning range(B^T).
    Eigen::MatrixXd L(S * Eigen::SparseMatrix<double>(S.transpose()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success)
        throw internal_error("orthonormal_cobasis: eigensolver failed to converge");

    // Certify the clean spectral split before trusting the eigenvector block.
    const double tol = 1e-6 * n;
    for (Eigen::Index i = 0; i < M; ++i) {
        const double lam = es.eigenvalues()(i);
        const bool near_zero = std::abs(lam) <= tol;
        const bool near_n = std::abs(lam - n) <= tol;
        if (i < M - r ? !near_zero : !near_n)
            throw internal_error("orthonormal_cobasis: spectral split certificate failed");
    }

    RowMajorMatrixXd U = S.transpose() * es.eigenvectors().rightCols(r);
    U /= std::sqrt(static_cast<double>(n));
    return U;
}

double subset_probability(const ProjectionKernel& kernel,
                          const std::vector<std::uint64_t>& faces) {
    if (faces.size() != kernel.rank)
        throw input_error("subset_probability: subset size must equal the kernel rank");
    const auto r = static_cast<Eigen::Index>(faces.size());
    Eigen::MatrixXd minor(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (faces[i] >= kernel.num_faces())
            throw input_error("subset_probability: face rank out of range");
        for (Eigen::Index j = 0; j < r; ++j) {
            minor(i, j) = kernel.matrix(static_cast<Eigen::Index>(faces[i]),
                                        static_cast<Eigen::Index>(faces[j]));
        }
    }
    return Eigen::FullPivLU<Eigen::MatrixXd>(minor).determinant();
}

double principal_minor_sum(const ProjectionKernel& kernel, std::uint64_t k) {
    if (k > kernel.rank) throw input_error("principal_minor_sum: k exceeds the kernel rank");
    if (k == 0) return 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel.matrix,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw internal_error("principal_minor_sum: eigensolver failed to converge");
    std::vector<double> eigs(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
    return elementary_symmetric(eigs, static_cast<std::size_t>(k));
}

}  // namespace hypertree
