// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_KERNEL_HPP_
#define HYPERTREE_KERNEL_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hypertree/boundary.hpp"

namespace hypertree {

using RowMajorMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Orthogonal projection kernel of the face process: P = (1/n) B^T B for the
// full-skeleton boundary matrix B. Symmetric, idempotent, rank C(n-1,d),
// constant diagonal (d+1)/n. Indexed by d-face lex rank on both axes.
struct ProjectionKernel {
    int n = 0;
    int d = 0;
    std::uint64_t rank = 0;  // C(n-1, d)
    Eigen::MatrixXd matrix;  // dense N x N, N = C(n, d+1)

    std::uint64_t num_faces() const { return static_cast<std::uint64_t>(matrix.rows()); }
};

// Largest face count for which the dense kernel (and the N x r cobasis) is
// built; larger inputs are refused as out of the supported envelope.
inline constexpr std::uint64_t kMaxKernelFaces = 25000;

ProjectionKernel projection_kernel(int n, int d);

// max |(P^2 - P)_{ij}|; zero for an exact projection.
double idempotency_error(const ProjectionKernel& kernel);

// N x r matrix U with orthonormal columns spanning range(B^T), so that
// U U^T = P. Rows are contiguous (row-major) because the sampler walks rows.
RowMajorMatrixXd orthonormal_cobasis(int n, int d);

// det P[A] for |A| = rank: the probability that the face process equals A.
// Zero (within roundoff) exactly when A is not a hypertree.
double subset_probability(const ProjectionKernel& kernel,
                          const std::vector<std::uint64_t>& faces);

// Sum of all k x k principal minors of P, evaluated as the elementary
// symmetric polynomial of the spectrum; equals C(rank, k) for a projection.
double principal_minor_sum(const ProjectionKernel& kernel, std::uint64_t k);

}  // namespace hypertree

#endif  // HYPERTREE_KERNEL_HPP_
