// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hypertree/combinatorics.hpp"

namespace hypertree {

/// Signed boundary matrix of a set of d-faces over the complete (d-1)-skeleton.
///
/// Rows are indexed by the C(n,d) faces of dimension d-1 (lex rank order),
/// columns by the stored d-faces. Each column holds the d+1 facets of its
/// d-face with alternating signs: deleting the i-th smallest vertex carries
/// sign (-1)^i.
struct SignedBoundaryMatrix {
    int n = 0;
    int d = 0;
    std::uint64_t rows = 0;
    std::vector<std::uint64_t> col_faces;  // lex ranks of the d-faces, column order

    struct Entry {
        std::uint32_t row;
        std::int8_t sign;
    };
    // Column-major: entries of column j are entry[j*(d+1) .. (j+1)*(d+1)).
    std::vector<Entry> entries;

    std::uint64_t cols() const { return col_faces.size(); }
    const Entry* column(std::size_t j) const { return entries.data() + j * (d + 1); }

    Eigen::SparseMatrix<double> to_sparse() const;
    Eigen::MatrixXd to_dense() const;
    Eigen::MatrixXi to_dense_int() const;

    /// Exact Gram matrix B^T B; entries fit in int (diagonal d+1, rest in {-1,0,1}).
    Eigen::MatrixXi gram_int() const;
};

/// Boundary map of the full d-skeleton of the simplex on [1..n].
SignedBoundaryMatrix boundary_matrix(int n, int d);

/// Keeps the columns whose d-faces appear in `face_ranks`, order preserved.
/// Throws input_error if some requested face is not a column of `B`.
SignedBoundaryMatrix restrict_columns(const SignedBoundaryMatrix& B,
                                      const std::vector<std::uint64_t>& face_ranks);

/// Boundary matrix restricted to the given d-faces, built directly.
SignedBoundaryMatrix boundary_matrix_for_faces(int n, int d,
                                               const std::vector<std::uint64_t>& face_ranks);

}  // namespace hypertree
