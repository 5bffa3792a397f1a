// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/boundary.hpp"

#include <algorithm>

namespace hypertree {

namespace {

// Facets of the d-face with the given vertex list, as rows of the boundary
// column. Deleting vertex i (0-based position) contributes sign (-1)^i.
void fill_column(int n, int d, const std::vector<int>& verts,
                 SignedBoundaryMatrix::Entry* out) {
    std::vector<int> facet(d);
    for (int i = 0; i <= d; ++i) {
        int t = 0;
        for (int j = 0; j <= d; ++j) {
            if (j != i) facet[t++] = verts[j];
        }
        out[i].row = static_cast<std::uint32_t>(combination_rank(n, facet));
        out[i].sign = (i % 2 == 0) ? 1 : -1;
    }
}

}  // namespace

Eigen::SparseMatrix<double> SignedBoundaryMatrix::to_sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(entries.size());
    for (std::size_t j = 0; j < cols(); ++j) {
        const Entry* col = column(j);
        for (int i = 0; i <= d; ++i) {
            trip.emplace_back(static_cast<int>(col[i].row), static_cast<int>(j),
                              static_cast<double>(col[i].sign));
        }
    }
    Eigen::SparseMatrix<double> M(static_cast<int>(rows), static_cast<int>(cols()));
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

Eigen::MatrixXd SignedBoundaryMatrix::to_dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<int>(rows), static_cast<int>(cols()));
    for (std::size_t j = 0; j < cols(); ++j) {
        const Entry* col = column(j);
        for (int i = 0; i <= d; ++i) M(col[i].row, static_cast<int>(j)) = col[i].sign;
    }
    return M;
}

Eigen::MatrixXi SignedBoundaryMatrix::to_dense_int() const {
    Eigen::MatrixXi M = Eigen::MatrixXi::Zero(static_cast<int>(rows), static_cast<int>(cols()));
    for (std::size_t j = 0; j < cols(); ++j) {
        const Entry* col = column(j);
        for (int i = 0; i <= d; ++i) M(col[i].row, static_cast<int>(j)) = col[i].sign;
    }
    return M;
}

Eigen::MatrixXi SignedBoundaryMatrix::gram_int() const {
    const int r = static_cast<int>(cols());
    Eigen::MatrixXi G = Eigen::MatrixXi::Zero(r, r);
    for (int a = 0; a < r; ++a) {
        const Entry* ca = column(a);
        G(a, a) = d + 1;
        for (int b = a + 1; b < r; ++b) {
            const Entry* cb = column(b);
            // Two distinct d-faces share at most one facet, so the dot is
            // -1, 0 or 1. Column support is tiny; scan all pairs.
            int dot = 0;
            for (int i = 0; i <= d; ++i) {
                for (int j = 0; j <= d; ++j) {
                    if (ca[i].row == cb[j].row)
                        dot += static_cast<int>(ca[i].sign) * static_cast<int>(cb[j].sign);
                }
            }
            G(a, b) = dot;
            G(b, a) = dot;
        }
    }
    return G;
}

SignedBoundaryMatrix boundary_matrix(int n, int d) {
    if (d < 1 || n < d + 1) throw input_error("boundary_matrix: require n >= d+1 >= 2");
    SignedBoundaryMatrix B;
    B.n = n;
    B.d = d;
    B.rows = binom(n, d);
    const std::uint64_t ncols = binom(n, d + 1);
    B.col_faces.resize(ncols);
    B.entries.resize(ncols * (d + 1));

    // Full skeleton: column j is the d-face of lex rank j.
    std::vector<int> idx(d + 1);
    for (int i = 0; i <= d; ++i) idx[i] = i;
    std::vector<int> verts(d + 1);
    for (std::uint64_t j = 0; j < ncols; ++j) {
        for (int i = 0; i <= d; ++i) verts[i] = idx[i] + 1;
        B.col_faces[j] = j;
        fill_column(n, d, verts, B.entries.data() + j * (d + 1));
        if (j + 1 < ncols && !next_combination(idx, n))
            throw internal_error("boundary_matrix: combination enumeration exhausted early");
    }
    return B;
}

SignedBoundaryMatrix restrict_columns(const SignedBoundaryMatrix& B,
                                      const std::vector<std::uint64_t>& face_ranks) {
    SignedBoundaryMatrix R;
    R.n = B.n;
    R.d = B.d;
    R.rows = B.rows;
    R.col_faces = face_ranks;
    R.entries.resize(face_ranks.size() * (B.d + 1));

    // Full-skeleton boundary columns are indexed by face rank directly.
    for (std::size_t j = 0; j < face_ranks.size(); ++j) {
        const std::uint64_t fr = face_ranks[j];
        std::size_t src = static_cast<std::size_t>(-1);
        if (fr < B.cols() && B.col_faces[fr] == fr) {
            src = fr;
        } else {
            auto it = std::find(B.col_faces.begin(), B.col_faces.end(), fr);
            if (it == B.col_faces.end())
                throw input_error("restrict_columns: face not present in matrix");
            src = static_cast<std::size_t>(it - B.col_faces.begin());
        }
        std::copy(B.column(src), B.column(src) + B.d + 1, R.entries.data() + j * (B.d + 1));
    }
    return R;
}

SignedBoundaryMatrix boundary_matrix_for_faces(int n, int d,
                                               const std::vector<std::uint64_t>& face_ranks) {
    if (d < 1 || n < d + 1) throw input_error("boundary_matrix_for_faces: require n >= d+1 >= 2");
    SignedBoundaryMatrix B;
    B.n = n;
    B.d = d;
    B.rows = binom(n, d);
    B.col_faces = face_ranks;
    B.entries.resize(face_ranks.size() * (d + 1));
    const std::uint64_t nfaces = binom(n, d + 1);
    for (std::size_t j = 0; j < face_ranks.size(); ++j) {
        if (face_ranks[j] >= nfaces)
            throw input_error("boundary_matrix_for_faces: face rank out of range");
        Face f = face_unrank(n, d + 1, face_ranks[j]);
        fill_column(n, d, f.vertices, B.entries.data() + j * (d + 1));
    }
    return B;
}

}  // namespace hypertree
