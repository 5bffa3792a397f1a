// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hypertree {

/// Thrown on invalid arguments or violated resource envelopes.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an internal consistency check fails (indicates a bug).
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// C(n,k) in 64 bits. Throws input_error on overflow.
std::uint64_t binom(int n, int k);

/// C(n,k) as an exact big integer (any size).
mpz_class binom_mpz(unsigned long n, unsigned long k);

/// True iff C(n,k) <= limit, evaluated without overflow.
bool binom_at_most(int n, int k, std::uint64_t limit);

// ---------------------------------------------------------------------------
// Lexicographic indexing of k-subsets of [1..n].
//
// Subsets are sorted vertex lists; ranks are 0-based and order-preserving,
// so {1,..,k} has rank 0 and {n-k+1,..,n} has rank C(n,k)-1.
// ---------------------------------------------------------------------------

std::uint64_t combination_rank(int n, const std::vector<int>& verts);
std::vector<int> combination_unrank(int n, int k, std::uint64_t rank);

/// Advances a 0-based index combination to its lex successor.
/// Returns false when idx was the last combination of size k in [0..n_items).
bool next_combination(std::vector<int>& idx, int n_items);

/// Fills idx with the combination of the given lex rank (0-based indices).
void combination_from_rank(std::vector<int>& idx, int n_items, int k, std::uint64_t rank);

// ---------------------------------------------------------------------------
// Faces
// ---------------------------------------------------------------------------

/// A (k-1)-dimensional simplex on the vertex set [1..n], stored as a strictly
/// increasing vertex list.
struct Face {
    int n = 0;
    std::vector<int> vertices;

    Face() = default;
    Face(int ambient_n, std::vector<int> verts);

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator==(const Face&) const = default;
};

/// Lexicographic rank of a face among all faces of the same dimension.
std::uint64_t face_rank(const Face& face);

/// Inverse of face_rank.
Face face_unrank(int n, int k, std::uint64_t rank);

/// "1,2,4" style formatting used by all face-set persistence.
std::string format_face(const Face& face);
Face parse_face(int n, const std::string& text);

/// Newline-delimited face list, one face per line.
std::string format_face_set(int n, int d, const std::vector<std::uint64_t>& face_ranks);
std::vector<std::uint64_t> parse_face_set(int n, int d, const std::string& text);

}  // namespace hypertree
