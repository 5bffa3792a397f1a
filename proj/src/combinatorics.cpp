// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/combinatorics.hpp"

#include <algorithm>
#include <sstream>

namespace hypertree {

namespace {

// Pascal table with saturation; entries above 2^64-1 are clamped to UINT64_MAX
// and rejected by binom().
constexpr int kTableN = 130;

struct BinomTable {
    std::vector<std::uint64_t> c;
    BinomTable() : c(static_cast<std::size_t>(kTableN) * kTableN, 0) {
        for (int n = 0; n < kTableN; ++n) {
            at(n, 0) = 1;
            for (int k = 1; k <= n; ++k) {
                std::uint64_t a = at(n - 1, k - 1);
                std::uint64_t b = (k <= n - 1) ? at(n - 1, k) : 0;
                std::uint64_t s = a + b;
                if (s < a) s = UINT64_MAX;  // overflow clamp
                at(n, k) = s;
            }
        }
    }
    std::uint64_t& at(int n, int k) { return c[static_cast<std::size_t>(n) * kTableN + k]; }
    std::uint64_t get(int n, int k) const {
        if (k < 0 || k > n) return 0;
        return c[static_cast<std::size_t>(n) * kTableN + k];
    }
};

const BinomTable& table() {
    static const BinomTable t;
    return t;
}

}  // namespace

std::uint64_t binom(int n, int k) {
    if (n < 0) throw input_error("binom: negative n");
    if (k < 0 || k > n) return 0;
    if (n >= kTableN) throw input_error("binom: n out of table range, use binom_mpz");
    std::uint64_t v = table().get(n, k);
    if (v == UINT64_MAX) throw input_error("binom: value exceeds 64 bits, use binom_mpz");
    return v;
}

mpz_class binom_mpz(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

bool binom_at_most(int n, int k, std::uint64_t limit) {
    if (k < 0 || k > n) return true;
    if (n < kTableN) {
        std::uint64_t v = table().get(n, k);
        return v != UINT64_MAX && v <= limit;
    }
    mpz_class v = binom_mpz(static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return v <= mpz_class(static_cast<unsigned long>(limit));
}

std::uint64_t combination_rank(int n, const std::vector<int>& verts) {
    const int k = static_cast<int>(verts.size());
    std::uint64_t rank = 0;
    int prev = 0;
    for (int i = 0; i < k; ++i) {
        const int ci = verts[i];
        if (ci <= prev || ci > n) throw input_error("combination_rank: vertices not strictly increasing in [1,n]");
        // count combinations whose i-th element is smaller than ci
        for (int v = prev + 1; v < ci; ++v) rank += binom(n - v, k - 1 - i);
        prev = ci;
    }
    return rank;
}

std::vector<int> combination_unrank(int n, int k, std::uint64_t rank) {
    if (k < 0 || k > n) throw input_error("combination_unrank: k out of range");
    std::vector<int> verts(k);
    int v = 1;
    for (int i = 0; i < k; ++i) {
        while (true) {
            std::uint64_t block = binom(n - v, k - 1 - i);
            if (rank < block) break;
            rank -= block;
            ++v;
            if (v > n) throw input_error("combination_unrank: rank out of range");
        }
        verts[i] = v++;
    }
    if (rank != 0) throw input_error("combination_unrank: rank out of range");
    return verts;
}

bool next_combination(std::vector<int>& idx, int n_items) {
    const int k = static_cast<int>(idx.size());
    int i = k - 1;
    while (i >= 0 && idx[i] == n_items - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

void combination_from_rank(std::vector<int>& idx, int n_items, int k, std::uint64_t rank) {
    std::vector<int> verts = combination_unrank(n_items, k, rank);
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = verts[i] - 1;
}

Face::Face(int ambient_n, std::vector<int> verts) : n(ambient_n), vertices(std::move(verts)) {
    if (n < 1) throw input_error("Face: ambient n must be positive");
    int prev = 0;
    for (int v : vertices) {
        if (v <= prev || v > n) throw input_error("Face: vertices must be strictly increasing in [1,n]");
        prev = v;
    }
}

std::uint64_t face_rank(const Face& face) {
    return combination_rank(face.n, face.vertices);
}

Face face_unrank(int n, int k, std::uint64_t rank) {
    return Face(n, combination_unrank(n, k, rank));
}

std::string format_face(const Face& face) {
    std::string out;
    for (std::size_t i = 0; i < face.vertices.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(face.vertices[i]);
    }
    return out;
}

Face parse_face(int n, const std::string& text) {
    std::vector<int> verts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw input_error("parse_face: empty vertex token");
        std::size_t used = 0;
        int vertex = 0;
        try {
            vertex = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw input_error("parse_face: invalid vertex token '" + tok + "'");
        }
        if (used != tok.size())
            throw input_error("parse_face: invalid vertex token '" + tok + "'");
        verts.push_back(vertex);
    }
    return Face(n, std::move(verts));
}

std::string format_face_set(int n, int d, const std::vector<std::uint64_t>& face_ranks) {
    std::string out;
    for (std::size_t i = 0; i < face_ranks.size(); ++i) {
        if (i) out += '\n';
        out += format_face(face_unrank(n, d + 1, face_ranks[i]));
    }
    return out;
}

std::vector<std::uint64_t> parse_face_set(int n, int d, const std::string& text) {
    std::vector<std::uint64_t> ranks;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        Face f = parse_face(n, line);
        if (f.dim() != d) throw input_error("parse_face_set: face dimension mismatch");
        ranks.push_back(face_rank(f));
    }
    return ranks;
}

}  // namespace hypertree
