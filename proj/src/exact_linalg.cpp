// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/exact_linalg.hpp"

#include <cmath>
#include <cstdlib>

#include <omp.h>

namespace hypertree {

double log_big(const BigInt& x) {
    if (x <= 0) throw input_error("log_big: argument must be positive");
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

BigInt isqrt_exact(const BigInt& x) {
    if (x < 0) throw input_error("isqrt_exact: negative argument");
    BigInt root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t());
    if (rem != 0) throw internal_error("isqrt_exact: argument is not a perfect square");
    return root;
}

BigInt pow_big(unsigned long base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

BigMatrix BigMatrix::from_int(const Eigen::MatrixXi& m) {
    BigMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out.at(i, j) = m(i, j);
    return out;
}

BigInt bareiss_determinant(BigMatrix m, ExecPolicy policy) {
    if (m.rows != m.cols) throw input_error("bareiss_determinant: matrix must be square");
    const int n = m.rows;
    if (n == 0) return BigInt(1);

    BigInt prev(1);
    int sign = 1;
    const bool par = (policy == ExecPolicy::Parallel);

    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i) {
                if (m.at(i, k) != 0) {
                    p = i;
                    break;
                }
            }
            if (p < 0) return BigInt(0);
            for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }

        // a_ij <- (a_ij * a_kk - a_ik * a_kj) / prev, exactly divisible.
#pragma omp parallel if (par)
        {
            mpz_t t;
            mpz_init(t);
#pragma omp for schedule(static)
            for (int i = k + 1; i < n; ++i) {
                const mpz_srcptr piv = m.at(k, k).get_mpz_t();
                const mpz_srcptr aik = m.at(i, k).get_mpz_t();
                for (int j = k + 1; j < n; ++j) {
                    mpz_ptr aij = m.at(i, j).get_mpz_t();
                    mpz_mul(t, aij, piv);
                    mpz_submul(t, aik, m.at(k, j).get_mpz_t());
                    mpz_divexact(aij, t, prev.get_mpz_t());
                }
                m.at(i, k) = 0;
            }
            mpz_clear(t);
        }
        prev = m.at(k, k);
    }
    BigInt det = m.at(n - 1, n - 1);
    if (sign < 0) det = -det;
    return det;
}

namespace {

// Fraction-free rank over int64 with overflow watch. Returns -1 if any
// intermediate would leave the safe range, signalling a retry in big ints.
int rank_i64(std::vector<std::int64_t> a, int rows, int cols) {
    constexpr std::int64_t kSafe = (std::int64_t{1} << 62);
    auto at = [&](int i, int j) -> std::int64_t& { return a[static_cast<std::size_t>(i) * cols + j]; };

    std::int64_t prev = 1;
    int rank = 0;
    for (int t = 0; t < std::min(rows, cols); ++t) {
        int pi = -1, pj = -1;
        for (int j = t; j < cols && pi < 0; ++j) {
            for (int i = t; i < rows; ++i) {
                if (at(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
            }
        }
        if (pi < 0) break;
        if (pi != t)
            for (int j = t; j < cols; ++j) std::swap(at(t, j), at(pi, j));
        if (pj != t)
            for (int i = 0; i < rows; ++i) std::swap(at(i, t), at(i, pj));

        const std::int64_t piv = at(t, t);
        for (int i = t + 1; i < rows; ++i) {
            const std::int64_t ait = at(i, t);
            for (int j = t + 1; j < cols; ++j) {
                __int128 v = static_cast<__int128>(at(i, j)) * piv -
                             static_cast<__int128>(ait) * at(t, j);
                v /= prev;
                if (v >= kSafe || v <= -kSafe) return -1;
                at(i, j) = static_cast<std::int64_t>(v);
            }
            at(i, t) = 0;
        }
        prev = piv;
        ++rank;
    }
    return rank;
}

int rank_big(BigMatrix m) {
    BigInt prev(1);
    int rank = 0;
    const int rows = m.rows, cols = m.cols;
    for (int t = 0; t < std::min(rows, cols); ++t) {
        int pi = -1, pj = -1;
        for (int j = t; j < cols && pi < 0; ++j) {
            for (int i = t; i < rows; ++i) {
                if (m.at(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
            }
        }
        if (pi < 0) break;
        if (pi != t)
            for (int j = t; j < cols; ++j) std::swap(m.at(t, j), m.at(pi, j));
        if (pj != t)
            for (int i = 0; i < rows; ++i) std::swap(m.at(i, t), m.at(i, pj));

        mpz_t tmp;
        mpz_init(tmp);
        for (int i = t + 1; i < rows; ++i) {
            for (int j = t + 1; j < cols; ++j) {
                mpz_mul(tmp, m.at(i, j).get_mpz_t(), m.at(t, t).get_mpz_t());
                mpz_submul(tmp, m.at(i, t).get_mpz_t(), m.at(t, j).get_mpz_t());
                mpz_divexact(m.at(i, j).get_mpz_t(), tmp, prev.get_mpz_t());
            }
            m.at(i, t) = 0;
        }
        mpz_clear(tmp);
        prev = m.at(t, t);
        ++rank;
    }
    return rank;
}

}  // namespace

int rational_rank(const Eigen::MatrixXi& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    std::vector<std::int64_t> a(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[static_cast<std::size_t>(i) * cols + j] = m(i, j);
    int r = rank_i64(std::move(a), rows, cols);
    if (r >= 0) return r;
    return rank_big(BigMatrix::from_int(m));
}

bool has_full_column_rank(const Eigen::MatrixXi& m) {
    return rational_rank(m) == static_cast<int>(m.cols());
}

namespace {

// q = nearest integer to a/b, remainder in [-|b|/2, |b|/2].
void nearest_div(BigInt& q, const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    BigInt b_abs = abs(b);
    if (r * 2 > b_abs) q += (b > 0) ? 1 : -1;
}

// Reduce x into the symmetric residue range (-modulus/2, modulus/2].
void reduce_sym(BigInt& x, const BigInt& modulus) {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    if (x * 2 > modulus) x -= modulus;
}

// Sort positive values into a divisibility chain with (gcd, lcm) swaps; each
// swap is a unimodular operation on the underlying diagonal matrix.
void condition_chain(std::vector<BigInt>& v) {
    for (int i = 0; i + 1 < static_cast<int>(v.size()); ++i) {
        if (!mpz_divisible_p(v[i + 1].get_mpz_t(), v[i].get_mpz_t())) {
            BigInt g = gcd(v[i], v[i + 1]);
            BigInt l = v[i] / g * v[i + 1];
            v[i] = g;
            v[i + 1] = l;
            i = std::max(-1, i - 2);
        }
    }
}

}  // namespace

std::vector<BigInt> smith_normal_form(BigMatrix m, const BigInt& modulus, int known_rank) {
    const int rows = m.rows, cols = m.cols;
    if (modulus < 0) throw input_error("smith_normal_form: modulus must be nonnegative");
    const bool mod = modulus > 0;
    if (mod && known_rank < 0)
        throw input_error("smith_normal_form: modular runs need the true rank");
    if (known_rank > std::min(rows, cols))
        throw internal_error("smith_normal_form: promised rank exceeds the dimensions");

    if (mod)
        for (BigInt& x : m.a) reduce_sym(x, modulus);

    std::vector<BigInt> raw;
    BigInt q;

    int t = 0;
    while (t < rows && t < cols) {
        // Minimal nonzero entry of the trailing submatrix becomes the pivot.
        int pi = -1, pj = -1;
        for (int i = t; i < rows; ++i) {
            for (int j = t; j < cols; ++j) {
                if (m.at(i, j) == 0) continue;
                if (pi < 0 || mpz_cmpabs(m.at(i, j).get_mpz_t(), m.at(pi, pj).get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi < 0) break;
        if (pi != t)
            for (int j = 0; j < cols; ++j) std::swap(m.at(t, j), m.at(pi, j));
        if (pj != t)
            for (int i = 0; i < rows; ++i) std::swap(m.at(i, t), m.at(i, pj));

        bool clean = false;
        while (!clean) {
            clean = true;
            // Clear the pivot column.
            for (int i = t + 1; i < rows; ++i) {
                if (m.at(i, t) == 0) continue;
                nearest_div(q, m.at(i, t), m.at(t, t));
                if (q != 0)
                    for (int j = t; j < cols; ++j) {
                        mpz_submul(m.at(i, j).get_mpz_t(), q.get_mpz_t(), m.at(t, j).get_mpz_t());
                        if (mod) reduce_sym(m.at(i, j), modulus);
                    }
                if (m.at(i, t) != 0) {
                    // Remainder is a smaller pivot; promote it.
                    for (int j = t; j < cols; ++j) std::swap(m.at(t, j), m.at(i, j));
                    clean = false;
                }
            }
            // Clear the pivot row.
            for (int j = t + 1; j < cols; ++j) {
                if (m.at(t, j) == 0) continue;
                nearest_div(q, m.at(t, j), m.at(t, t));
                if (q != 0)
                    for (int i = t; i < rows; ++i) {
                        mpz_submul(m.at(i, j).get_mpz_t(), q.get_mpz_t(), m.at(i, t).get_mpz_t());
                        if (mod) reduce_sym(m.at(i, j), modulus);
                    }
                if (m.at(t, j) != 0) {
                    for (int i = t; i < rows; ++i) std::swap(m.at(i, t), m.at(i, j));
                    clean = false;
                }
            }
            if (!clean || mod) continue;

            // Divisibility sweep: the pivot must divide every remaining entry.
            // Modular runs skip it; their chain is rebuilt from gcds with the
            // modulus below, where representative divisibility proves nothing.
            bool fixed = false;
            for (int i = t + 1; i < rows && !fixed; ++i) {
                for (int j = t + 1; j < cols && !fixed; ++j) {
                    if (m.at(i, j) == 0) continue;
                    if (!mpz_divisible_p(m.at(i, j).get_mpz_t(), m.at(t, t).get_mpz_t())) {
                        for (int c = t; c < cols; ++c) m.at(t, c) += m.at(i, c);
                        clean = false;
                        fixed = true;
                    }
                }
            }
        }
        raw.push_back(abs(m.at(t, t)));
        ++t;
    }

    if (!mod) {
        if (known_rank >= 0 && static_cast<int>(raw.size()) != known_rank)
            throw internal_error("smith_normal_form: rank disagrees with the caller's promise");
        // The sweep above already yields a divisibility chain; keep a repair
        // pass for safety.
        condition_chain(raw);
        return raw;
    }

    // Modular reconciliation. The elimination may stop early (a trailing
    // block whose true entries are nonzero multiples of the modulus reduces
    // to zero) or run past the true rank (representatives of a rationally
    // dependent block need not vanish); neither observation is trusted.
    // Instead: row/column operations preserve gcd(d_k, modulus) for every
    // determinantal divisor d_k, and entrywise reduction changes any minor
    // by a multiple of the modulus, so for the final conditioned diagonal
    // c_1 | c_2 | ... the true d_k is gcd(c_1 * ... * c_k, modulus).
    while (static_cast<int>(raw.size()) < known_rank) raw.emplace_back(0);
    for (BigInt& c : raw) c = gcd(c, modulus);  // gcd(0, modulus) = modulus
    condition_chain(raw);

    std::vector<BigInt> factors;
    factors.reserve(static_cast<std::size_t>(known_rank));
    BigInt running(1), next;
    for (int k = 0; k < known_rank; ++k) {
        next = gcd(running * raw[static_cast<std::size_t>(k)], modulus);
        factors.push_back(next / running);
        running = next;
    }
    for (std::size_t k = 0; k + 1 < factors.size(); ++k) {
        if (!mpz_divisible_p(factors[k + 1].get_mpz_t(), factors[k].get_mpz_t()))
            throw internal_error(
                "smith_normal_form: factor chain broke; the modulus is not a "
                "multiple of the largest determinantal divisor");
    }
    return factors;
}

std::vector<BigInt> smith_normal_form_sparse(int rows, int cols,
                                             const std::vector<SparseEntry>& entries,
                                             const BigInt& modulus, int known_rank) {
    if (modulus < 0) throw input_error("smith_normal_form_sparse: modulus must be nonnegative");
    if (modulus > 0 && known_rank < 0)
        throw input_error("smith_normal_form_sparse: modular runs need the true rank");
    if (rows <= 0 || cols <= 0) {
        if (known_rank > 0)
            throw internal_error("smith_normal_form_sparse: promised rank on an empty matrix");
        return {};
    }
    // Unit-pivot updates are validated in __int128 before committing, so the
    // ceiling only has to keep products of two committed values representable.
    constexpr std::int64_t kValueCeiling = std::int64_t{1} << 62;

    std::vector<std::int64_t> w(static_cast<std::size_t>(rows) * cols, 0);
    auto at = [&](int i, int j) -> std::int64_t& {
        return w[static_cast<std::size_t>(i) * cols + j];
    };
    std::vector<int> row_nnz(rows, 0), col_nnz(cols, 0);
    for (const SparseEntry& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw input_error("smith_normal_form_sparse: entry out of range");
        if (e.value == 0) continue;
        std::int64_t& cell = at(e.row, e.col);
        if (cell == 0) {
            ++row_nnz[e.row];
            ++col_nnz[e.col];
        }
        cell += e.value;  // merge duplicates
        if (cell == 0) {
            --row_nnz[e.row];
            --col_nnz[e.col];
        }
    }

    std::vector<char> row_alive(rows, 1), col_alive(cols, 1);
    std::size_t unit_factors = 0;
    bool overflowed = false;

    while (!overflowed) {
        // Cheapest unit pivot by Markowitz fill estimate.
        int pr = -1, pc = -1;
        long best = -1;
        for (int i = 0; i < rows; ++i) {
            if (!row_alive[i] || row_nnz[i] == 0) continue;
            for (int j = 0; j < cols; ++j) {
                if (!col_alive[j]) continue;
                const std::int64_t v = at(i, j);
                if (v != 1 && v != -1) continue;
                const long cost =
                    static_cast<long>(row_nnz[i] - 1) * static_cast<long>(col_nnz[j] - 1);
                if (best < 0 || cost < best) {
                    best = cost;
                    pr = i;
                    pc = j;
                    if (best == 0) break;
                }
            }
            if (best == 0) break;
        }
        if (pr < 0) break;

        // Clear the pivot column with exact row operations, then retire the
        // pivot row and column (clearing the pivot row afterwards would be
        // column operations that only touch the retired row). Each row
        // operation is validated in full before committing, so an overflow
        // abort never leaves a half-applied (non-unimodular) update.
        const std::int64_t pivot = at(pr, pc);
        std::vector<std::int64_t> scratch(static_cast<std::size_t>(cols));
        for (int i = 0; i < rows && !overflowed; ++i) {
            if (!row_alive[i] || i == pr) continue;
            const std::int64_t head = at(i, pc);
            if (head == 0) continue;
            const std::int64_t factor = head * pivot;  // head / pivot
            for (int j = 0; j < cols; ++j) {
                if (!col_alive[j]) continue;
                const __int128 next128 = static_cast<__int128>(at(i, j)) -
                                         static_cast<__int128>(factor) * at(pr, j);
                if (next128 > kValueCeiling || next128 < -kValueCeiling) {
                    overflowed = true;
                    break;
                }
                scratch[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(next128);
            }
            if (overflowed) break;
            for (int j = 0; j < cols; ++j) {
                if (!col_alive[j]) continue;
                const std::int64_t old = at(i, j);
                const std::int64_t next = scratch[static_cast<std::size_t>(j)];
                if (old == 0 && next != 0) {
                    ++row_nnz[i];
                    ++col_nnz[j];
                } else if (old != 0 && next == 0) {
                    --row_nnz[i];
                    --col_nnz[j];
                }
                at(i, j) = next;
            }
        }
        if (overflowed) break;
        for (int j = 0; j < cols; ++j) {
            if (col_alive[j] && at(pr, j) != 0) --col_nnz[j];
        }
        for (int i = 0; i < rows; ++i) {
            if (row_alive[i] && at(i, pc) != 0) --row_nnz[i];
        }
        row_alive[pr] = 0;
        col_alive[pc] = 0;
        ++unit_factors;
    }

    // Residual core (or, after an overflow, the whole remaining matrix) goes
    // through the dense routine. Unit pivots each consumed one unit of rank,
    // so the caller's rank promise shrinks accordingly.
    std::vector<int> live_rows, live_cols;
    for (int i = 0; i < rows; ++i)
        if (row_alive[i] && row_nnz[i] > 0) live_rows.push_back(i);
    for (int j = 0; j < cols; ++j)
        if (col_alive[j] && col_nnz[j] > 0) live_cols.push_back(j);

    int core_rank = -1;
    if (known_rank >= 0) {
        core_rank = known_rank - static_cast<int>(unit_factors);
        if (core_rank < 0)
            throw internal_error("smith_normal_form_sparse: rank exceeds the caller's promise");
    }

    std::vector<BigInt> factors(unit_factors, BigInt(1));
    if (!live_rows.empty() && !live_cols.empty()) {
        BigMatrix core(static_cast<int>(live_rows.size()), static_cast<int>(live_cols.size()));
        for (std::size_t i = 0; i < live_rows.size(); ++i)
            for (std::size_t j = 0; j < live_cols.size(); ++j)
                core.at(static_cast<int>(i), static_cast<int>(j)) =
                    static_cast<long>(at(live_rows[i], live_cols[j]));
        for (BigInt& f : smith_normal_form(std::move(core), modulus, core_rank))
            factors.push_back(std::move(f));
    } else if (core_rank > 0) {
        throw internal_error("smith_normal_form_sparse: rank falls short of the caller's promise");
    }
    return factors;
}

}  // namespace hypertree
