// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "hypertree/combinatorics.hpp"
#include "hypertree/rng.hpp"

namespace hypertree {

namespace {

// Negative row masses beyond this are logic bugs, not rounding.
constexpr double kMassTolerance = 1e-12;
// A pick whose mass falls below this cannot be certified independent.
constexpr double kCertifyThreshold = 1e-9;
// Basis maintenance cadence (exact mass refresh; re-orthonormalization when
// the window is narrow or the masses have drifted).
constexpr int kMaintenanceStride = 64;
constexpr int kCheapQrWidth = 128;
constexpr double kDriftTolerance = 1e-9;

// Squared norms of the active window [c0, r) of the alive rows.
void refresh_masses(const RowMajorMatrixXd& W, const std::vector<std::uint32_t>& alive,
                    std::ptrdiff_t c0, std::vector<double>& mass, bool parallel) {
    const std::ptrdiff_t r = W.cols();
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(alive.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t a = 0; a < m; ++a) {
        const double* row = W.data() + static_cast<std::ptrdiff_t>(alive[a]) * r;
        double s = 0.0;
        for (std::ptrdiff_t c = c0; c < r; ++c) s += row[c] * row[c];
        mass[alive[a]] = s;
    }
}

// Replaces the active window of the alive rows with an orthonormal basis of
// its own column space (thin QR). Dead rows carry only negligible residual
// mass and are never read again, so they are left untouched.
void reorthonormalize(RowMajorMatrixXd& W, const std::vector<std::uint32_t>& alive,
                      std::ptrdiff_t c0) {
    const std::ptrdiff_t r = W.cols();
    const std::ptrdiff_t k = r - c0;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(alive.size());
    if (k <= 0 || m < k) return;
    Eigen::MatrixXd Wa(m, k);
    for (std::ptrdiff_t a = 0; a < m; ++a)
        Wa.row(a) = Eigen::Map<const Eigen::RowVectorXd>(
            W.data() + static_cast<std::ptrdiff_t>(alive[a]) * r + c0, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Wa);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
    for (std::ptrdiff_t a = 0; a < m; ++a)
        Eigen::Map<Eigen::RowVectorXd>(
            W.data() + static_cast<std::ptrdiff_t>(alive[a]) * r + c0, k) = Q.row(a);
}

}  // namespace

HypertreeSample sample_hypertree(const RowMajorMatrixXd& cobasis, int n, int d,
                                 std::uint64_t seed, ExecPolicy policy) {
    const std::ptrdiff_t N = cobasis.rows();
    const std::ptrdiff_t r = cobasis.cols();
    if (N != static_cast<std::ptrdiff_t>(binom(n, d + 1)) ||
        r != static_cast<std::ptrdiff_t>(binom(n - 1, d)))
        throw input_error("sample_hypertree: cobasis shape does not match (n, d)");
    const bool parallel = policy == ExecPolicy::Parallel;

    RowMajorMatrixXd W = cobasis;
    std::vector<std::uint32_t> alive(static_cast<std::size_t>(N));
    std::iota(alive.begin(), alive.end(), 0u);
    std::vector<double> mass(static_cast<std::size_t>(N));
    refresh_masses(W, alive, 0, mass, parallel);

    CounterRng rng(seed);
    HypertreeSample sample;
    sample.n = n;
    sample.d = d;
    sample.seed = seed;
    sample.faces.reserve(static_cast<std::size_t>(r));
    sample.min_selection_mass = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(r));

    for (std::ptrdiff_t t = 0; t < r; ++t) {
        const std::ptrdiff_t c0 = t;        // first active column

        // Select an alive row with probability proportional to its mass.
        double total = 0.0;
        for (std::uint32_t i : alive) {
            const double s = mass[i];
            if (s < -kMassTolerance)
                throw internal_error("sample_hypertree: negative selection mass " +
                                     std::to_string(s) + " at step " + std::to_string(t));
            total += std::max(s, 0.0);
        }
        if (!(total > 0.0))
            throw internal_error("sample_hypertree: selection mass vanished at step " +
                                 std::to_string(t));
        const double target = rng.next_double() * total;
        double cum = 0.0;
        std::size_t pick_pos = alive.size();
        for (std::size_t a = 0; a < alive.size(); ++a) {
            cum += std::max(mass[alive[a]], 0.0);
            if (cum > target) {
                pick_pos = a;
                break;
            }
        }
        if (pick_pos == alive.size()) {     // fp shortfall: take last positive row
            for (std::size_t a = alive.size(); a-- > 0;) {
                if (mass[alive[a]] > 0.0) {
                    pick_pos = a;
                    break;
                }
            }
            if (pick_pos == alive.size())
                throw internal_error("sample_hypertree: no selectable row at step " +
                                     std::to_string(t));
        }
        const std::uint32_t j = alive[pick_pos];

        double* wj = W.data() + static_cast<std::ptrdiff_t>(j) * r;
        double norm2 = 0.0;
        for (std::ptrdiff_t c = c0; c < r; ++c) norm2 += wj[c] * wj[c];
        if (norm2 < kCertifyThreshold)
            throw internal_error("sample_hypertree: pick mass " + std::to_string(norm2) +
                                 " below the independence certificate threshold");
        sample.min_selection_mass = std::min(sample.min_selection_mass, norm2);
        sample.faces.push_back(j);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick_pos));
        if (t == r - 1) break;              // nothing left to condition on

        // Householder vector sending the picked direction to +/- e_{c0}.
        const double inv_norm = 1.0 / std::sqrt(norm2);
        for (std::ptrdiff_t c = c0; c < r; ++c) u[c] = wj[c] * inv_norm;
        const double alpha = u[c0];
        u[c0] += (alpha >= 0.0) ? 1.0 : -1.0;
        const double inv_unorm = 1.0 / std::sqrt(2.0 * (1.0 + std::abs(alpha)));
        for (std::ptrdiff_t c = c0; c < r; ++c) u[c] *= inv_unorm;

        // Reflect the alive rows and retire column c0; each row's mass loses
        // exactly its new c0 component. Rows are independent, so the update
        // is bitwise identical for any thread count.
        const double* uc = u.data();
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(alive.size());
#pragma omp parallel for schedule(static) if (parallel)
        for (std::ptrdiff_t a = 0; a < m; ++a) {
            double* row = W.data() + static_cast<std::ptrdiff_t>(alive[a]) * r;
            double y = 0.0;
            for (std::ptrdiff_t c = c0; c < r; ++c) y += row[c] * uc[c];
            y *= 2.0;
            for (std::ptrdiff_t c = c0; c < r; ++c) row[c] -= y * uc[c];
            mass[alive[a]] -= row[c0] * row[c0];
        }

        // Periodic maintenance: exact masses, drift check, cheap QR when the
        // window is narrow, full QR only if drift says the basis decayed.
        if ((t + 1) % kMaintenanceStride == 0 && t + 1 < r) {
            const std::ptrdiff_t width = r - (t + 1);
            refresh_masses(W, alive, t + 1, mass, parallel);
            double sum = 0.0;
            for (std::uint32_t i : alive) sum += std::max(mass[i], 0.0);
            const double drift = std::abs(sum - static_cast<double>(width));
            if (width <= kCheapQrWidth || drift > kDriftTolerance * static_cast<double>(width)) {
                reorthonormalize(W, alive, t + 1);
                refresh_masses(W, alive, t + 1, mass, parallel);
            }
        }
    }

    std::sort(sample.faces.begin(), sample.faces.end());
    return sample;
}

HypertreeSample sample_hypertree(int n, int d, std::uint64_t seed, ExecPolicy policy) {
    return sample_hypertree(orthonormal_cobasis(n, d), n, d, seed, policy);
}

}  // namespace hypertree
