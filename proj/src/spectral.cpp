// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hypertree/combinatorics.hpp"
#include "hypertree/rng.hpp"
#include "hypertree/sampler.hpp"

namespace hypertree {

double SpectralMeasure::total_weight() const {
    double w = 0.0;
    for (const Atom& a : atoms) w += a.weight;
    return w;
}

double SpectralMeasure::zero_weight() const {
    double w = 0.0;
    for (const Atom& a : atoms)
        if (a.location == 0.0) w += a.weight;
    return w;
}

std::vector<double> laplacian_spectrum(const SignedBoundaryMatrix& B_S) {
    const std::uint64_t r = binom(B_S.n - 1, B_S.d);
    if (B_S.cols() != r)
        throw input_error("laplacian_spectrum: expected a hypertree restriction with C(n-1,d) columns");
    const Eigen::MatrixXd G = B_S.gram_int().cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw internal_error("laplacian_spectrum: eigensolver failed to converge");

    // The Gram spectrum is the nonzero Laplacian spectrum; the rest of the
    // C(n,d) Laplacian eigenvalues are exact zeros, C(n-1,d-1) of them.
    const std::uint64_t zeros = binom(B_S.n - 1, B_S.d - 1);
    std::vector<double> spectrum;
    spectrum.reserve(static_cast<std::size_t>(zeros + r));
    spectrum.assign(static_cast<std::size_t>(zeros), 0.0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam <= kKernelThreshold)
            throw internal_error(
                "laplacian_spectrum: positive block contains a near-zero eigenvalue " +
                std::to_string(lam) + "; input is not a hypertree restriction");
        spectrum.push_back(lam);
    }
    std::sort(spectrum.begin(), spectrum.end());
    return spectrum;
}

SpectralMeasure empirical_measure(const std::vector<double>& spectrum, int n, int d) {
    const std::uint64_t total = binom(n, d);
    if (spectrum.size() != total)
        throw input_error("empirical_measure: spectrum size must be C(n,d)");
    const double w = 1.0 / static_cast<double>(total);
    std::uint64_t zeros = 0;
    SpectralMeasure mu;
    mu.atoms.reserve(spectrum.size() + 1);
    mu.atoms.push_back({0.0, 0.0});  // zero atom slot, weight filled below
    for (double lam : spectrum) {
        if (lam <= kKernelThreshold) {
            if (lam < 0.0 && lam < -kKernelThreshold)
                throw input_error("empirical_measure: negative eigenvalue in spectrum");
            ++zeros;
        } else {
            mu.atoms.push_back({lam, w});
        }
    }
    if (zeros != binom(n - 1, d - 1))
        throw internal_error("empirical_measure: Laplacian kernel has dimension " +
                             std::to_string(zeros) + ", expected C(n-1,d-1) = " +
                             std::to_string(binom(n - 1, d - 1)));
    mu.atoms[0].weight = static_cast<double>(zeros) * w;
    std::sort(mu.atoms.begin(), mu.atoms.end(),
              [](const SpectralMeasure::Atom& a, const SpectralMeasure::Atom& b) {
                  return a.location < b.location;
              });
    return mu;
}

double log_integral(const SpectralMeasure& mu) {
    // Contributions sorted by |log t| so small terms accumulate first.
    std::vector<double> terms;
    terms.reserve(mu.atoms.size());
    for (const auto& atom : mu.atoms) {
        if (atom.location == 0.0) continue;
        if (atom.location <= kKernelThreshold)
            throw input_error("log_integral: positive atom at numerical zero");
        terms.push_back(atom.weight * std::log(atom.location));
    }
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
}

double ell_gamma(double t, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw input_error("ell_gamma: require 0 < gamma < 1");
    if (t <= 0.0) return 0.0;
    if (t <= gamma) return (t / gamma) * std::log(gamma);
    if (t <= 1.0) return std::log(t);
    return 0.0;
}

double truncated_log_lower(const SpectralMeasure& mu, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw input_error("truncated_log_lower: require 0 < gamma < 1");
    double sum = 0.0;
    for (const auto& atom : mu.atoms) sum += atom.weight * ell_gamma(atom.location, gamma);
    return sum;
}

std::string measure_to_csv(const SpectralMeasure& mu) {
    std::string out = "location,weight\n";
    char buffer[96];
    for (const auto& atom : mu.atoms) {
        std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g\n", atom.location, atom.weight);
        out += buffer;
    }
    return out;
}

double h_omega(double t, double omega) {
    if (!(omega > std::numbers::e)) throw input_error("h_omega: require omega > e");
    if (t <= 1.0) return 0.0;
    if (t <= omega) return std::log(t);
    return std::log(omega);
}

double truncated_log_upper(const SpectralMeasure& mu, double omega) {
    if (!(omega > std::numbers::e))
        throw input_error("truncated_log_upper: require omega > e");
    double sum = 0.0;
    for (const auto& atom : mu.atoms) sum += atom.weight * h_omega(atom.location, omega);
    return sum;
}

double elementary_symmetric(const std::vector<double>& values, std::size_t k) {
    if (k > values.size()) return 0.0;
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    std::size_t seen = 0;
    for (double v : values) {
        ++seen;
        const std::size_t top = std::min(k, seen);
        for (std::size_t j = top; j >= 1; --j) e[j] += v * e[j - 1];
    }
    return e[k];
}

namespace {

// log(e_k) of positive values given their logs, via the same DP with
// log-sum-exp updates; immune to overflow.
double log_elementary_symmetric(const std::vector<double>& log_values, std::size_t k) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> le(k + 1, kNegInf);
    le[0] = 0.0;
    std::size_t seen = 0;
    for (double lv : log_values) {
        ++seen;
        const std::size_t top = std::min(k, seen);
        for (std::size_t j = top; j >= 1; --j) {
            const double add = lv + le[j - 1];
            if (add == kNegInf) continue;
            if (le[j] == kNegInf) {
                le[j] = add;
            } else {
                const double hi = std::max(le[j], add);
                le[j] = hi + std::log1p(std::exp(std::min(le[j], add) - hi));
            }
        }
    }
    return le[k];
}

}  // namespace

double inverse_symmetric_poly(const std::vector<double>& eigenvalues, std::size_t k) {
    if (k > eigenvalues.size())
        throw input_error("inverse_symmetric_poly: k exceeds the number of eigenvalues");
    std::vector<double> inv;
    inv.reserve(eigenvalues.size());
    for (double lam : eigenvalues) {
        if (!(lam > 0.0)) throw input_error("inverse_symmetric_poly: nonpositive eigenvalue");
        inv.push_back(1.0 / lam);
    }
    std::sort(inv.begin(), inv.end(), std::greater<>());
    if (k == 0) return 1.0;

    // Direct pass, abandoned for log-space if any partial threatens overflow.
    const double ceiling = 1e280;
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    std::size_t seen = 0;
    bool overflow = false;
    for (double v : inv) {
        ++seen;
        const std::size_t top = std::min(k, seen);
        for (std::size_t j = top; j >= 1; --j) {
            e[j] += v * e[j - 1];
            if (std::abs(e[j]) > ceiling) overflow = true;
        }
        if (overflow) break;
    }
    if (!overflow) return e[k];

    std::vector<double> logs;
    logs.reserve(inv.size());
    for (double v : inv) logs.push_back(std::log(v));
    return std::exp(log_elementary_symmetric(logs, k));
}

void RunningMoments::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double total = na + nb;
    mean += delta * (nb / total);
    m2 += other.m2 + delta * delta * (na * nb / total);
    count += other.count;
}

double RunningMoments::variance() const {
    if (count < 2) return 0.0;
    return m2 / static_cast<double>(count - 1);
}

double RunningMoments::std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count));
}

MomentBoundReport inverse_moment_check(int n, int d, std::uint64_t k,
                                   std::uint64_t num_samples, std::uint64_t master_seed) {
    const std::uint64_t m = binom(n, d + 1);
    const std::uint64_t r = binom(n - 1, d);
    if (k < 1 || k > r) throw input_error("inverse_moment_check: require 1 <= k <= C(n-1,d)");
    if (num_samples == 0) throw input_error("inverse_moment_check: require at least one sample");

    const RowMajorMatrixXd U = orthonormal_cobasis(n, d);
    RunningMoments moments;
    for (std::uint64_t s = 0; s < num_samples; ++s) {
        const std::uint64_t seed = derive_seed(master_seed, n, s);
        const HypertreeSample sample = sample_hypertree(U, n, d, seed);
        const SignedBoundaryMatrix B = boundary_matrix_for_faces(n, d, sample.faces);
        const std::vector<double> spectrum = laplacian_spectrum(B);
        std::vector<double> minor_eigs;  // kernel-minor spectrum = Gram / n
        minor_eigs.reserve(static_cast<std::size_t>(r));
        for (double lam : spectrum)
            if (lam > kKernelThreshold) minor_eigs.push_back(lam / static_cast<double>(n));
        moments.add(inverse_symmetric_poly(minor_eigs, static_cast<std::size_t>(k)));
    }

    MomentBoundReport report;
    report.n = n;
    report.d = d;
    report.k = k;
    report.num_samples = num_samples;
    report.mean = moments.mean;
    report.std_error = moments.std_error();
    const BigInt binom_bound = binom_mpz(m - r + k, k) * binom_mpz(r, k);
    report.binom_bound = mpz_get_d(binom_bound.get_mpz_t());
    const double kk = static_cast<double>(k);
    report.crude_bound = std::pow(std::numbers::e * std::numbers::e *
                                      static_cast<double>(m) * static_cast<double>(r) /
                                      (kk * kk),
                                  kk);
    report.within_bound = report.mean - 2.0 * report.std_error <= report.binom_bound;
    return report;
}

NearZeroReport near_zero_condition(const std::vector<double>& kernel_minor_spectrum,
                                   int n, int d) {
    std::vector<double> eigs = kernel_minor_spectrum;
    std::sort(eigs.begin(), eigs.end());
    if (!eigs.empty() && !(eigs.front() > 0.0))
        throw input_error("near_zero_condition: eigenvalues must be positive");
    const double faces = static_cast<double>(binom(n, d));

    NearZeroReport report;
    report.satisfied.assign(eigs.size() + 1, 1);
    double lhs = 0.0;
    for (std::size_t k = 1; k <= eigs.size(); ++k) {
        lhs += std::log(1.0 / (static_cast<double>(n) * eigs[k - 1]));
        const double kk = static_cast<double>(k);
        const double rhs = static_cast<double>(n) +
                           2.0 * kk * std::log(std::numbers::e * faces / kk);
        if (lhs > rhs) {
            report.satisfied[k] = 0;
            ++report.num_violations;
        }
    }
    report.any_violation = report.num_violations > 0;
    report.violating_fraction =
        static_cast<double>(report.num_violations) / static_cast<double>(eigs.size() + 1);
    return report;
}

}  // namespace hypertree
