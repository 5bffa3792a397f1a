// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_SPECTRAL_HPP_
#define HYPERTREE_SPECTRAL_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hypertree/boundary.hpp"
#include "hypertree/exact_linalg.hpp"

namespace hypertree {

// Purely atomic probability measure on [0, inf): the empirical spectral
// measure of a hypertree Laplacian. The zero atom (if present) is stored
// once with its aggregate weight; positive atoms keep one entry per
// eigenvalue, ascending.
struct SpectralMeasure {
    struct Atom {
        double location = 0.0;
        double weight = 0.0;
    };
    std::vector<Atom> atoms;

    double total_weight() const;
    double zero_weight() const;  // weight of the atom at location 0
};

// Eigenvalues below this are the Laplacian kernel; a positive atom at or
// below it is a hard error (the kernel dimension is known exactly).
inline constexpr double kKernelThreshold = 1e-8;

// All C(n,d) eigenvalues of the up-Laplacian B_S B_S^T of a hypertree
// restriction B_S, ascending: C(n-1,d-1) exact zeros (appended analytically)
// followed by the C(n-1,d) positive eigenvalues of the Gram matrix
// B_S^T B_S, whose nonzero spectrum is the same. Errors if the positive
// block dips below the kernel threshold.
std::vector<double> laplacian_spectrum(const SignedBoundaryMatrix& B_S);

// Uniform measure on a Laplacian spectrum: weight 1/C(n,d) per eigenvalue,
// zero eigenvalues merged into a single atom that must have multiplicity
// exactly C(n-1,d-1).
SpectralMeasure empirical_measure(const std::vector<double>& spectrum, int n, int d);

// Integral of 1(t>0) log t. Atoms are accumulated in ascending |log t| order
// to limit cancellation. A positive atom at or below the kernel threshold is
// an error.
double log_integral(const SpectralMeasure& mu);

// Lower truncation: 0 for t<=0, (t/gamma) log gamma on (0,gamma], log t on
// (gamma,1], 0 for t>1. Continuous, bounded by |log gamma|.
double ell_gamma(double t, double gamma);
// Integral of ell_gamma against mu. Requires 0 < gamma < 1.
double truncated_log_lower(const SpectralMeasure& mu, double gamma);

// CSV export of a measure: header "location,weight", one atom per row in
// stored (ascending) order, both columns with round-trip precision.
std::string measure_to_csv(const SpectralMeasure& mu);

// Upper truncation: 0 for t<=1, log t on (1,omega], log omega for t>omega.
double h_omega(double t, double omega);
// Integral of h_omega against mu. Requires omega > e. The gap to the exact
// integral of 1(t>1) log t is at most (d+1) log(omega)/omega.
double truncated_log_upper(const SpectralMeasure& mu, double omega);

// Elementary symmetric polynomial e_k(values) by the stable product
// expansion (one DP pass, values taken in the given order).
double elementary_symmetric(const std::vector<double>& values, std::size_t k);

// e_k of the inverses of positive eigenvalues, expanding in descending
// magnitude of 1/lambda; falls back to a log-space recurrence when the
// direct pass threatens overflow. Errors on nonpositive input.
double inverse_symmetric_poly(const std::vector<double>& eigenvalues, std::size_t k);

// Order-independent mergeable mean/variance summary (Chan et al. update).
struct RunningMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const RunningMoments& other);
    double variance() const;   // unbiased; 0 when count < 2
    double std_error() const;  // sqrt(variance / count); 0 when count < 2
};

// Monte Carlo check of the inverse-moment bound
// E e_k(lambda^{-1}) <= C(m-r+k,k) C(r,k) <= (e^2 m r / k^2)^k,
// with m = C(n,d+1), r = C(n-1,d) and lambda the kernel-minor spectrum of a
// sampled hypertree.
struct MomentBoundReport {
    int n = 0;
    int d = 0;
    std::uint64_t k = 0;
    std::uint64_t num_samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double binom_bound = 0.0;  // C(m-r+k,k) * C(r,k)
    double crude_bound = 0.0;  // (e^2 m r / k^2)^k
    bool within_bound = false;  // mean - 2 std_error <= binom_bound
};
MomentBoundReport inverse_moment_check(int n, int d, std::uint64_t k,
                                   std::uint64_t num_samples, std::uint64_t master_seed);

// Near-zero eigenvalue condition: with lambda_1 <= ... <= lambda_r the
// kernel-minor spectrum, every prefix must satisfy
//   sum_{i<=k} log(1/(n lambda_i)) <= n + 2k log(e C(n,d) / k),
// the k = 0 prefix counting as satisfied.
struct NearZeroReport {
    std::vector<std::uint8_t> satisfied;  // indexed by k = 0..r
    std::size_t num_violations = 0;
    bool any_violation = false;
    double violating_fraction = 0.0;  // num_violations / (r + 1)
};
NearZeroReport near_zero_condition(const std::vector<double>& kernel_minor_spectrum,
                                   int n, int d);

}  // namespace hypertree

#endif  // HYPERTREE_SPECTRAL_HPP_
