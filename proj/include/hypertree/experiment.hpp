// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_EXPERIMENT_HPP_
#define HYPERTREE_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hypertree/exact_linalg.hpp"
#include "hypertree/local_stats.hpp"
#include "hypertree/spectral.hpp"

namespace hypertree {

// Optional per-sample diagnostics; everything off by default.
struct DiagnosticsConfig {
    bool smith_cross_check = false;  // exact invariant factors, checked against the Gram route
    bool near_zero = false;          // prefix condition on the kernel-minor spectrum
    bool export_spectra = false;     // one (location, weight) CSV per sample under output_dir
    int census_radius = -1;          // >= 0: radius for the census campaign
    std::vector<double> gammas;      // lower-truncation thresholds, each in (0,1)
    std::vector<double> omegas;      // upper-truncation thresholds, each > e
};

struct ExperimentConfig {
    int d = 2;
    std::vector<int> n_values;             // deduplicated and sorted ascending on validate
    std::uint64_t samples_per_n = 50;
    std::uint64_t master_seed = 1;
    bool allow_d1 = false;                 // d = 1 (graph spanning trees) needs an override
    DiagnosticsConfig checks;
    std::string output_dir;                // empty: compute only, write nothing
};

// Parse a JSON config object. Unknown keys are rejected; missing keys keep
// their defaults. Shape: {"d":2,"n_values":[10,15],"samples_per_n":50,
// "master_seed":1,"allow_d1":false,"output_dir":"out","checks":{
// "smith_cross_check":true,"near_zero":true,"census_radius":2,
// "gammas":[0.5],"omegas":[10,100]}}.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Normalizes (sorts/dedupes n_values) and throws input_error on anything the
// run would refuse: bad d, empty or too-small n, parameters out of range, or
// any n whose face count C(n,d+1) exceeds the kernel envelope. Runs before
// any sampling work.
void validate_config(ExperimentConfig& config);

// One upper truncation of the spectral log-integral and its a priori bound.
struct TruncationGap {
    double omega = 0.0;
    double integral = 0.0;  // integral of h_omega against the sample measure
    double gap = 0.0;       // integral of 1(t>1) log t minus `integral`; >= 0
    double bound = 0.0;     // (d+1) log(omega) / omega
    bool within = false;    // gap <= bound
};

struct LowerTruncation {
    double gamma = 0.0;
    double integral = 0.0;  // integral of ell_gamma against the sample measure
};

// Everything measured for one sampled hypertree. On failure only n, d,
// sample_index, seed, and `error` are meaningful.
struct SampleRecord {
    int n = 0;
    int d = 0;
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;

    std::vector<std::uint64_t> faces;  // sorted lex ranks
    BigInt torsion_order{0};
    BigInt gram_det{0};
    std::vector<BigInt> invariant_factors;  // filled when the Smith cross-check ran

    double log_torsion_normalized = 0.0;  // log(order) / C(n,d), exact route
    double spectral_route_value = 0.0;    // same quantity via the spectral identity
    double route_discrepancy = 0.0;       // |difference| of the two routes

    std::vector<LowerTruncation> lower_truncations;
    std::vector<TruncationGap> upper_truncations;

    bool near_zero_checked = false;
    NearZeroReport near_zero;

    double wall_ms = 0.0;
};

// Two routes to the same normalized log-torsion must agree to this tolerance.
inline constexpr double kRouteTolerance = 1e-6;

struct PerNSummary {
    int n = 0;
    std::uint64_t num_samples = 0;  // successful samples
    std::uint64_t num_failed = 0;
    RunningMoments normalized_log_torsion;
    std::uint64_t trivial_torsion_count = 0;  // samples with |H| = 1
    double max_route_discrepancy = 0.0;
    double max_normalized_log_torsion = 0.0;
};

// Growth-rate estimate for log|H_{d-1}| / C(n,d): the per-n means and the
// point estimate at the largest n with a bootstrap standard error. The limit
// constant lies in [log((d+1)/e)/2, log(d+1)/2], and every individual sample
// obeys the hard upper bound log(d+1)/2.
struct GrowthEstimate {
    int d = 0;
    std::vector<PerNSummary> per_n;  // ascending n
    int largest_n = 0;
    double c_hat = 0.0;
    double c_hat_std_error = 0.0;  // bootstrap over samples at the largest n
    double lower_bound = 0.0;      // log((d+1)/e) / 2
    double upper_bound = 0.0;      // log(d+1) / 2
    double max_normalized_log_torsion = 0.0;
    bool upper_bound_ok = false;  // every sample's normalized value <= upper_bound
    double max_route_discrepancy = 0.0;
    bool routes_agree = false;  // max discrepancy <= kRouteTolerance
};

inline constexpr std::uint64_t kBootstrapReplicates = 1000;

// Summarize finished records (failed ones are counted but excluded from the
// statistics). Requires successful samples at two or more distinct n.
GrowthEstimate estimate_growth(int d, const std::vector<SampleRecord>& records,
                               std::uint64_t bootstrap_seed);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<SampleRecord> records;  // ordered by (n, sample_index)
    GrowthEstimate estimate;            // only when >= 2 distinct n succeeded
    bool estimate_available = false;
};

// Sample samples_per_n hypertrees at every configured n, compute torsion by
// the exact route (plus any enabled diagnostics), and summarize. Per-sample
// seeds derive from (master_seed, n, sample_index), so results do not depend
// on the worker count; per-sample failures are recorded and the run
// continues. With a nonempty output_dir, writes samples.jsonl, summary.csv,
// estimate.json, and (with export_spectra) one spectrum CSV per sample; the
// JSONL stream is byte-deterministic.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Neighborhood-census campaign: draws samples_per_n hypertrees at every
// configured n (same per-sample seed derivation as run_experiment) and pools
// their radius-census_radius censuses. Torsion is not computed, so this stays
// cheap at n far beyond the exact-arithmetic comfort zone. Requires
// checks.census_radius >= 0. With a nonempty output_dir, writes one
// census_n<k>.csv per n.
std::vector<NeighborhoodCensus> run_census_campaign(const ExperimentConfig& config);

// CSV export of one census: header "code,frequency", one quoted code per row,
// frequency = count / total. Rows follow the census's sorted code order.
std::string census_to_csv(const NeighborhoodCensus& census);

// Deterministic JSONL serialization of one record (no trailing newline).
std::string record_to_jsonl(const SampleRecord& record);

// CSV header and row formatting for summary.csv.
std::string csv_header();
std::string record_to_csv(const SampleRecord& record);

// Exhaustive check of one small (n, d): enumerate every hypertree, confirm
// that the squared torsion orders sum to n^C(n-2,d), and compare each
// hypertree's kernel minor det P[A] with its exact probability
// |H|^2 / n^C(n-2,d).
struct VerificationCase {
    int n = 0;
    int d = 0;
    bool checked = false;  // false when skipped (enumeration envelope)
    std::string skip_reason;
    std::uint64_t candidate_count = 0;
    std::uint64_t num_hypertrees = 0;
    BigInt total_weight{0};
    BigInt expected_weight{0};
    bool weight_ok = false;
    double max_probability_error = 0.0;
    bool probability_ok = false;  // max_probability_error <= 1e-8
};

inline constexpr double kProbabilityTolerance = 1e-8;

// Runs verification for every n in [d+2, max_n], skipping (with a reason)
// those beyond the enumeration envelope. d = 1 requires the override.
std::vector<VerificationCase> verify_small_cases(int d, int max_n, bool allow_d1 = false);

}  // namespace hypertree

#endif  // HYPERTREE_EXPERIMENT_HPP_
