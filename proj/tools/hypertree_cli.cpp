// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: sample determinantal hypertrees, enumerate small
// cases exhaustively, verify exact identities, estimate the torsion growth
// rate, and collect local neighborhood censuses.
//
// Exit codes: 0 on success, 1 when a verification fails, 2 for invalid
// input or anything outside the supported size envelope.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "hypertree/combinatorics.hpp"
#include "hypertree/enumerate.hpp"
#include "hypertree/experiment.hpp"
#include "hypertree/local_stats.hpp"

namespace {

using hypertree::ExperimentConfig;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

struct CommonFlags {
    std::string config_path;
    int d = 0;
    std::vector<int> n_values;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> gammas;
    std::vector<double> omegas;
    int radius = -1;
    std::string out;
    bool allow_d1 = false;
    bool smith_check = false;
    bool near_zero = false;
    bool export_spectra = false;
    int workers = 0;

    CLI::Option* d_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* omega_opt = nullptr;
    CLI::Option* radius_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

// Registers the shared flag set on a subcommand. Values given on the command
// line override the JSON config.
void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    flags.d_opt = cmd->add_option("--d", flags.d, "Dimension of the sampled faces");
    flags.n_opt = cmd->add_option("--n", flags.n_values, "Number of vertices (repeatable)");
    flags.samples_opt = cmd->add_option("--samples", flags.samples, "Samples per n");
    flags.seed_opt = cmd->add_option("--seed", flags.seed, "Master seed");
    flags.gamma_opt = cmd->add_option("--gamma", flags.gammas,
                                      "Lower truncation threshold in (0,1) (repeatable)");
    flags.omega_opt =
        cmd->add_option("--omega", flags.omegas, "Upper truncation threshold > e (repeatable)");
    flags.radius_opt =
        cmd->add_option("--radius", flags.radius, "Neighborhood census radius (>= 0)");
    flags.out_opt = cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_flag("--allow-d1", flags.allow_d1, "Enable the d = 1 (spanning tree) case");
    cmd->add_flag("--smith-check", flags.smith_check,
                  "Cross-check every torsion order against the integer Smith form");
    cmd->add_flag("--near-zero", flags.near_zero,
                  "Check the near-zero eigenvalue condition per sample");
    cmd->add_flag("--export-spectra", flags.export_spectra,
                  "Write one (location, weight) CSV per sample under --out");
    cmd->add_option("--workers", flags.workers, "Worker threads (0 = library default)");
}

ExperimentConfig build_config(const CommonFlags& flags) {
    ExperimentConfig config;
    if (!flags.config_path.empty()) config = hypertree::load_config(flags.config_path);
    if (*flags.d_opt) config.d = flags.d;
    if (*flags.n_opt) config.n_values = flags.n_values;
    if (*flags.samples_opt) config.samples_per_n = flags.samples;
    if (*flags.seed_opt) config.master_seed = flags.seed;
    if (*flags.gamma_opt) config.checks.gammas = flags.gammas;
    if (*flags.omega_opt) config.checks.omegas = flags.omegas;
    if (*flags.radius_opt) config.checks.census_radius = flags.radius;
    if (*flags.out_opt) config.output_dir = flags.out;
    if (flags.allow_d1) config.allow_d1 = true;
    if (flags.smith_check) config.checks.smith_cross_check = true;
    if (flags.near_zero) config.checks.near_zero = true;
    if (flags.export_spectra) config.checks.export_spectra = true;
    if (flags.workers > 0) omp_set_num_threads(flags.workers);
    return config;
}

int require_single_n(const ExperimentConfig& config) {
    if (config.n_values.size() != 1)
        throw hypertree::input_error("this subcommand takes exactly one --n");
    return config.n_values.front();
}

int run_sample(const CommonFlags& flags) {
    ExperimentConfig config = build_config(flags);
    const hypertree::ExperimentResult result = hypertree::run_experiment(config);
    if (config.output_dir.empty())
        for (const hypertree::SampleRecord& rec : result.records)
            std::cout << hypertree::record_to_jsonl(rec) << '\n';

    std::uint64_t failed = 0;
    for (const hypertree::SampleRecord& rec : result.records)
        if (!rec.ok) ++failed;
    if (failed > 0) {
        std::cerr << failed << " of " << result.records.size() << " samples failed\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}

int run_enumerate(const CommonFlags& flags) {
    const ExperimentConfig config = build_config(flags);
    if (config.d == 1 && !config.allow_d1)
        throw hypertree::input_error("d = 1 requires --allow-d1");
    const int n = require_single_n(config);

    const hypertree::EnumerationResult result = hypertree::enumerate_hypertrees(n, config.d);
    ordered_json j;
    j["n"] = result.n;
    j["d"] = result.d;
    j["candidate_count"] = result.candidate_count.get_str();
    j["num_hypertrees"] = result.hypertrees.size();
    j["total_weight"] = result.total_weight.get_str();
    j["expected_weight"] = result.expected_weight.get_str();
    const bool weight_ok = result.total_weight == result.expected_weight;
    j["weight_ok"] = weight_ok;
    ordered_json trees = ordered_json::array();
    for (const hypertree::HypertreeRecord& tree : result.hypertrees) {
        ordered_json row;
        row["faces"] = hypertree::format_face_set(n, config.d, tree.faces);
        row["torsion"] = tree.torsion.get_str();
        row["weight"] = tree.weight.get_str();
        trees.push_back(std::move(row));
    }
    j["hypertrees"] = std::move(trees);

    if (config.output_dir.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(config.output_dir);
        if (!out)
            throw hypertree::input_error("cannot open output file '" + config.output_dir + "'");
        out << j.dump(2) << '\n';
    }
    return weight_ok ? kExitOk : kExitVerificationFailure;
}

int run_verify(const CommonFlags& flags) {
    const ExperimentConfig config = build_config(flags);
    const int max_n = require_single_n(config);
    const std::vector<hypertree::VerificationCase> cases =
        hypertree::verify_small_cases(config.d, max_n, config.allow_d1);

    bool all_ok = true;
    for (const hypertree::VerificationCase& vc : cases) {
        std::cout << "n=" << vc.n << " d=" << vc.d;
        if (!vc.checked) {
            std::cout << " SKIPPED: " << vc.skip_reason << '\n';
            continue;
        }
        const bool ok = vc.weight_ok && vc.probability_ok;
        all_ok = all_ok && ok;
        std::cout << " hypertrees=" << vc.num_hypertrees << "/" << vc.candidate_count
                  << " weight=" << vc.total_weight.get_str() << "/"
                  << vc.expected_weight.get_str() << " max_prob_err=" << vc.max_probability_error
                  << (ok ? " OK" : " FAIL") << '\n';
    }
    return all_ok ? kExitOk : kExitVerificationFailure;
}

int run_estimate(const CommonFlags& flags) {
    const ExperimentConfig config = build_config(flags);
    const hypertree::ExperimentResult result = hypertree::run_experiment(config);
    if (!result.estimate_available)
        throw hypertree::input_error("estimate needs successful samples at two or more n");

    const hypertree::GrowthEstimate& est = result.estimate;
    ordered_json j;
    j["d"] = est.d;
    j["largest_n"] = est.largest_n;
    j["c_hat"] = est.c_hat;
    j["c_hat_std_error"] = est.c_hat_std_error;
    j["lower_bound"] = est.lower_bound;
    j["upper_bound"] = est.upper_bound;
    j["upper_bound_ok"] = est.upper_bound_ok;
    j["max_route_discrepancy"] = est.max_route_discrepancy;
    j["routes_agree"] = est.routes_agree;
    ordered_json per_n = ordered_json::array();
    for (const hypertree::PerNSummary& s : est.per_n) {
        ordered_json row;
        row["n"] = s.n;
        row["num_samples"] = s.num_samples;
        row["num_failed"] = s.num_failed;
        row["mean"] = s.normalized_log_torsion.mean;
        row["std_error"] = s.normalized_log_torsion.std_error();
        row["trivial_torsion_count"] = s.trivial_torsion_count;
        per_n.push_back(std::move(row));
    }
    j["per_n"] = std::move(per_n);
    std::cout << j.dump(2) << '\n';

    return est.routes_agree && est.upper_bound_ok ? kExitOk : kExitVerificationFailure;
}

int run_census(const CommonFlags& flags) {
    ExperimentConfig config = build_config(flags);
    if (config.checks.census_radius < 0) config.checks.census_radius = 2;
    hypertree::validate_config(config);  // normalizes n_values before indexing below
    const std::vector<hypertree::NeighborhoodCensus> censuses =
        hypertree::run_census_campaign(config);

    ordered_json j = ordered_json::array();
    for (std::size_t i = 0; i < censuses.size(); ++i) {
        const hypertree::NeighborhoodCensus& census = censuses[i];
        ordered_json row;
        row["n"] = config.n_values[i];
        row["radius"] = census.radius;
        row["total"] = census.total;
        row["distinct_codes"] = census.counts.size();
        if (i + 1 < censuses.size())
            row["tv_to_next"] = hypertree::census_distance(census, censuses[i + 1]);
        j.push_back(std::move(row));
    }
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Determinantal hypertree laboratory"};
    app.require_subcommand(1);

    CommonFlags sample_flags, enumerate_flags, verify_flags, estimate_flags, census_flags;
    CLI::App* sample_cmd =
        app.add_subcommand("sample", "Draw hypertree samples and measure their torsion");
    add_common_flags(sample_cmd, sample_flags);
    CLI::App* enumerate_cmd =
        app.add_subcommand("enumerate", "Exhaustively enumerate all hypertrees at one (n, d)");
    add_common_flags(enumerate_cmd, enumerate_flags);
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Check the exact weight identity and kernel law for all n up to --n");
    add_common_flags(verify_cmd, verify_flags);
    CLI::App* estimate_cmd = app.add_subcommand(
        "estimate", "Estimate the normalized torsion growth rate across several n");
    add_common_flags(estimate_cmd, estimate_flags);
    CLI::App* census_cmd = app.add_subcommand(
        "census", "Pooled neighborhood census of sampled hypertrees at each n");
    add_common_flags(census_cmd, census_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (sample_cmd->parsed()) return run_sample(sample_flags);
        if (enumerate_cmd->parsed()) return run_enumerate(enumerate_flags);
        if (verify_cmd->parsed()) return run_verify(verify_flags);
        if (estimate_cmd->parsed()) return run_estimate(estimate_flags);
        if (census_cmd->parsed()) return run_census(census_flags);
    } catch (const hypertree::input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerificationFailure;
    }
    return kExitOk;
}
