// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypertree/boundary.hpp"
#include "hypertree/combinatorics.hpp"
#include "hypertree/enumerate.hpp"
#include "hypertree/homology.hpp"
#include "hypertree/kernel.hpp"
#include "hypertree/rng.hpp"
#include "hypertree/sampler.hpp"

namespace hypertree {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& item : obj.items())
        if (!known.contains(item.key()))
            throw input_error("config: unknown key '" + item.key() + "' in " + where);
}

DiagnosticsConfig checks_from_json(const json& obj) {
    reject_unknown_keys(obj,
                        {"smith_cross_check", "near_zero", "export_spectra", "census_radius",
                         "gammas", "omegas"},
                        "checks");
    DiagnosticsConfig checks;
    if (obj.contains("smith_cross_check")) checks.smith_cross_check = obj.at("smith_cross_check");
    if (obj.contains("near_zero")) checks.near_zero = obj.at("near_zero");
    if (obj.contains("export_spectra")) checks.export_spectra = obj.at("export_spectra");
    if (obj.contains("census_radius")) checks.census_radius = obj.at("census_radius");
    if (obj.contains("gammas")) checks.gammas = obj.at("gammas").get<std::vector<double>>();
    if (obj.contains("omegas")) checks.omegas = obj.at("omegas").get<std::vector<double>>();
    return checks;
}

// Formats a double with enough digits to round-trip; used in CSV rows.
std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string format_ms(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

// All per-sample measurements for one seed; failures are captured in the
// record rather than thrown so one bad sample cannot end the campaign.
SampleRecord measure_sample(const ExperimentConfig& config, const RowMajorMatrixXd& cobasis,
                            int n, std::uint64_t index) {
    SampleRecord rec;
    rec.n = n;
    rec.d = config.d;
    rec.sample_index = index;
    rec.seed = derive_seed(config.master_seed, n, index);

    const auto start = std::chrono::steady_clock::now();
    try {
        const HypertreeSample sample = sample_hypertree(cobasis, n, config.d, rec.seed);
        rec.faces = sample.faces;

        const SignedBoundaryMatrix B = boundary_matrix_for_faces(n, config.d, sample.faces);
        const bool want_smith = config.checks.smith_cross_check;
        const TorsionRecord torsion = torsion_record(
            B, want_smith, want_smith ? TorsionRoute::Smith : TorsionRoute::Gram);
        rec.torsion_order = torsion.order;
        rec.gram_det = torsion.gram_det;
        if (torsion.invariant_factors) rec.invariant_factors = *torsion.invariant_factors;

        const double num_ridges = static_cast<double>(binom(n, config.d));
        rec.log_torsion_normalized = log_big(rec.torsion_order) / num_ridges;

        const std::vector<double> spectrum = laplacian_spectrum(B);
        const SpectralMeasure mu = empirical_measure(spectrum, n, config.d);
        if (config.checks.export_spectra && !config.output_dir.empty()) {
            const std::filesystem::path path =
                std::filesystem::path(config.output_dir) / "spectra" /
                ("n" + std::to_string(n) + "_s" + std::to_string(index) + ".csv");
            std::ofstream out(path);
            if (!out) throw input_error("cannot open spectrum file '" + path.string() + "'");
            out << measure_to_csv(mu);
        }
        const double log_int = log_integral(mu);
        const double scale_exponent = static_cast<double>(binom(n - 2, config.d - 1));
        rec.spectral_route_value =
            0.5 * (log_int - scale_exponent * std::log(static_cast<double>(n)) / num_ridges);
        rec.route_discrepancy = std::abs(rec.log_torsion_normalized - rec.spectral_route_value);

        for (const double gamma : config.checks.gammas)
            rec.lower_truncations.push_back({gamma, truncated_log_lower(mu, gamma)});

        if (!config.checks.omegas.empty()) {
            double exact_upper = 0.0;  // integral of 1(t>1) log t
            for (const auto& atom : mu.atoms)
                if (atom.location > 1.0) exact_upper += atom.weight * std::log(atom.location);
            for (const double omega : config.checks.omegas) {
                TruncationGap gap;
                gap.omega = omega;
                gap.integral = truncated_log_upper(mu, omega);
                gap.gap = std::max(exact_upper - gap.integral, 0.0);
                gap.bound = static_cast<double>(config.d + 1) * std::log(omega) / omega;
                gap.within = gap.gap <= gap.bound;
                rec.upper_truncations.push_back(gap);
            }
        }

        if (config.checks.near_zero) {
            std::vector<double> minor_spectrum;
            minor_spectrum.reserve(spectrum.size());
            for (const double value : spectrum)
                if (value > kKernelThreshold)
                    minor_spectrum.push_back(value / static_cast<double>(n));
            rec.near_zero = near_zero_condition(minor_spectrum, n, config.d);
            rec.near_zero_checked = true;
        }

        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return rec;
}

void write_outputs(const ExperimentResult& result) {
    const std::filesystem::path dir(result.config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw input_error("cannot create output directory '" + dir.string() + "'");

    const auto open = [](const std::filesystem::path& path) {
        std::ofstream out(path);
        if (!out) throw input_error("cannot open output file '" + path.string() + "'");
        return out;
    };

    std::ofstream samples = open(dir / "samples.jsonl");
    for (const SampleRecord& rec : result.records) samples << record_to_jsonl(rec) << '\n';

    std::ofstream csv = open(dir / "summary.csv");
    csv << csv_header() << '\n';
    for (const SampleRecord& rec : result.records) csv << record_to_csv(rec) << '\n';

    if (result.estimate_available) {
        const GrowthEstimate& est = result.estimate;
        ordered_json j;
        j["d"] = est.d;
        j["per_n"] = ordered_json::array();
        for (const PerNSummary& s : est.per_n) {
            ordered_json row;
            row["n"] = s.n;
            row["num_samples"] = s.num_samples;
            row["num_failed"] = s.num_failed;
            row["mean_normalized_log_torsion"] = s.normalized_log_torsion.mean;
            row["std_error"] = s.normalized_log_torsion.std_error();
            row["trivial_torsion_count"] = s.trivial_torsion_count;
            row["max_route_discrepancy"] = s.max_route_discrepancy;
            j["per_n"].push_back(std::move(row));
        }
        j["largest_n"] = est.largest_n;
        j["c_hat"] = est.c_hat;
        j["c_hat_std_error"] = est.c_hat_std_error;
        j["lower_bound"] = est.lower_bound;
        j["upper_bound"] = est.upper_bound;
        j["max_normalized_log_torsion"] = est.max_normalized_log_torsion;
        j["upper_bound_ok"] = est.upper_bound_ok;
        j["max_route_discrepancy"] = est.max_route_discrepancy;
        j["routes_agree"] = est.routes_agree;
        std::ofstream estimate = open(dir / "estimate.json");
        estimate << j.dump(2) << '\n';
    }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw input_error("config: top level must be a JSON object");

    try {
        reject_unknown_keys(obj,
                            {"d", "n_values", "samples_per_n", "master_seed", "allow_d1",
                             "output_dir", "checks"},
                            "config");
        ExperimentConfig config;
        if (obj.contains("d")) config.d = obj.at("d");
        if (obj.contains("n_values")) config.n_values = obj.at("n_values").get<std::vector<int>>();
        if (obj.contains("samples_per_n")) config.samples_per_n = obj.at("samples_per_n");
        if (obj.contains("master_seed")) config.master_seed = obj.at("master_seed");
        if (obj.contains("allow_d1")) config.allow_d1 = obj.at("allow_d1");
        if (obj.contains("output_dir")) config.output_dir = obj.at("output_dir");
        if (obj.contains("checks")) config.checks = checks_from_json(obj.at("checks"));
        return config;
    } catch (const json::exception& e) {
        throw input_error(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

void validate_config(ExperimentConfig& config) {
    if (config.d < 1) throw input_error("d must be at least 1");
    if (config.d == 1 && !config.allow_d1)
        throw input_error("d = 1 (graph spanning trees) is disabled by default; "
                          "pass the explicit override to enable it");
    if (config.samples_per_n == 0) throw input_error("samples_per_n must be positive");
    if (config.n_values.empty()) throw input_error("at least one n is required");

    std::sort(config.n_values.begin(), config.n_values.end());
    config.n_values.erase(std::unique(config.n_values.begin(), config.n_values.end()),
                          config.n_values.end());

    for (const int n : config.n_values) {
        if (n < config.d + 2)
            throw input_error("n = " + std::to_string(n) + " is below d + 2 = " +
                              std::to_string(config.d + 2));
        if (!binom_at_most(n, config.d + 1, kMaxKernelFaces))
            throw input_error("n = " + std::to_string(n) + ", d = " + std::to_string(config.d) +
                              " has more than " + std::to_string(kMaxKernelFaces) +
                              " d-faces; out of the supported envelope");
    }

    if (config.checks.export_spectra && config.output_dir.empty())
        throw input_error("export_spectra requires an output directory");
    if (config.checks.census_radius > kMaxCensusRadius)
        throw input_error("census_radius must be at most " + std::to_string(kMaxCensusRadius));
    for (const double gamma : config.checks.gammas)
        if (!(gamma > 0.0 && gamma < 1.0))
            throw input_error("every gamma must lie strictly between 0 and 1");
    for (const double omega : config.checks.omegas)
        if (!(omega > std::numbers::e))
            throw input_error("every omega must exceed e");
}

GrowthEstimate estimate_growth(int d, const std::vector<SampleRecord>& records,
                               std::uint64_t bootstrap_seed) {
    std::map<int, PerNSummary> by_n;
    for (const SampleRecord& rec : records) {
        if (rec.d != d) throw input_error("estimate_growth: record dimension mismatch");
        PerNSummary& s = by_n[rec.n];
        s.n = rec.n;
        if (!rec.ok) {
            ++s.num_failed;
            continue;
        }
        ++s.num_samples;
        s.normalized_log_torsion.add(rec.log_torsion_normalized);
        if (rec.torsion_order == 1) ++s.trivial_torsion_count;
        s.max_route_discrepancy = std::max(s.max_route_discrepancy, rec.route_discrepancy);
        s.max_normalized_log_torsion =
            std::max(s.max_normalized_log_torsion, rec.log_torsion_normalized);
    }

    GrowthEstimate est;
    est.d = d;
    est.lower_bound = 0.5 * (std::log(static_cast<double>(d + 1)) - 1.0);
    est.upper_bound = 0.5 * std::log(static_cast<double>(d + 1));

    int distinct = 0;
    for (const auto& [n, summary] : by_n) {
        est.per_n.push_back(summary);
        if (summary.num_samples > 0) {
            ++distinct;
            est.largest_n = n;
            est.max_route_discrepancy =
                std::max(est.max_route_discrepancy, summary.max_route_discrepancy);
            est.max_normalized_log_torsion =
                std::max(est.max_normalized_log_torsion, summary.max_normalized_log_torsion);
        }
    }
    if (distinct < 2)
        throw input_error("estimate_growth: need successful samples at two or more distinct n");

    std::vector<double> values;
    for (const SampleRecord& rec : records)
        if (rec.ok && rec.n == est.largest_n) values.push_back(rec.log_torsion_normalized);

    double sum = 0.0;
    for (const double v : values) sum += v;
    est.c_hat = sum / static_cast<double>(values.size());

    CounterRng rng(derive_seed(bootstrap_seed, est.largest_n, 0x626f6f74ULL));
    RunningMoments replicate_means;
    for (std::uint64_t b = 0; b < kBootstrapReplicates; ++b) {
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            total += values[rng.next_u64() % values.size()];
        replicate_means.add(total / static_cast<double>(values.size()));
    }
    est.c_hat_std_error = std::sqrt(replicate_means.variance());

    est.upper_bound_ok = est.max_normalized_log_torsion <= est.upper_bound;
    est.routes_agree = est.max_route_discrepancy <= kRouteTolerance;
    return est;
}

ExperimentResult run_experiment(const ExperimentConfig& config_in) {
    ExperimentResult result;
    result.config = config_in;
    validate_config(result.config);
    const ExperimentConfig& config = result.config;

    if (!config.output_dir.empty()) {
        std::filesystem::path dir(config.output_dir);
        if (config.checks.export_spectra) dir /= "spectra";
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw input_error("cannot create output directory '" + dir.string() + "'");
    }

    for (const int n : config.n_values) {
        const std::size_t base = result.records.size();
        result.records.resize(base + config.samples_per_n);
        const RowMajorMatrixXd cobasis = orthonormal_cobasis(n, config.d);

        const std::int64_t count = static_cast<std::int64_t>(config.samples_per_n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i) {
            result.records[base + static_cast<std::size_t>(i)] =
                measure_sample(config, cobasis, n, static_cast<std::uint64_t>(i));
        }
    }

    std::set<int> succeeded;
    for (const SampleRecord& rec : result.records)
        if (rec.ok) succeeded.insert(rec.n);
    if (succeeded.size() >= 2) {
        result.estimate = estimate_growth(config.d, result.records, config.master_seed);
        result.estimate_available = true;
    }

    if (!config.output_dir.empty()) write_outputs(result);
    return result;
}

std::vector<NeighborhoodCensus> run_census_campaign(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    validate_config(config);
    if (config.checks.census_radius < 0)
        throw input_error("census campaign requires checks.census_radius >= 0");

    std::vector<NeighborhoodCensus> censuses;
    for (const int n : config.n_values) {
        const RowMajorMatrixXd cobasis = orthonormal_cobasis(n, config.d);
        std::vector<NeighborhoodCensus> per_sample(config.samples_per_n);
        std::vector<std::string> errors(config.samples_per_n);

        const std::int64_t count = static_cast<std::int64_t>(config.samples_per_n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                const std::uint64_t seed =
                    derive_seed(config.master_seed, n, static_cast<std::uint64_t>(i));
                const HypertreeSample sample = sample_hypertree(cobasis, n, config.d, seed);
                per_sample[static_cast<std::size_t>(i)] = neighborhood_census(
                    incidence_graph(sample), config.checks.census_radius, ExecPolicy::Serial);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        }
        for (const std::string& error : errors)
            if (!error.empty())
                throw internal_error("census: sample at n = " + std::to_string(n) +
                                     " failed: " + error);

        NeighborhoodCensus merged;
        merged.radius = config.checks.census_radius;
        for (const NeighborhoodCensus& census : per_sample) {
            merged.total += census.total;
            for (const auto& [code, c] : census.counts) merged.counts[code] += c;
        }
        censuses.push_back(std::move(merged));
    }

    if (!config.output_dir.empty()) {
        const std::filesystem::path dir(config.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw input_error("cannot create output directory '" + dir.string() + "'");
        for (std::size_t i = 0; i < censuses.size(); ++i) {
            const std::filesystem::path path =
                dir / ("census_n" + std::to_string(config.n_values[i]) + ".csv");
            std::ofstream out(path);
            if (!out) throw input_error("cannot open output file '" + path.string() + "'");
            out << census_to_csv(censuses[i]);
        }
    }
    return censuses;
}

std::string census_to_csv(const NeighborhoodCensus& census) {
    std::string out = "code,frequency\n";
    const double total = static_cast<double>(census.total);
    for (const auto& [code, count] : census.counts) {
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%.17g", static_cast<double>(count) / total);
        out += '"';
        out += code;
        out += "\",";
        out += buffer;
        out += '\n';
    }
    return out;
}

std::string record_to_jsonl(const SampleRecord& record) {
    ordered_json j;
    j["n"] = record.n;
    j["d"] = record.d;
    j["sample_index"] = record.sample_index;
    j["seed"] = record.seed;
    if (!record.ok) {
        j["error"] = record.error;
        return j.dump();
    }
    j["faces"] = format_face_set(record.n, record.d, record.faces);
    ordered_json torsion;
    torsion["order"] = record.torsion_order.get_str();
    torsion["gram_det"] = record.gram_det.get_str();
    if (!record.invariant_factors.empty()) {
        ordered_json factors = ordered_json::array();
        for (const BigInt& f : record.invariant_factors) factors.push_back(f.get_str());
        torsion["factors"] = std::move(factors);
    }
    j["torsion"] = std::move(torsion);
    return j.dump();
}

std::string csv_header() {
    return "d,n,sample_index,seed,torsion_order,log_torsion_normalized,"
           "gram_det_digits,spectral_route_value,wall_ms";
}

std::string record_to_csv(const SampleRecord& record) {
    std::ostringstream row;
    row << record.d << ',' << record.n << ',' << record.sample_index << ',' << record.seed << ',';
    if (record.ok) {
        row << record.torsion_order.get_str() << ',' << format_double(record.log_torsion_normalized)
            << ',' << record.gram_det.get_str().size() << ','
            << format_double(record.spectral_route_value) << ',';
    } else {
        row << "NA,NA,NA,NA,";
    }
    row << format_ms(record.wall_ms);
    return row.str();
}

std::vector<VerificationCase> verify_small_cases(int d, int max_n, bool allow_d1) {
    if (d < 1) throw input_error("d must be at least 1");
    if (d == 1 && !allow_d1)
        throw input_error("d = 1 (graph spanning trees) is disabled by default; "
                          "pass the explicit override to enable it");
    if (max_n < d + 2)
        throw input_error("verify: max_n must be at least d + 2 = " + std::to_string(d + 2));

    std::vector<VerificationCase> cases;
    for (int n = d + 2; n <= max_n; ++n) {
        VerificationCase vc;
        vc.n = n;
        vc.d = d;
        vc.expected_weight = pow_big(static_cast<unsigned long>(n), binom(n - 2, d));

        const std::uint64_t num_faces = binom(n, d + 1);
        const std::uint64_t rank = binom(n - 1, d);
        const BigInt candidates =
            binom_mpz(static_cast<unsigned long>(num_faces), static_cast<unsigned long>(rank));
        if (candidates > static_cast<unsigned long>(kMaxEnumerationCandidates)) {
            vc.skip_reason = "candidate count " + candidates.get_str() +
                             " exceeds the enumeration envelope of " +
                             std::to_string(kMaxEnumerationCandidates);
            cases.push_back(std::move(vc));
            continue;
        }

        const EnumerationResult enumeration = enumerate_hypertrees(n, d);
        vc.candidate_count = enumeration.candidate_count.get_ui();
        vc.num_hypertrees = enumeration.hypertrees.size();
        vc.total_weight = enumeration.total_weight;
        vc.weight_ok = enumeration.total_weight == enumeration.expected_weight;

        const ProjectionKernel kernel = projection_kernel(n, d);
        double max_error = 0.0;
        for (const HypertreeRecord& tree : enumeration.hypertrees) {
            const double minor = subset_probability(kernel, tree.faces);
            mpq_class exact(tree.weight, vc.expected_weight);
            exact.canonicalize();
            max_error = std::max(max_error, std::abs(minor - exact.get_d()));
        }
        vc.max_probability_error = max_error;
        vc.probability_ok = max_error <= kProbabilityTolerance;
        vc.checked = true;
        cases.push_back(std::move(vc));
    }
    return cases;
}

}  // namespace hypertree
