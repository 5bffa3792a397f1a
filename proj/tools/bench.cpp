// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Timing comparison of the serial reference paths against the OpenMP
// parallel kernels. Both paths produce identical results by construction;
// this binary only reports wall times.

#include <cstdint>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "hypertree/boundary.hpp"
#include "hypertree/combinatorics.hpp"
#include "hypertree/enumerate.hpp"
#include "hypertree/exact_linalg.hpp"
#include "hypertree/homology.hpp"
#include "hypertree/kernel.hpp"
#include "hypertree/local_stats.hpp"
#include "hypertree/rng.hpp"
#include "hypertree/sampler.hpp"

namespace {

using hypertree::ExecPolicy;

void print_row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-34s %10.3f %10.3f %8.2fx\n", name, serial_s * 1e3, parallel_s * 1e3,
                parallel_s > 0.0 ? serial_s / parallel_s : 0.0);
}

template <typename Fn>
double time_once(Fn&& fn) {
    const double start = omp_get_wtime();
    fn();
    return omp_get_wtime() - start;
}

void bench_sampler(int n, int d, int reps) {
    const hypertree::RowMajorMatrixXd cobasis = hypertree::orthonormal_cobasis(n, d);
    const auto run = [&](ExecPolicy policy) {
        for (int i = 0; i < reps; ++i)
            hypertree::sample_hypertree(cobasis, n, d, hypertree::derive_seed(7, n, i), policy);
    };
    const double serial = time_once([&] { run(ExecPolicy::Serial); });
    const double parallel = time_once([&] { run(ExecPolicy::Parallel); });
    char name[64];
    std::snprintf(name, sizeof(name), "sampler n=%d d=%d x%d", n, d, reps);
    print_row(name, serial, parallel);
}

void bench_gram(int n, int d, int reps) {
    const hypertree::RowMajorMatrixXd cobasis = hypertree::orthonormal_cobasis(n, d);
    std::vector<hypertree::SignedBoundaryMatrix> inputs;
    for (int i = 0; i < reps; ++i) {
        const hypertree::HypertreeSample sample =
            hypertree::sample_hypertree(cobasis, n, d, hypertree::derive_seed(11, n, i));
        inputs.push_back(hypertree::boundary_matrix_for_faces(n, d, sample.faces));
    }
    const auto run = [&](ExecPolicy policy) {
        for (const auto& B : inputs) hypertree::gram_determinant(B, policy);
    };
    const double serial = time_once([&] { run(ExecPolicy::Serial); });
    const double parallel = time_once([&] { run(ExecPolicy::Parallel); });
    char name[64];
    std::snprintf(name, sizeof(name), "gram determinant n=%d d=%d x%d", n, d, reps);
    print_row(name, serial, parallel);
}

void bench_enumerate(int n, int d) {
    const double serial =
        time_once([&] { hypertree::enumerate_hypertrees(n, d, ExecPolicy::Serial); });
    const double parallel =
        time_once([&] { hypertree::enumerate_hypertrees(n, d, ExecPolicy::Parallel); });
    char name[64];
    std::snprintf(name, sizeof(name), "enumerate n=%d d=%d", n, d);
    print_row(name, serial, parallel);
}

void bench_census(int n, int d, int radius) {
    const hypertree::HypertreeSample sample = hypertree::sample_hypertree(n, d, 13);
    const hypertree::IncidenceGraph graph = hypertree::incidence_graph(sample);
    const double serial =
        time_once([&] { hypertree::neighborhood_census(graph, radius, ExecPolicy::Serial); });
    const double parallel =
        time_once([&] { hypertree::neighborhood_census(graph, radius, ExecPolicy::Parallel); });
    char name[64];
    std::snprintf(name, sizeof(name), "census n=%d d=%d radius=%d", n, d, radius);
    print_row(name, serial, parallel);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-34s %10s %10s %9s\n", "benchmark", "serial_ms", "omp_ms", "speedup");

    bench_sampler(24, 2, 10);
    bench_gram(24, 2, 10);
    bench_gram(12, 3, 5);
    bench_enumerate(6, 2);
    bench_census(24, 2, 2);
    bench_census(30, 2, 3);

    return 0;
}
