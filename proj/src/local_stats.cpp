// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "hypertree/local_stats.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <omp.h>

#include "hypertree/boundary.hpp"
#include "hypertree/combinatorics.hpp"

namespace hypertree {

IncidenceGraph incidence_graph(const HypertreeSample& sample) {
    const std::uint64_t r = binom(sample.n - 1, sample.d);
    if (sample.faces.size() != r)
        throw input_error("incidence_graph: sample must carry C(n-1,d) faces");
    const SignedBoundaryMatrix B =
        boundary_matrix_for_faces(sample.n, sample.d, sample.faces);

    IncidenceGraph graph;
    graph.n = sample.n;
    graph.d = sample.d;
    graph.faces = sample.faces;
    graph.face_ridges.reserve(B.entries.size());
    graph.ridge_faces.resize(B.rows);
    for (std::size_t j = 0; j < B.cols(); ++j) {
        const auto* col = B.column(j);
        for (int i = 0; i <= sample.d; ++i) {
            graph.face_ridges.push_back(col[i].row);
            graph.ridge_faces[col[i].row].push_back(static_cast<std::uint32_t>(j));
        }
    }
    return graph;
}

RootedNeighborhood extract_neighborhood(const IncidenceGraph& graph,
                                        std::uint64_t root_ridge, int radius) {
    if (root_ridge >= graph.num_ridges())
        throw input_error("extract_neighborhood: root ridge out of range");
    if (radius < 0 || radius > kMaxCensusRadius)
        throw input_error("extract_neighborhood: radius outside [0, " +
                          std::to_string(kMaxCensusRadius) + "]");
    const int arity = graph.d + 1;

    // Global vertex ids: ridges are [0, M), faces are [M, M + |S|).
    const std::uint64_t M = graph.num_ridges();
    auto neighbors_of = [&](std::uint64_t v, auto&& visit) {
        if (v < M) {
            for (std::uint32_t f : graph.ridge_faces[v]) visit(M + f);
        } else {
            const std::size_t f = static_cast<std::size_t>(v - M);
            for (int i = 0; i < arity; ++i)
                visit(static_cast<std::uint64_t>(graph.face_ridges[f * arity + i]));
        }
    };

    // BFS up to the radius; discovery order defines local ids (root = 0).
    std::map<std::uint64_t, int> local;
    std::vector<std::uint64_t> order;
    std::queue<std::pair<std::uint64_t, int>> frontier;
    local.emplace(root_ridge, 0);
    order.push_back(root_ridge);
    frontier.emplace(root_ridge, 0);
    while (!frontier.empty()) {
        const auto [v, dist] = frontier.front();
        frontier.pop();
        if (dist == radius) continue;
        neighbors_of(v, [&](std::uint64_t w) {
            if (local.emplace(w, static_cast<int>(order.size())).second) {
                order.push_back(w);
                frontier.emplace(w, dist + 1);
            }
        });
    }

    // Induced edges: both endpoints collected. The graph is bipartite, so
    // scanning face-side vertices visits every edge once.
    RootedNeighborhood nbhd;
    nbhd.root = 0;
    nbhd.adj.resize(order.size());
    for (std::size_t id = 0; id < order.size(); ++id) {
        const std::uint64_t v = order[id];
        if (v < M) continue;
        neighbors_of(v, [&](std::uint64_t w) {
            auto it = local.find(w);
            if (it == local.end()) return;
            nbhd.adj[id].push_back(it->second);
            nbhd.adj[it->second].push_back(static_cast<int>(id));
        });
    }
    return nbhd;
}

namespace {

// --- AHU canonical code for rooted trees -----------------------------------

std::string ahu_code(const std::vector<std::vector<int>>& adj, int v, int parent) {
    std::vector<std::string> children;
    for (int w : adj[v]) {
        if (w == parent) continue;
        children.push_back(ahu_code(adj, w, v));
    }
    std::sort(children.begin(), children.end());
    std::string code = "(";
    for (const std::string& c : children) code += c;
    code += ")";
    return code;
}

// --- refinement + individualization for general rooted graphs --------------

// One refinement pass: colors become ranks of (color, sorted neighbor
// colors) signatures; repeats until the number of classes is stable.
void refine_colors(const std::vector<std::vector<int>>& adj, std::vector<int>& color) {
    const std::size_t n = adj.size();
    std::vector<std::pair<std::vector<int>, int>> sig(n);
    while (true) {
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<int> s;
            s.reserve(adj[v].size() + 1);
            s.push_back(color[v]);
            for (int w : adj[v]) s.push_back(color[w]);
            std::sort(s.begin() + 1, s.end());
            sig[v] = {std::move(s), static_cast<int>(v)};
        }
        std::vector<std::pair<std::vector<int>, int>> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        int classes = 0;
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0 && sorted[i].first != sorted[i - 1].first) ++classes;
            next[static_cast<std::size_t>(sorted[i].second)] = classes;
        }
        bool stable = true;
        int old_classes = *std::max_element(color.begin(), color.end());
        if (classes != old_classes) stable = false;
        color = std::move(next);
        if (stable) break;
    }
}

std::string emit_code(const std::vector<std::vector<int>>& adj,
                      const std::vector<int>& color) {
    const std::size_t n = adj.size();
    std::vector<int> label(n);
    for (std::size_t v = 0; v < n; ++v) label[v] = color[v];
    std::vector<std::pair<int, int>> edges;
    for (std::size_t v = 0; v < n; ++v)
        for (int w : adj[v])
            if (label[v] < label[w]) edges.emplace_back(label[v], label[w]);
    std::sort(edges.begin(), edges.end());
    std::string code = "v=" + std::to_string(n) + ";e=";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0) code += ",";
        code += std::to_string(edges[i].first) + "-" + std::to_string(edges[i].second);
    }
    return code;
}

constexpr int kBacktrackBudget = 100000;

std::string canonical_search(const std::vector<std::vector<int>>& adj,
                             std::vector<int> color, int& budget) {
    if (--budget < 0)
        throw internal_error("canonical_code: individualization budget exhausted");
    refine_colors(adj, color);
    const std::size_t n = adj.size();

    // Find the smallest non-singleton color class.
    const int num_classes = *std::max_element(color.begin(), color.end()) + 1;
    std::vector<int> size(static_cast<std::size_t>(num_classes), 0);
    for (int c : color) ++size[static_cast<std::size_t>(c)];
    int target = -1;
    for (int c = 0; c < num_classes; ++c) {
        if (size[static_cast<std::size_t>(c)] > 1) {
            target = c;
            break;
        }
    }
    if (target < 0) return emit_code(adj, color);

    // Individualize each member in turn; the canonical form is the smallest
    // code over all branches.
    std::string best;
    for (std::size_t v = 0; v < n; ++v) {
        if (color[v] != target) continue;
        std::vector<int> branch(n);
        for (std::size_t u = 0; u < n; ++u) {
            branch[u] = 2 * color[u] + ((color[u] == target && u != v) ? 1 : 0);
        }
        std::string code = canonical_search(adj, std::move(branch), budget);
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

}  // namespace

std::string canonical_code(const std::vector<std::vector<int>>& adj, int root) {
    const std::size_t n = adj.size();
    if (n == 0 || root < 0 || static_cast<std::size_t>(root) >= n)
        throw input_error("canonical_code: root outside the graph");

    // Connectivity check (and edge count for tree detection).
    std::vector<char> seen(n, 0);
    std::vector<int> stack{root};
    seen[static_cast<std::size_t>(root)] = 1;
    std::size_t reached = 1, half_edges = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        half_edges += adj[static_cast<std::size_t>(v)].size();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != n) throw input_error("canonical_code: graph is disconnected");

    if (half_edges == 2 * (n - 1)) return ahu_code(adj, root, -1);

    // Root gets its own color; everything else starts equal.
    std::vector<int> color(n, 1);
    color[static_cast<std::size_t>(root)] = 0;
    int budget = kBacktrackBudget;
    return canonical_search(adj, std::move(color), budget);
}

NeighborhoodCensus neighborhood_census(const IncidenceGraph& graph, int radius,
                                       ExecPolicy policy) {
    if (radius < 0 || radius > kMaxCensusRadius)
        throw input_error("neighborhood_census: radius outside [0, " +
                          std::to_string(kMaxCensusRadius) + "]");
    const std::uint64_t M = graph.num_ridges();
    const int workers =
        policy == ExecPolicy::Parallel ? std::max(1, omp_get_max_threads()) : 1;
    std::vector<std::map<std::string, std::uint64_t>> tallies(workers);

#pragma omp parallel for schedule(static, 1) num_threads(workers)
    for (int t = 0; t < workers; ++t) {
        const std::uint64_t lo = M * static_cast<std::uint64_t>(t) / workers;
        const std::uint64_t hi = M * (static_cast<std::uint64_t>(t) + 1) / workers;
        for (std::uint64_t root = lo; root < hi; ++root) {
            const RootedNeighborhood nbhd = extract_neighborhood(graph, root, radius);
            ++tallies[t][canonical_code(nbhd)];
        }
    }

    NeighborhoodCensus census;
    census.radius = radius;
    census.total = M;
    for (const auto& tally : tallies)
        for (const auto& [code, count] : tally) census.counts[code] += count;
    return census;
}

double census_distance(const NeighborhoodCensus& a, const NeighborhoodCensus& b) {
    if (a.radius != b.radius)
        throw input_error("census_distance: censuses have different radii");
    if (a.total == 0 || b.total == 0)
        throw input_error("census_distance: empty census");
    double distance = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        double fa = 0.0, fb = 0.0;
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            fa = static_cast<double>(ia->second) / static_cast<double>(a.total);
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            fb = static_cast<double>(ib->second) / static_cast<double>(b.total);
            ++ib;
        } else {
            fa = static_cast<double>(ia->second) / static_cast<double>(a.total);
            fb = static_cast<double>(ib->second) / static_cast<double>(b.total);
            ++ia;
            ++ib;
        }
        distance += std::abs(fa - fb);
    }
    return distance / 2.0;
}

}  // namespace hypertree
