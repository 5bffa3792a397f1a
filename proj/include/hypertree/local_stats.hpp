// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_LOCAL_STATS_HPP_
#define HYPERTREE_LOCAL_STATS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypertree/exact_linalg.hpp"
#include "hypertree/sampler.hpp"

namespace hypertree {

// Bipartite containment graph of a hypertree: one side is the sample's
// d-faces, the other all C(n,d) (d-1)-faces (ridges), joined when the ridge
// is a facet of the d-face. Every d-face has degree exactly d+1.
struct IncidenceGraph {
    int n = 0;
    int d = 0;
    std::vector<std::uint64_t> faces;                     // side_d, sorted lex ranks
    std::vector<std::uint32_t> face_ridges;               // d+1 ridge ids per face
    std::vector<std::vector<std::uint32_t>> ridge_faces;  // face indices per ridge

    std::uint64_t num_ridges() const { return ridge_faces.size(); }
    std::uint64_t num_edges() const { return face_ridges.size(); }
};

IncidenceGraph incidence_graph(const HypertreeSample& sample);

// Induced subgraph on all vertices within the given distance of a ridge
// root, as plain adjacency lists with the root at vertex 0.
struct RootedNeighborhood {
    std::vector<std::vector<int>> adj;
    int root = 0;
};

inline constexpr int kMaxCensusRadius = 6;

RootedNeighborhood extract_neighborhood(const IncidenceGraph& graph,
                                        std::uint64_t root_ridge, int radius);

// Canonical string of a connected rooted graph: equal codes exactly for
// rooted-isomorphic inputs. Trees get an AHU parenthesis code; anything
// else goes through color refinement with individualization backtracking
// (exact, exponential only on pathological inputs, guarded by a budget).
std::string canonical_code(const std::vector<std::vector<int>>& adj, int root);

inline std::string canonical_code(const RootedNeighborhood& nbhd) {
    return canonical_code(nbhd.adj, nbhd.root);
}

// Distribution of radius-r rooted neighborhoods over all ridge roots.
struct NeighborhoodCensus {
    int radius = 0;
    std::uint64_t total = 0;                       // number of roots = C(n,d)
    std::map<std::string, std::uint64_t> counts;   // canonical code -> roots
};

NeighborhoodCensus neighborhood_census(const IncidenceGraph& graph, int radius,
                                       ExecPolicy policy = ExecPolicy::Parallel);

// Total variation distance between two censuses of equal radius, in [0,1].
double census_distance(const NeighborhoodCensus& a, const NeighborhoodCensus& b);

}  // namespace hypertree

#endif  // HYPERTREE_LOCAL_STATS_HPP_
