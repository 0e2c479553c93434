#pragma once

#include <cstdint>
#include <vector>

namespace sstdma {

// Symmetric interference relation over nodes 0..N-1. adjacency[i] holds the
// extended neighborhood of node i: every node whose concurrent transmission
// can collide with i's, sorted ascending, never containing i itself.
struct InterferenceGraph {
    int node_count = 0;
    std::vector<std::vector<int>> adjacency;

    int degree(int i) const { return static_cast<int>(adjacency[i].size()); }
    bool has_edge(int i, int j) const;

    // Throws std::invalid_argument on asymmetry, self-loops, bad indices,
    // or an adjacency list whose size disagrees with node_count.
    void validate() const;

    // Builds a graph from raw adjacency lists and validates it. Input lists
    // may be unsorted; duplicates within a list are rejected.
    static InterferenceGraph from_adjacency(std::vector<std::vector<int>> lists);

    // Builds a graph from an undirected edge list. Duplicate edges are
    // deduplicated (the count of dropped duplicates is reported through
    // *dropped_duplicates when non-null); self-loops and out-of-range
    // endpoints throw.
    static InterferenceGraph from_edges(int node_count,
                                        const std::vector<std::pair<int, int>>& edges,
                                        int* dropped_duplicates = nullptr);

    // Canonical edge list, i < j, sorted.
    std::vector<std::pair<int, int>> edge_list() const;
};

struct GraphStats {
    std::int64_t edge_count = 0;  // A
    double mean_degree = 0.0;     // 2A/N
    int max_degree = 0;
};

GraphStats graph_stats(const InterferenceGraph& g);

// Random geometric graph: n_nodes points i.i.d. uniform on the unit square
// (no wraparound), an edge where the Euclidean distance is strictly below
// range. Deterministic for a fixed seed.
InterferenceGraph generate_rgg(int n_nodes, double range, std::uint64_t seed);

}  // namespace sstdma
