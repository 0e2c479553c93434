#include "sstdma/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "sstdma/rng.hpp"

namespace sstdma {

bool InterferenceGraph::has_edge(int i, int j) const {
    const auto& nb = adjacency[i];
    return std::binary_search(nb.begin(), nb.end(), j);
}

void InterferenceGraph::validate() const {
    if (node_count < 1) throw std::invalid_argument("graph: node_count must be >= 1");
    if (static_cast<int>(adjacency.size()) != node_count)
        throw std::invalid_argument("graph: adjacency size != node_count");
    for (int i = 0; i < node_count; ++i) {
        const auto& nb = adjacency[i];
        if (!std::is_sorted(nb.begin(), nb.end()))
            throw std::invalid_argument("graph: adjacency lists must be sorted");
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
            throw std::invalid_argument("graph: duplicate neighbor entry at node " + std::to_string(i));
        for (int j : nb) {
            if (j < 0 || j >= node_count)
                throw std::invalid_argument("graph: neighbor index out of range at node " + std::to_string(i));
            if (j == i)
                throw std::invalid_argument("graph: self-loop at node " + std::to_string(i));
            if (!has_edge(j, i))
                throw std::invalid_argument("graph: asymmetric edge " + std::to_string(i) + "-" + std::to_string(j));
        }
    }
}

InterferenceGraph InterferenceGraph::from_adjacency(std::vector<std::vector<int>> lists) {
    InterferenceGraph g;
    g.node_count = static_cast<int>(lists.size());
    g.adjacency = std::move(lists);
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    g.validate();
    return g;
}

InterferenceGraph InterferenceGraph::from_edges(int node_count,
                                                const std::vector<std::pair<int, int>>& edges,
                                                int* dropped_duplicates) {
    if (node_count < 1) throw std::invalid_argument("graph: node_count must be >= 1");
    std::set<std::pair<int, int>> seen;
    int dups = 0;
    InterferenceGraph g;
    g.node_count = node_count;
    g.adjacency.resize(node_count);
    for (auto [i, j] : edges) {
        if (i < 0 || i >= node_count || j < 0 || j >= node_count)
            throw std::invalid_argument("graph: edge endpoint out of range: " + std::to_string(i) + "-" +
                                        std::to_string(j));
        if (i == j) throw std::invalid_argument("graph: self-loop edge at node " + std::to_string(i));
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second) {
            ++dups;
            continue;
        }
        g.adjacency[key.first].push_back(key.second);
        g.adjacency[key.second].push_back(key.first);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    if (dropped_duplicates) *dropped_duplicates = dups;
    g.validate();
    return g;
}

std::vector<std::pair<int, int>> InterferenceGraph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < node_count; ++i)
        for (int j : adjacency[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

GraphStats graph_stats(const InterferenceGraph& g) {
    GraphStats s;
    std::int64_t degree_sum = 0;
    for (int i = 0; i < g.node_count; ++i) {
        degree_sum += g.degree(i);
        s.max_degree = std::max(s.max_degree, g.degree(i));
    }
    s.edge_count = degree_sum / 2;
    s.mean_degree = static_cast<double>(degree_sum) / g.node_count;
    return s;
}

InterferenceGraph generate_rgg(int n_nodes, double range, std::uint64_t seed) {
    if (n_nodes < 1) throw std::invalid_argument("generate_rgg: n_nodes must be >= 1");
    if (!(range > 0.0) || range > std::sqrt(2.0))
        throw std::invalid_argument("generate_rgg: range must be in (0, sqrt(2)]");

    Rng rng = make_rng(seed, 0);
    std::vector<double> xs(n_nodes), ys(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        xs[i] = uniform01(rng);
        ys[i] = uniform01(rng);
    }

    InterferenceGraph g;
    g.node_count = n_nodes;
    g.adjacency.resize(n_nodes);
    const double r2 = range * range;
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = i + 1; j < n_nodes; ++j) {
            const double dx = xs[i] - xs[j];
            const double dy = ys[i] - ys[j];
            if (dx * dx + dy * dy < r2) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
        }
    }
    return g;
}

}  // namespace sstdma
