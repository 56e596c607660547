#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace cfiwl {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>; // stored with first < second

// Vertex-colored undirected graph, optionally carrying an equivalence
// relation on the vertices (as dense class ids). This is the common input
// type of the refinement engine, the isomorphism search and the pebble game.
struct ColoredGraph {
    int n = 0;
    std::vector<int> color;               // size n
    std::vector<Edge> edges;              // u < v, sorted lexicographically
    std::vector<std::vector<Vertex>> adj; // sorted neighbor lists
    std::vector<int> eq_class;            // empty, or size n with dense class ids

    bool has_equivalence() const { return !eq_class.empty(); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& a = adj[u];
        auto it = std::lower_bound(a.begin(), a.end(), v);
        return it != a.end() && *it == v;
    }

    // Rebuild adjacency lists from `edges`; call after filling edges directly.
    void rebuild_adjacency();

    // Throws invalid_input_error when sizes, edge endpoints, duplicate edges,
    // self loops or class ids are malformed.
    void validate() const;
};

// Convenience constructor used throughout tests: colors default to all-1.
ColoredGraph make_colored_graph(int n, std::vector<Edge> edges,
                                std::vector<int> colors = {},
                                std::vector<int> eq_class = {});

// Number of connected components (ignores colors and classes).
int component_count(const ColoredGraph& g);

// Sorted list of component sizes, ascending.
std::vector<int> component_sizes(const ColoredGraph& g);

} // namespace cfiwl
