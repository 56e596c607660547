#pragma once

#include <optional>
#include <vector>

#include "cfiwl/graph.hpp"

namespace cfiwl {

// Connected colored graph with pairwise distinct vertex colors 1..n assigned
// along a fixed linear order (vertex id order). Neighbor lists are sorted by
// neighbor color, which coincides with id order. Grid-family graphs carry
// explicit (row, col) coordinates.
struct OrderedBaseGraph {
    int n = 0;
    std::vector<int> color;               // color[v] == v + 1
    std::vector<Edge> edges;              // u < v, sorted lexicographically
    std::vector<std::vector<Vertex>> adj; // sorted by neighbor color
    std::vector<std::pair<int, int>> coords; // optional (row, col) per vertex

    bool has_coords() const { return !coords.empty(); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& a = adj[u];
        auto it = std::lower_bound(a.begin(), a.end(), v);
        return it != a.end() && *it == v;
    }

    int degree(Vertex v) const { return static_cast<int>(adj[v].size()); }

    // Index of undirected edge {u,v} in `edges`, or nullopt.
    std::optional<int> edge_index(Vertex u, Vertex v) const;

    ColoredGraph to_colored() const;

    // Checks connectivity, color uniqueness and adjacency consistency.
    void validate() const;
};

// Builds an ordered base graph from an edge list; vertices get colors 1..n in
// id order. Throws invalid_input_error unless the graph is connected, simple
// and loop-free.
OrderedBaseGraph make_base_graph(int n, std::vector<Edge> edges,
                                 std::vector<std::pair<int, int>> coords = {});

// rows x cols grid, vertices in lexicographic (row, col) order.
OrderedBaseGraph make_grid(int rows, int cols);

// Grid plus the column-wrap edges {(0,j),(rows-1,j)}. Requires rows >= 3.
OrderedBaseGraph make_cylinder(int rows, int cols);

// Cylinder plus the row-wrap edges {(i,0),(i,cols-1)}. Requires cols >= 3.
OrderedBaseGraph make_torus(int rows, int cols);

// 1-based position of v in u's color-ordered neighbor list.
int neighbor_index(const OrderedBaseGraph& g, Vertex u, Vertex v);

// Inverse lookup: the i-th neighbor (1-based) of u.
Vertex neighbor_at(const OrderedBaseGraph& g, Vertex u, int i);

// Parameters of the compressed-grid family: k rows, width parameter w,
// pairwise coprime periods p_0 < ... < p_{k-1} in (w/2, w], f(k) = 2k + 2,
// |J| = f(k)/2 * p_0*...*p_{k-1} and |J*| = 2|J|. lambda[i] is the largest
// integer with (lambda[i]+1) * f(k) * p_i * p_{i+1 mod k} <= |J|.
struct GridParams {
    int k = 0;
    int w = 0;                       // 0 in toy mode (periods given explicitly)
    bool toy = false;                // true when the w-window constraint is relaxed
    long long fk = 0;                // 2k + 2
    std::vector<long long> periods;  // ascending
    long long j_len = 0;             // |J|
    long long jstar_len = 0;         // |J*| = 2 |J|
    std::vector<long long> lambda;   // per row

    // f(k) * p_i * p_{i+1 mod k}: the column period of the row-i equivalences.
    long long row_period(int row) const;
};

// Greedy pick of k pairwise coprime numbers from (w/2, w]: primes descending
// by value, then proper prime powers by prime base descending. Returned in
// preference order. Throws when fewer than k coprime candidates exist.
std::vector<long long> choose_periods(int k, int w);

// Full parameter derivation for the regular regime; requires k >= 3 and
// w >= 2 * f(k).
GridParams build_params(int k, int w);

// Toy-mode parameters: explicit pairwise coprime periods, every derived
// quantity computed by the literal formulas. Meant for brute-force oracles.
GridParams toy_params(int k, std::vector<long long> periods);

} // namespace cfiwl
