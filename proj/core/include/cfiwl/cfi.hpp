#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/graph.hpp"

namespace cfiwl {

// F2-valued assignment on the edges of a base graph, indexed like its edge list.
struct EdgeAssignment {
    std::vector<std::uint8_t> bits;

    int parity() const;
    bool operator==(const EdgeAssignment&) const = default;
};

EdgeAssignment zero_assignment(const OrderedBaseGraph& g);
EdgeAssignment single_edge_assignment(const OrderedBaseGraph& g, int edge_idx);
EdgeAssignment xor_assignments(const EdgeAssignment& a, const EdgeAssignment& b);

// A set of directed base edges with even out-degree at every vertex. Stored
// as flags over the global directed-edge order: all 2|E| directed edges sorted
// by (tail color, head color), i.e. by (tail id, head id).
struct DirectedEdgeIndex {
    std::vector<Edge> dir_edges;         // (tail, head), sorted
    std::vector<int> first_out;          // first directed-edge id with given tail; size n+1

    static DirectedEdgeIndex build(const OrderedBaseGraph& g);
    int id_of(Vertex tail, Vertex head) const; // throws if absent
};

struct Twisting {
    std::vector<std::uint8_t> member; // size 2|E| over the directed-edge order

    bool empty_set() const;
    bool contains(int dir_id) const { return member[dir_id] != 0; }
    bool operator==(const Twisting&) const = default;
};

Twisting empty_twisting(const OrderedBaseGraph& g);
Twisting xor_twistings(const Twisting& a, const Twisting& b);

// Even out-degree at every vertex?
bool is_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx, const Twisting& t);

// True when T has no outgoing directed edge at u.
bool twisting_fixes(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                    const Twisting& t, Vertex u);

// g_T: edge e is twisted iff exactly one direction of e is in T.
EdgeAssignment twisting_effect(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                               const Twisting& t);

// Sorted list of undirected edge indices twisted by T.
std::vector<int> twisted_edges(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                               const Twisting& t);

// CFI graph over a base graph: the gadget of a degree-d vertex u consists of
// the pairs (u, m) for every even-popcount mask m in [0, 2^d); the gadgets of
// neighbors u, v are joined by the edges with mask-bit sum f({u,v}) at the
// positions of each endpoint in the other's neighbor list. Vertex ids depend
// only on the base graph, so CFI graphs over one base share a vertex universe.
struct CFIGraph {
    OrderedBaseGraph base;
    EdgeAssignment f;
    std::vector<int> offset;           // per base vertex, first CFI vertex id; size n+1
    std::vector<Vertex> origin;        // per CFI vertex
    std::vector<std::uint32_t> mask;   // per CFI vertex
    std::vector<Edge> edges;           // CFI edges, sorted
    std::vector<std::vector<Vertex>> adj;

    int n() const { return static_cast<int>(origin.size()); }
    int vertex_of(Vertex base_vertex, std::uint32_t m) const; // throws if m odd-weight
    ColoredGraph to_colored() const;   // colors = origin colors, no relation
};

// Degrees are capped (default 20) because gadgets grow as 2^(d-1).
CFIGraph build_cfi(const OrderedBaseGraph& base, const EdgeAssignment& f,
                   int max_degree = 20);

// f + g_T.
EdgeAssignment apply_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                              const EdgeAssignment& f, const Twisting& t);

// The vertex bijection CFI(base,f) -> CFI(base, f + g_T) induced by T:
// (u, m) maps to (u, m xor delta_u) where delta_u flips the position of v in
// u's neighbor list for every (u,v) in T. Returned over the shared universe.
std::vector<Vertex> twisting_to_isomorphism(const CFIGraph& from, const Twisting& t);

// For connected bases: CFI(base,f) and CFI(base,g) are isomorphic iff the
// twisted-parity of f and g agree.
bool cfi_isomorphic(const OrderedBaseGraph& base, const EdgeAssignment& f,
                    const EdgeAssignment& g);

// Least twisting T (lexicographically, over the directed-edge order) with
// f = g + g_T that fixes every vertex in `fixed`, or nullopt.
std::optional<Twisting> find_twisting(const OrderedBaseGraph& base,
                                      const EdgeAssignment& f,
                                      const EdgeAssignment& g,
                                      const std::vector<Vertex>& fixed = {});

// Color-, adjacency- and relation-preserving bijection search by backtracking
// over color classes; `pins` forces images of individual vertices. Exact; the
// cap guards against oversized inputs (throws resource_cap_error).
std::optional<std::vector<Vertex>> brute_force_isomorphic(
    const ColoredGraph& a, const ColoredGraph& b,
    const std::vector<std::pair<Vertex, Vertex>>& pins = {}, int cap = 40);

// Validates that `map` is an isomorphism a -> b (colors, edges both ways,
// equivalence classes when present).
bool check_isomorphism(const ColoredGraph& a, const ColoredGraph& b,
                       const std::vector<Vertex>& map);

} // namespace cfiwl
