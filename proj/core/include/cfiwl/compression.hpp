#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/graph.hpp"

namespace cfiwl {

// A compression structure on a base graph: a partition of the vertices into
// classes that are pairwise non-adjacent and degree-homogeneous, plus, for
// every class, a consistent numbering of the edge directions out of its
// members (position p of one member corresponds to position p of another).
// With the identity numbering this is just "same neighbor-list position".
struct BaseCompression {
    std::vector<int> class_of;             // per base vertex, dense class ids
    std::vector<std::vector<Vertex>> members; // per class, ascending

    int num_classes() const { return static_cast<int>(members.size()); }
    void validate(const OrderedBaseGraph& g) const; // non-adjacency + equal degrees
};

// Every vertex its own class.
BaseCompression discrete_compression(const OrderedBaseGraph& g);

// Classes given explicitly (validated).
BaseCompression make_compression(const OrderedBaseGraph& g,
                                 const std::vector<std::vector<Vertex>>& classes);

// Lifted equivalence on CFI vertices: (u,m) ~ (v,m') iff u,v share a base
// class and m == m'. Writes eq_class into the colored CFI graph.
ColoredGraph cfi_with_lifted_relation(const CFIGraph& cfi, const BaseCompression& comp);

// f is compressible when parallel edges agree: for every pair of classes and
// every position pair, all edges realized between them carry the same value.
bool is_compressible_assignment(const OrderedBaseGraph& g, const BaseCompression& comp,
                                const EdgeAssignment& f);

// T is compressible when members of a class have identical outgoing patterns
// position by position.
bool is_compressible_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                              const BaseCompression& comp, const Twisting& t);

// Quotient of CFI(base,f) by the lifted relation. Vertices are the pairs
// (class, even mask); two quotient vertices are adjacent iff some members are.
// Requires a compressible f; the result is loop-free and its class colors are
// the least member color of the base class.
struct CompressedCFIGraph {
    BaseCompression comp;
    std::vector<int> q_class;            // per quotient vertex, base class
    std::vector<std::uint32_t> q_mask;   // per quotient vertex
    ColoredGraph graph;                  // quotient graph, eq_class empty

    int vertex_of(int base_class, std::uint32_t m) const;
};

CompressedCFIGraph build_compressed_cfi(const OrderedBaseGraph& base,
                                        const BaseCompression& comp,
                                        const EdgeAssignment& f,
                                        int max_degree = 20);

// Sum over classes of 2^(deg-1): the exact vertex count of the quotient.
std::uint64_t compressed_size(const OrderedBaseGraph& g, const BaseCompression& comp);

// Least twisting with f = g + g_T, compressible w.r.t. comp, fixing every
// vertex of `fixed`; nullopt if none exists.
std::optional<Twisting> find_compressible_twisting(const OrderedBaseGraph& base,
                                                   const DirectedEdgeIndex& idx,
                                                   const BaseCompression& comp,
                                                   const EdgeAssignment& f,
                                                   const EdgeAssignment& g,
                                                   const std::vector<Vertex>& fixed = {});

// Variant fixing whole classes: every member of every listed class.
std::optional<Twisting> find_compressible_twisting_fixing_classes(
    const OrderedBaseGraph& base, const DirectedEdgeIndex& idx,
    const BaseCompression& comp, const EdgeAssignment& f, const EdgeAssignment& g,
    const std::vector<int>& fixed_classes);

} // namespace cfiwl
