#pragma once

// Reference implementations, written for obviousness rather than speed, used
// to validate the real library. Everything here follows the definitions
// literally: permutation enumeration for isomorphism, subset enumeration for
// twistings, all-shifts BFS for toroidal separators, map-based fixpoints for
// the games, and a map-based refinement loop for Weisfeiler-Leman.

#include <map>
#include <optional>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/games.hpp"
#include "cfiwl/graph.hpp"
#include "cfiwl/grid_compression.hpp"

namespace oracle {

// ---- Reference k-WL ----------------------------------------------------------

struct RefWl {
    int rounds_run = 0;
    bool stabilized = false;
    // histograms[g][r]: color -> count for graph g after r refinement steps.
    std::vector<std::vector<std::map<int, long long>>> histograms;
    // colors[g]: final tuple coloring, row-major over V^k (slot 0 most
    // significant).
    std::vector<std::vector<int>> colors;
};

RefWl ref_wl(const std::vector<const cfiwl::ColoredGraph*>& graphs, int k,
             int max_rounds = -1);

// First round whose histograms differ, running to joint stabilization.
std::optional<int> ref_distinguishing(const cfiwl::ColoredGraph& a,
                                      const cfiwl::ColoredGraph& b, int k);

// ---- Brute-force isomorphism ---------------------------------------------------

// Checks all |V|! vertex bijections (colors, adjacency, equivalence classes,
// pins). Intended for n <= 8.
bool perm_isomorphic(const cfiwl::ColoredGraph& a, const cfiwl::ColoredGraph& b,
                     const std::vector<std::pair<cfiwl::Vertex, cfiwl::Vertex>>& pins = {});

// ---- Exhaustive twisting enumeration -------------------------------------------

// All subsets of the directed edges that have even out-degree everywhere.
// Only for bases with 2|E| <= 22 or so.
std::vector<cfiwl::Twisting> all_twistings(const cfiwl::OrderedBaseGraph& base,
                                           const cfiwl::DirectedEdgeIndex& idx);

// ---- Grid separators, definitional ----------------------------------------------

// W separates column 0 from column |J|-1 in C - W (BFS); vacuously true when
// a boundary column is entirely deleted.
bool naive_vertical_separator(const cfiwl::GridContext& ctx,
                              const std::vector<cfiwl::Vertex>& w);

// Tries every cyclic shift of s and runs the vertical-separator check on the
// part that lands inside the cylinder.
bool naive_toroidal_separator(const cfiwl::GridContext& ctx,
                              const std::vector<cfiwl::RC>& s);

// The equiv-star closure of a cylinder vertex set, computed directly from the
// row periods.
std::vector<cfiwl::RC> naive_star_closure(const cfiwl::GridContext& ctx,
                                          const std::vector<cfiwl::Vertex>& w);

// Every k-subset of `candidates` (torus vertices) that is a toroidal vertical
// separator. Exponential; closure sizes at toy parameters are tiny.
std::vector<std::vector<cfiwl::RC>> all_separator_subsets(
    const cfiwl::GridContext& ctx, const std::vector<cfiwl::RC>& candidates);

// Pairwise-separator check for rows (lower_row, lower_row+1 mod k) by literal
// closure construction and BFS over the induced two-row subgraph.
bool naive_pairwise_separator(const cfiwl::GridContext& ctx,
                              const std::vector<cfiwl::Vertex>& w, int lower_row);

// Closure of w under approx(l), intersected with the cylinder.
std::vector<cfiwl::Vertex> naive_approx_closure(const cfiwl::GridContext& ctx, int l,
                                                const std::vector<cfiwl::Vertex>& w);

// BFS distance in the torus from the full column `col` to the nearest member
// of s (-1 when s is empty).
int naive_torus_distance(const cfiwl::GridContext& ctx, int col,
                         const std::vector<cfiwl::RC>& s);

// ---- Naive game solvers -----------------------------------------------------------

// Classic cops-and-robber value by map-based fixpoint iteration. max_value
// bounds the iteration; values above it count as "robber wins".
cfiwl::GameSolveResult naive_cops_robber(const cfiwl::ColoredGraph& g, int cop_count,
                                         int max_value = 64);

// Bijective pebble game by full bijection enumeration (n <= 5 advised).
cfiwl::PebbleGameResult naive_pebble_game(const cfiwl::ColoredGraph& a,
                                          const cfiwl::ColoredGraph& b, int pebbles,
                                          int max_value = 32);

// Compressed cops-and-robber value where move legality is decided by scanning
// an exhaustive twisting list (use only with micro bases).
cfiwl::GameSolveResult naive_compressed_game(const cfiwl::OrderedBaseGraph& base,
                                             const cfiwl::DirectedEdgeIndex& idx,
                                             const cfiwl::BaseCompression& comp,
                                             int cop_count,
                                             const std::vector<int>& initial_classes,
                                             int initial_edge, int max_value = 64);

} // namespace oracle
