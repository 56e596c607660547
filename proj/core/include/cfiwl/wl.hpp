#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfiwl/graph.hpp"

namespace cfiwl {

// k-dimensional Weisfeiler-Leman over one or more graphs sharing a color
// alphabet. Rounds refine the coloring of k-tuples:
//   round 0: atomic type of the tuple (vertex colors, equality pattern,
//            adjacency pattern, equivalence pattern when present);
//   round r+1: (previous color, multiset over w of the k-vector of colors of
//              the tuple with each slot substituted by w).
// Colors are dense ids shared across all graphs in a run; tuples of different
// graphs get equal colors exactly when their refinement histories agree.

struct WlRoundStats {
    int round = 0;            // colors after this many refinement steps
    int num_colors = 0;       // distinct tuple colors across all graphs
};

struct WlResult {
    int k = 1;
    int rounds_run = 0;                      // refinement steps performed
    bool stabilized = false;                 // joint partition stopped refining
    std::vector<WlRoundStats> per_round;     // size rounds_run + 1
    // Per graph, per round: histogram as sorted (color,count) pairs.
    std::vector<std::vector<std::vector<std::pair<int, long long>>>> histograms;
    // Final tuple coloring per graph (row-major over V^k, slot 0 most
    // significant), kept only when requested.
    std::vector<std::vector<int>> final_coloring;

    // First round whose histograms differ between graphs a and b, if any.
    std::optional<int> distinguishing_round(int a = 0, int b = 1) const;
};

struct WlOptions {
    int k = 1;
    int max_rounds = -1;              // -1: run to stabilization
    bool keep_colorings = false;
    // Throws resource_cap_error when sum over graphs of |V|^k exceeds this.
    std::uint64_t max_tuples = 200'000'000;
};

// Runs joint k-WL over the given graphs until the joint partition is stable
// or max_rounds is hit. Graphs may have different sizes. Histograms for every
// round (including round 0) are always recorded.
WlResult wl_run(const std::vector<const ColoredGraph*>& graphs, const WlOptions& opt);

// Convenience: first distinguishing round of k-WL on (a,b), running to joint
// stabilization. Nullopt when the stable colorings have equal histograms.
std::optional<int> wl_distinguishing_round(const ColoredGraph& a, const ColoredGraph& b,
                                           int k, std::uint64_t max_tuples = 200'000'000);

// Convenience: rounds needed for the partition of a single graph to stop
// refining (the stable round itself, i.e. least r with P_r == P_{r+1}).
int wl_stable_round(const ColoredGraph& g, int k, std::uint64_t max_tuples = 200'000'000);

} // namespace cfiwl
