#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/graph.hpp"
#include "cfiwl/grid_compression.hpp"
#include "cfiwl/rng.hpp"

namespace cfiwl {

// ---- Exact Cops-and-Robber solver -------------------------------------------
//
// The game: the robber occupies an edge, up to `cop_count` cops occupy
// vertices (initially none placed). Each round one cop is picked up (from the
// board or from the reserve) and a destination is announced; the robber then
// moves to any edge reachable from its edge via a path avoiding the cops
// still on the board; the picked-up cop lands. The robber is caught when both
// endpoints of its edge are occupied.

struct GameSolveResult {
    bool cops_win = false;
    int rounds = -1; // minimal full rounds to capture when cops_win
};

// Exact backward-induction value from the start (no cops placed, robber picks
// its edge adversarially). Throws resource_cap_error when the settled-state
// count exceeds state_cap. Colors of g are irrelevant to the game.
GameSolveResult solve_cops_robber(const ColoredGraph& g, int cop_count,
                                  std::uint64_t state_cap = 5'000'000);

// Same game but from a fixed initial position.
GameSolveResult solve_cops_robber_from(const ColoredGraph& g, int cop_count,
                                       const std::vector<Vertex>& initial_cops,
                                       int initial_edge,
                                       std::uint64_t state_cap = 5'000'000);

// ---- Exact bijective pebble game solver --------------------------------------
//
// Spoiler/Duplicator on (a, b) with `pebbles` pebble pairs. A round: Spoiler
// picks up a pebble pair (or takes a fresh one), Duplicator answers with a
// bijection V(a) -> V(b), Spoiler places the pair on (w, h(w)). Spoiler wins
// when the pebbled position is not a partial isomorphism (colors, equality,
// adjacency, and the equivalence relation when both graphs carry one), or
// immediately when |V(a)| != |V(b)|.

struct PebbleGameResult {
    bool spoiler_wins = false;
    int rounds = -1; // minimal rounds for Spoiler when spoiler_wins
};

// Exact minimax value; Duplicator's bijection choice is resolved through a
// bottleneck assignment over successor values, which is exhaustive-equivalent.
// Throws resource_cap_error when |V| exceeds size_cap.
PebbleGameResult solve_pebble_game(const ColoredGraph& a, const ColoredGraph& b,
                                   int pebbles, int size_cap = 8);

// ---- Compressed Cops-and-Robber game ----------------------------------------
//
// Played on a base graph with a compression. Cops occupy equivalence classes
// (a cop sent to vertex v occupies [v]); the robber occupies a base edge. To
// move from e1 to e2 the robber must provide a compressible twisting that
// twists exactly {e1, e2} and fixes every member of every cop-occupied class;
// staying is the empty twisting. Capture: both endpoint classes occupied.

// Least such twisting, or nullopt when the move is illegal.
std::optional<Twisting> find_move_twisting(const OrderedBaseGraph& base,
                                           const DirectedEdgeIndex& idx,
                                           const BaseCompression& comp,
                                           const std::vector<int>& occupied_classes,
                                           int e_from, int e_to);

// Standalone certificate check, independent of the solver: t is a twisting,
// is compressible, fixes all members of occupied classes, and its twisted
// edge set is exactly {e_from, e_to} (empty when e_from == e_to).
bool check_move_certificate(const OrderedBaseGraph& base, const DirectedEdgeIndex& idx,
                            const BaseCompression& comp,
                            const std::vector<int>& occupied_classes,
                            int e_from, int e_to, const Twisting& t);

// Exact value of the compressed game by backward induction, for small
// instances. Cops start on initial_classes (possibly empty), robber on
// initial_edge.
GameSolveResult solve_compressed_game(const OrderedBaseGraph& base,
                                      const DirectedEdgeIndex& idx,
                                      const BaseCompression& comp, int cop_count,
                                      const std::vector<int>& initial_classes,
                                      int initial_edge,
                                      std::uint64_t state_cap = 2'000'000);

// ---- Strategies and simulation ------------------------------------------------

// One cop move: lift a cop from `lift_class` (-1 takes an unplaced cop) and
// announce `destination` (a base vertex; the cop occupies its class).
struct CopMove {
    int lift_class = -1;
    Vertex destination = 0;
};

class CopStrategy {
public:
    virtual ~CopStrategy() = default;
    virtual std::string name() const = 0;
    virtual CopMove next(const std::vector<int>& occupied_classes, int robber_edge,
                         int round) = 0;
};

class RobberPolicy {
public:
    struct Move {
        int edge = -1;
        Twisting certificate; // empty-set twisting when staying
    };

    virtual ~RobberPolicy() = default;
    virtual int initial_edge() = 0;
    // ground_classes: classes occupied while the lifted cop is airborne;
    // announced_class: where it will land. Throws invariant_violation_error
    // when the policy's internal invariants break (implementation bug).
    virtual Move move(const std::vector<int>& ground_classes, int announced_class,
                      int round) = 0;
    // Called after the cop lands; policies assert their invariants here.
    virtual void after_placement(const std::vector<int>& occupied_classes, int round) {}
};

struct GameRoundRecord {
    int round = 0;
    int lift_class = -1;
    Vertex destination = 0;
    int robber_from = -1;
    int robber_to = -1;
    bool stayed = true;
    bool certified = false; // standalone checker verdict
};

struct GameTranscript {
    int cop_count = 0;
    int max_rounds = 0;
    std::uint64_t seed = 0;
    std::string cop_strategy;
    int rounds_played = 0;
    bool captured = false;
    bool illegal_robber_move = false;
    bool illegal_cop_move = false;
    bool robber_survived = false;
    std::string failure; // diagnostic when a policy aborts
    std::vector<GameRoundRecord> rounds;
};

struct SimulationOptions {
    int cop_count = 3;
    int max_rounds = 100;
    std::uint64_t seed = 0;
    bool record_rounds = true;
    bool check_certificates = true; // re-validate every robber move
};

// Runs the three-step round loop. Illegal moves end the game with the offender
// losing. An invariant_violation_error thrown by the robber policy aborts the
// game: the diagnostic lands in `failure` and the robber does not survive.
GameTranscript simulate_compressed_game(const OrderedBaseGraph& base,
                                        const DirectedEdgeIndex& idx,
                                        const BaseCompression& comp,
                                        CopStrategy& cops, RobberPolicy& robber,
                                        const SimulationOptions& opts);

// ---- Shipped strategies -------------------------------------------------------

enum class CopStrategyKind { random, greedy, sweep, separator };

CopStrategyKind cop_strategy_from_name(const std::string& name);
std::string cop_strategy_name(CopStrategyKind kind);

// Adversarial cop strategies on the structured grid compression.
std::unique_ptr<CopStrategy> make_cop_strategy(CopStrategyKind kind,
                                               const GridContext& ctx,
                                               int cop_count, std::uint64_t seed);

// Robber that never moves (legal forever against no cops).
std::unique_ptr<RobberPolicy> make_stay_robber(int edge);

// The structured-grid robber policy: keeps to vertical edges in cop-free
// columns among the first or last k+2 columns, hops within its side through
// singleton-class columns, and jumps to the far side via an end-to-end
// twisting when the unique staircase separator closes to within |J|/3 of its
// side. Asserts its two invariants after every placement.
std::unique_ptr<RobberPolicy> make_grid_robber_policy(const GridContext& ctx,
                                                      const DirectedEdgeIndex& idx,
                                                      const BaseCompression& comp);

} // namespace cfiwl
