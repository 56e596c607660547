#include "cfiwl/games.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfiwl/errors.hpp"

namespace cfiwl {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Sorted multisets are packed into one 64-bit key, eight bits per element in
// ascending order; sizes up to eight over universes up to 254.
constexpr int kMaxPackSize = 8;
constexpr int kMaxPackValue = 254;

std::uint64_t pack_multiset(const std::vector<int>& sorted) {
    std::uint64_t key = 0;
    for (int v : sorted) key = (key << 8) | static_cast<std::uint64_t>(v + 1);
    return key;
}

void push_multisets(int universe, int size, int lo, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
    }
    for (int v = lo; v < universe; ++v) {
        cur.push_back(v);
        push_multisets(universe, size, v, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> all_multisets(int universe, int max_size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    for (int s = 0; s <= max_size; ++s) push_multisets(universe, s, 0, cur, out);
    return out;
}

std::vector<int> insert_sorted(std::vector<int> v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    return v;
}

std::vector<int> dedup_sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Shared skeleton of the two cops-and-robber solvers: the game tree over
// (cop multiset, robber edge) with one cop airborne per round. Capture enters
// through the value initialisation; legality of robber replies through the
// `replies` callback, which receives the ground multiset and current edge.
struct CopGameTable {
    int universe = 0;  // cop landing alternatives (vertices or classes)
    int cop_count = 0;
    int m = 0;  // robber edges
    std::vector<std::vector<int>> positions;
    std::unordered_map<std::uint64_t, int> pos_id;
    std::vector<int> value;  // positions x edges

    int id_of(const std::vector<int>& p) const { return pos_id.at(pack_multiset(p)); }

    void build(int universe_in, int cop_count_in, int m_in, std::uint64_t state_cap) {
        universe = universe_in;
        cop_count = cop_count_in;
        m = m_in;
        if (cop_count > kMaxPackSize || universe > kMaxPackValue)
            throw resource_cap_error("cops-and-robber solver: instance too large");
        positions = all_multisets(universe, cop_count);
        if (positions.size() * static_cast<std::uint64_t>(m) > state_cap)
            throw resource_cap_error("cops-and-robber solver: state cap exceeded");
        pos_id.reserve(positions.size());
        for (int i = 0; i < static_cast<int>(positions.size()); ++i)
            pos_id.emplace(pack_multiset(positions[i]), i);
        value.assign(positions.size() * static_cast<std::size_t>(m), kInf);
    }

    int& val(int pid, int e) { return value[static_cast<std::size_t>(pid) * m + e]; }

    // covered(position, edge) -> capture; replies(ground pid, edge) -> legal edges.
    template <class Covered, class Replies>
    void solve(Covered&& covered, Replies&& replies) {
        const int np = static_cast<int>(positions.size());
        for (int pid = 0; pid < np; ++pid)
            for (int e = 0; e < m; ++e)
                if (covered(positions[pid], e)) val(pid, e) = 0;

        // Lift options per position: reserve (keeps the multiset) when a cop
        // is unplaced, or any distinct member.
        std::vector<std::vector<int>> grounds(np);
        for (int pid = 0; pid < np; ++pid) {
            const auto& p = positions[pid];
            if (static_cast<int>(p.size()) < cop_count) grounds[pid].push_back(pid);
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (i > 0 && p[i] == p[i - 1]) continue;
                std::vector<int> q = p;
                q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
                grounds[pid].push_back(id_of(q));
            }
        }
        // Landing table for every position that can still receive a cop.
        std::vector<std::vector<int>> land(np);
        for (int pid = 0; pid < np; ++pid) {
            if (static_cast<int>(positions[pid].size()) >= cop_count) continue;
            land[pid].resize(universe);
            for (int v = 0; v < universe; ++v)
                land[pid][v] = id_of(insert_sorted(positions[pid], v));
        }

        const std::uint64_t sweep_guard = positions.size() * static_cast<std::uint64_t>(m) + 2;
        for (std::uint64_t sweep = 0; sweep < sweep_guard; ++sweep) {
            bool changed = false;
            for (int pid = 0; pid < np; ++pid) {
                for (int e = 0; e < m; ++e) {
                    if (val(pid, e) == 0) continue;
                    int best = kInf;
                    for (int gid : grounds[pid]) {
                        const std::vector<int>& reps = replies(gid, e);
                        for (int v = 0; v < universe; ++v) {
                            const int nid = land[gid][v];
                            int worst = 0;
                            for (int e2 : reps) {
                                worst = std::max(worst, val(nid, e2));
                                if (worst >= kInf) break;
                            }
                            if (worst < kInf) best = std::min(best, 1 + worst);
                        }
                    }
                    if (best < val(pid, e)) {
                        val(pid, e) = best;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
    }
};

// Robber replies in the classic game: edges sharing a cop-free component with
// the current edge; the current edge itself is always available.
std::vector<int> classic_replies(const ColoredGraph& g, const std::vector<int>& ground,
                                 int e) {
    std::vector<char> blocked(g.n, 0);
    for (int c : ground) blocked[c] = 1;
    std::vector<int> comp(g.n, -1);
    int nc = 0;
    for (int s = 0; s < g.n; ++s) {
        if (blocked[s] || comp[s] >= 0) continue;
        comp[s] = nc;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (Vertex u : g.adj[v])
                if (!blocked[u] && comp[u] < 0) {
                    comp[u] = nc;
                    queue.push_back(u);
                }
        }
        ++nc;
    }
    auto [x, y] = g.edges[e];
    std::vector<char> from(nc, 0);
    if (!blocked[x]) from[comp[x]] = 1;
    if (!blocked[y]) from[comp[y]] = 1;
    std::vector<int> out;
    for (int e2 = 0; e2 < static_cast<int>(g.edges.size()); ++e2) {
        if (e2 == e) {
            out.push_back(e2);
            continue;
        }
        auto [a, b] = g.edges[e2];
        if ((!blocked[a] && from[comp[a]]) || (!blocked[b] && from[comp[b]]))
            out.push_back(e2);
    }
    return out;
}

GameSolveResult classic_result_from_table(CopGameTable& table, const std::vector<int>& start,
                                          int edge) {
    const int v = table.val(table.id_of(start), edge);
    if (v >= kInf) return {false, -1};
    return {true, v};
}

CopGameTable solve_classic_table(const ColoredGraph& g, int cop_count,
                                 std::uint64_t state_cap) {
    CopGameTable table;
    table.build(g.n, cop_count, static_cast<int>(g.edges.size()), state_cap);
    auto covered = [&](const std::vector<int>& p, int e) {
        auto [x, y] = g.edges[e];
        return std::binary_search(p.begin(), p.end(), x) &&
               std::binary_search(p.begin(), p.end(), y);
    };
    // Reply sets depend only on the ground multiset and the edge; they are
    // computed once and reused across sweeps.
    std::unordered_map<std::uint64_t, std::vector<int>> reply_cache;
    auto replies = [&](int gid, int e) -> const std::vector<int>& {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(gid) << 20) | static_cast<std::uint64_t>(e);
        auto it = reply_cache.find(key);
        if (it == reply_cache.end())
            it = reply_cache.emplace(key, classic_replies(g, table.positions[gid], e)).first;
        return it->second;
    };
    table.solve(covered, replies);
    return table;
}

void validate_classic_inputs(const ColoredGraph& g, int cop_count) {
    if (cop_count < 0) throw invalid_input_error("solve_cops_robber: negative cop count");
    if (g.n <= 0) throw invalid_input_error("solve_cops_robber: empty graph");
}

} // namespace

GameSolveResult solve_cops_robber(const ColoredGraph& g, int cop_count,
                                  std::uint64_t state_cap) {
    validate_classic_inputs(g, cop_count);
    if (g.edges.empty()) return {true, 0};
    CopGameTable table = solve_classic_table(g, cop_count, state_cap);
    bool all_win = true;
    int worst = 0;
    for (int e = 0; e < table.m; ++e) {
        GameSolveResult r = classic_result_from_table(table, {}, e);
        all_win = all_win && r.cops_win;
        worst = std::max(worst, r.rounds);
    }
    if (!all_win) return {false, -1};
    return {true, worst};
}

GameSolveResult solve_cops_robber_from(const ColoredGraph& g, int cop_count,
                                       const std::vector<Vertex>& initial_cops,
                                       int initial_edge, std::uint64_t state_cap) {
    validate_classic_inputs(g, cop_count);
    if (static_cast<int>(initial_cops.size()) > cop_count)
        throw invalid_input_error("solve_cops_robber_from: more cops than cop_count");
    for (Vertex v : initial_cops)
        if (v < 0 || v >= g.n)
            throw invalid_input_error("solve_cops_robber_from: cop vertex out of range");
    if (initial_edge < 0 || initial_edge >= static_cast<int>(g.edges.size()))
        throw invalid_input_error("solve_cops_robber_from: edge out of range");
    CopGameTable table = solve_classic_table(g, cop_count, state_cap);
    std::vector<int> start(initial_cops.begin(), initial_cops.end());
    std::sort(start.begin(), start.end());
    return classic_result_from_table(table, start, initial_edge);
}

// ---- Bijective pebble game ----------------------------------------------------

namespace {

// Largest threshold t such that a perfect matching exists using only pairs
// with val[w][x] >= t: the exact value of "Duplicator picks the bijection,
// Spoiler then picks the worst pebbled pair".
int bottleneck_assignment(int n, const std::vector<int>& val) {
    std::vector<int> levels(val);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<int> match_of(n);
    std::vector<char> visited(n);
    auto augment = [&](auto&& self, int w, int threshold) -> bool {
        for (int x = 0; x < n; ++x) {
            if (visited[x] || val[w * n + x] < threshold) continue;
            visited[x] = 1;
            if (match_of[x] < 0 || self(self, match_of[x], threshold)) {
                match_of[x] = w;
                return true;
            }
        }
        return false;
    };
    auto feasible = [&](int threshold) {
        std::fill(match_of.begin(), match_of.end(), -1);
        for (int w = 0; w < n; ++w) {
            std::fill(visited.begin(), visited.end(), 0);
            if (!augment(augment, w, threshold)) return false;
        }
        return true;
    };

    // The least level is always feasible (every pair is allowed there).
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (feasible(levels[mid]))
            lo = mid;
        else
            hi = mid - 1;
    }
    return levels[lo];
}

bool pebble_position_bad(const ColoredGraph& a, const ColoredGraph& b, bool use_eq,
                         const std::vector<int>& pairs) {
    const int n = b.n;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const int x = pairs[i] / n, y = pairs[i] % n;
        if (a.color[x] != b.color[y]) return true;
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const int x2 = pairs[j] / n, y2 = pairs[j] % n;
            if ((x == x2) != (y == y2)) return true;
            if (a.adjacent(x, x2) != b.adjacent(y, y2)) return true;
            if (use_eq && (a.eq_class[x] == a.eq_class[x2]) != (b.eq_class[y] == b.eq_class[y2]))
                return true;
        }
    }
    return false;
}

} // namespace

PebbleGameResult solve_pebble_game(const ColoredGraph& a, const ColoredGraph& b,
                                   int pebbles, int size_cap) {
    if (pebbles < 1) throw invalid_input_error("solve_pebble_game: need at least one pair");
    if (pebbles > kMaxPackSize)
        throw resource_cap_error("solve_pebble_game: too many pebble pairs");
    if (a.n > size_cap || b.n > size_cap)
        throw resource_cap_error("solve_pebble_game: graph exceeds size cap");
    if (a.n != b.n) return {true, 0};
    const int n = a.n;
    if (n == 0) return {false, -1};
    const bool use_eq = a.has_equivalence() && b.has_equivalence();

    const std::vector<std::vector<int>> states = all_multisets(n * n, pebbles);
    std::unordered_map<std::uint64_t, int> state_id;
    state_id.reserve(states.size());
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        state_id.emplace(pack_multiset(states[i]), i);
    std::vector<int> value(states.size(), kInf);
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        if (pebble_position_bad(a, b, use_eq, states[i])) value[i] = 0;

    std::vector<int> successor(static_cast<std::size_t>(n) * n);
    const std::uint64_t sweep_guard = states.size() + 2;
    for (std::uint64_t sweep = 0; sweep < sweep_guard; ++sweep) {
        bool changed = false;
        for (int si = 0; si < static_cast<int>(states.size()); ++si) {
            if (value[si] == 0) continue;
            const auto& st = states[si];
            std::vector<std::vector<int>> lifts;
            if (static_cast<int>(st.size()) < pebbles) lifts.push_back(st);
            for (std::size_t i = 0; i < st.size(); ++i) {
                if (i > 0 && st[i] == st[i - 1]) continue;
                std::vector<int> rest = st;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
                lifts.push_back(std::move(rest));
            }
            int best = kInf;
            for (const auto& rest : lifts) {
                for (int w = 0; w < n; ++w)
                    for (int x = 0; x < n; ++x)
                        successor[static_cast<std::size_t>(w) * n + x] =
                            value[state_id.at(pack_multiset(insert_sorted(rest, w * n + x)))];
                const int dup = bottleneck_assignment(n, successor);
                if (dup < kInf) best = std::min(best, 1 + dup);
            }
            if (best < value[si]) {
                value[si] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    const int v = value[state_id.at(pack_multiset({}))];
    if (v >= kInf) return {false, -1};
    return {true, v};
}

// ---- Compressed game: moves, certificates, solver ------------------------------

namespace {

void validate_move_inputs(const OrderedBaseGraph& base, const BaseCompression& comp,
                          const std::vector<int>& occupied_classes, int e_from, int e_to,
                          const char* who) {
    const int m = static_cast<int>(base.edges.size());
    if (e_from < 0 || e_from >= m || e_to < 0 || e_to >= m)
        throw invalid_input_error(std::string(who) + ": edge index out of range");
    for (int c : occupied_classes)
        if (c < 0 || c >= comp.num_classes())
            throw invalid_input_error(std::string(who) + ": class id out of range");
}

} // namespace

std::optional<Twisting> find_move_twisting(const OrderedBaseGraph& base,
                                           const DirectedEdgeIndex& idx,
                                           const BaseCompression& comp,
                                           const std::vector<int>& occupied_classes,
                                           int e_from, int e_to) {
    validate_move_inputs(base, comp, occupied_classes, e_from, e_to, "find_move_twisting");
    EdgeAssignment target = zero_assignment(base);
    if (e_from != e_to)
        target = xor_assignments(single_edge_assignment(base, e_from),
                                 single_edge_assignment(base, e_to));
    return find_compressible_twisting_fixing_classes(base, idx, comp, target,
                                                     zero_assignment(base),
                                                     dedup_sorted(occupied_classes));
}

bool check_move_certificate(const OrderedBaseGraph& base, const DirectedEdgeIndex& idx,
                            const BaseCompression& comp,
                            const std::vector<int>& occupied_classes, int e_from, int e_to,
                            const Twisting& t) {
    validate_move_inputs(base, comp, occupied_classes, e_from, e_to,
                         "check_move_certificate");
    // An empty member vector is accepted as the canonical stay certificate.
    Twisting tt = t;
    if (tt.member.empty()) tt = empty_twisting(base);
    if (tt.member.size() != idx.dir_edges.size()) return false;
    if (!is_twisting(base, idx, tt)) return false;
    if (!is_compressible_twisting(base, idx, comp, tt)) return false;
    for (int c : dedup_sorted(occupied_classes))
        for (Vertex v : comp.members[c])
            if (!twisting_fixes(base, idx, tt, v)) return false;
    std::vector<int> want;
    if (e_from != e_to) want = {std::min(e_from, e_to), std::max(e_from, e_to)};
    return twisted_edges(base, idx, tt) == want;
}

GameSolveResult solve_compressed_game(const OrderedBaseGraph& base,
                                      const DirectedEdgeIndex& idx,
                                      const BaseCompression& comp, int cop_count,
                                      const std::vector<int>& initial_classes,
                                      int initial_edge, std::uint64_t state_cap) {
    if (cop_count < 0)
        throw invalid_input_error("solve_compressed_game: negative cop count");
    if (static_cast<int>(initial_classes.size()) > cop_count)
        throw invalid_input_error("solve_compressed_game: more cops than cop_count");
    const int m = static_cast<int>(base.edges.size());
    if (initial_edge < 0 || initial_edge >= m)
        throw invalid_input_error("solve_compressed_game: edge out of range");
    for (int c : initial_classes)
        if (c < 0 || c >= comp.num_classes())
            throw invalid_input_error("solve_compressed_game: class id out of range");

    CopGameTable table;
    table.build(comp.num_classes(), cop_count, m, state_cap);
    auto covered = [&](const std::vector<int>& p, int e) {
        auto [x, y] = base.edges[e];
        return std::binary_search(p.begin(), p.end(), comp.class_of[x]) &&
               std::binary_search(p.begin(), p.end(), comp.class_of[y]);
    };
    std::unordered_map<std::uint64_t, std::vector<int>> reply_cache;
    auto replies = [&](int gid, int e) -> const std::vector<int>& {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(gid) << 20) | static_cast<std::uint64_t>(e);
        auto it = reply_cache.find(key);
        if (it == reply_cache.end()) {
            const std::vector<int> ground = dedup_sorted(table.positions[gid]);
            std::vector<int> legal;
            for (int e2 = 0; e2 < m; ++e2)
                if (e2 == e || find_move_twisting(base, idx, comp, ground, e, e2))
                    legal.push_back(e2);
            it = reply_cache.emplace(key, std::move(legal)).first;
        }
        return it->second;
    };
    table.solve(covered, replies);

    std::vector<int> start = initial_classes;
    std::sort(start.begin(), start.end());
    const int v = table.val(table.id_of(start), initial_edge);
    if (v >= kInf) return {false, -1};
    return {true, v};
}

// ---- Simulation -----------------------------------------------------------------

GameTranscript simulate_compressed_game(const OrderedBaseGraph& base,
                                        const DirectedEdgeIndex& idx,
                                        const BaseCompression& comp, CopStrategy& cops,
                                        RobberPolicy& robber,
                                        const SimulationOptions& opts) {
    if (opts.cop_count < 1)
        throw invalid_input_error("simulate_compressed_game: need at least one cop");
    if (opts.max_rounds < 0)
        throw invalid_input_error("simulate_compressed_game: negative round budget");
    const int m = static_cast<int>(base.edges.size());

    GameTranscript t;
    t.cop_count = opts.cop_count;
    t.max_rounds = opts.max_rounds;
    t.seed = opts.seed;
    t.cop_strategy = cops.name();

    int robber_edge = robber.initial_edge();
    if (robber_edge < 0 || robber_edge >= m)
        throw invalid_input_error("simulate_compressed_game: robber initial edge invalid");

    std::vector<int> occupied; // sorted multiset of class ids
    auto covered = [&](int e) {
        auto [x, y] = base.edges[e];
        return std::binary_search(occupied.begin(), occupied.end(), comp.class_of[x]) &&
               std::binary_search(occupied.begin(), occupied.end(), comp.class_of[y]);
    };

    for (int round = 1; round <= opts.max_rounds; ++round) {
        const CopMove mv = cops.next(occupied, robber_edge, round);
        const bool lift_ok =
            mv.lift_class == -1
                ? static_cast<int>(occupied.size()) < opts.cop_count
                : std::binary_search(occupied.begin(), occupied.end(), mv.lift_class);
        if (!lift_ok || mv.destination < 0 || mv.destination >= base.n) {
            t.illegal_cop_move = true;
            t.robber_survived = true; // the offender loses
            return t;
        }
        std::vector<int> ground = occupied;
        if (mv.lift_class >= 0)
            ground.erase(std::lower_bound(ground.begin(), ground.end(), mv.lift_class));
        const int announced = comp.class_of[mv.destination];

        RobberPolicy::Move rm;
        try {
            rm = robber.move(ground, announced, round);
        } catch (const invariant_violation_error& err) {
            t.failure = err.what();
            return t;
        }
        bool cert_ok = rm.edge >= 0 && rm.edge < m;
        if (cert_ok && opts.check_certificates)
            cert_ok = check_move_certificate(base, idx, comp, ground, robber_edge, rm.edge,
                                             rm.certificate);
        if (!cert_ok) {
            t.illegal_robber_move = true;
            return t;
        }

        const int from = robber_edge;
        robber_edge = rm.edge;
        occupied = insert_sorted(std::move(ground), announced);
        if (opts.record_rounds)
            t.rounds.push_back({round, mv.lift_class, mv.destination, from, robber_edge,
                                from == robber_edge, opts.check_certificates && cert_ok});
        t.rounds_played = round;
        if (covered(robber_edge)) {
            t.captured = true;
            return t;
        }
        try {
            robber.after_placement(occupied, round);
        } catch (const invariant_violation_error& err) {
            t.failure = err.what();
            return t;
        }
    }
    t.robber_survived = true;
    return t;
}

// ---- Shipped strategies -----------------------------------------------------------

CopStrategyKind cop_strategy_from_name(const std::string& name) {
    if (name == "random") return CopStrategyKind::random;
    if (name == "greedy") return CopStrategyKind::greedy;
    if (name == "sweep") return CopStrategyKind::sweep;
    if (name == "separator") return CopStrategyKind::separator;
    throw invalid_input_error("unknown cop strategy: " + name);
}

std::string cop_strategy_name(CopStrategyKind kind) {
    switch (kind) {
        case CopStrategyKind::random: return "random";
        case CopStrategyKind::greedy: return "greedy";
        case CopStrategyKind::sweep: return "sweep";
        case CopStrategyKind::separator: return "separator";
    }
    throw invalid_input_error("unknown cop strategy kind");
}

namespace {

// Strategies see only class ids, so they learn which id resulted from each of
// their own landings by diffing consecutive occupied multisets.
class TrackedCopStrategy : public CopStrategy {
  protected:
    TrackedCopStrategy(const GridContext& ctx, int cop_count, std::uint64_t seed,
                       std::uint64_t salt)
        : ctx_(ctx), cop_count_(cop_count), rng_(seed ^ salt) {}

    void reconcile(const std::vector<int>& occupied) {
        last_added_ = -1;
        if (has_pending_) {
            std::vector<int> expect = prev_;
            if (pending_.lift_class >= 0) {
                auto it = std::lower_bound(expect.begin(), expect.end(), pending_.lift_class);
                if (it != expect.end() && *it == pending_.lift_class) expect.erase(it);
                for (auto oit = order_.begin(); oit != order_.end(); ++oit)
                    if (*oit == pending_.lift_class) {
                        order_.erase(oit);
                        break;
                    }
            }
            std::size_t i = 0, j = 0;
            while (i < occupied.size()) {
                if (j < expect.size() && occupied[i] == expect[j]) {
                    ++i;
                    ++j;
                    continue;
                }
                last_added_ = occupied[i];
                break;
            }
            if (last_added_ >= 0) {
                where_[last_added_] = pending_.destination;
                order_.push_back(last_added_);
            }
            has_pending_ = false;
        }
        prev_ = occupied;
    }

    CopMove commit(CopMove mv) {
        pending_ = mv;
        has_pending_ = true;
        return mv;
    }

    // Lift id if it is on the board, otherwise fall back to something legal.
    int safe_lift(int id, const std::vector<int>& occupied) const {
        if (id >= 0 && std::binary_search(occupied.begin(), occupied.end(), id)) return id;
        if (static_cast<int>(occupied.size()) < cop_count_) return -1;
        return occupied.front();
    }

    int oldest_lift(const std::vector<int>& occupied) const {
        if (static_cast<int>(occupied.size()) < cop_count_) return -1;
        return safe_lift(order_.empty() ? -1 : order_.front(), occupied);
    }

    int robber_column(int robber_edge) const {
        auto [u, v] = ctx_.cylinder.edges[robber_edge];
        return std::min(ctx_.cyl_rc(u).col, ctx_.cyl_rc(v).col);
    }

    const GridContext& ctx_;
    int cop_count_;
    Rng rng_;
    std::map<int, Vertex> where_;
    std::deque<int> order_;
    std::vector<int> prev_;
    bool has_pending_ = false;
    CopMove pending_{};
    int last_added_ = -1;
};

class RandomCops final : public TrackedCopStrategy {
  public:
    RandomCops(const GridContext& ctx, int cop_count, std::uint64_t seed)
        : TrackedCopStrategy(ctx, cop_count, seed, 0x9a11ce5eULL) {}
    std::string name() const override { return "random"; }
    CopMove next(const std::vector<int>& occupied, int, int) override {
        reconcile(occupied);
        int lift = -1;
        if (static_cast<int>(occupied.size()) >= cop_count_)
            lift = occupied[rng_.next_below(occupied.size())];
        const Vertex dest = static_cast<Vertex>(rng_.next_below(ctx_.cylinder.n));
        return commit({lift, dest});
    }
};

class GreedyCops final : public TrackedCopStrategy {
  public:
    GreedyCops(const GridContext& ctx, int cop_count, std::uint64_t seed)
        : TrackedCopStrategy(ctx, cop_count, seed, 0x6ee3d11fULL) {}
    std::string name() const override { return "greedy"; }
    CopMove next(const std::vector<int>& occupied, int robber_edge, int round) override {
        reconcile(occupied);
        const int lift = oldest_lift(occupied);
        auto [u, v] = ctx_.cylinder.edges[robber_edge];
        Vertex dest = (round & 1) ? u : v;
        // An occasional wide shot keeps the pressure less predictable.
        if (rng_.next_bernoulli(1, 8)) dest = static_cast<Vertex>(rng_.next_below(ctx_.cylinder.n));
        return commit({lift, dest});
    }
};

// Marches a loose column wall across the cylinder, one row per round.
class SweepCops final : public TrackedCopStrategy {
  public:
    SweepCops(const GridContext& ctx, int cop_count, std::uint64_t seed)
        : TrackedCopStrategy(ctx, cop_count, seed, 0x53eeb0c1ULL) {
        const int jl = ctx_.j_len();
        wall_ = jl / 2 + static_cast<int>(rng_.next_below(std::max(1, jl / 8)));
        wall_ = std::min(wall_, jl - 1);
    }
    std::string name() const override { return "sweep"; }
    CopMove next(const std::vector<int>& occupied, int, int) override {
        reconcile(occupied);
        const int lift = oldest_lift(occupied);
        const Vertex dest = ctx_.cyl_vertex(row_, wall_);
        if (++row_ == ctx_.k()) {
            row_ = 0;
            wall_ += dir_;
            if (wall_ < 0) {
                wall_ = 1;
                dir_ = 1;
            } else if (wall_ >= ctx_.j_len()) {
                wall_ = ctx_.j_len() - 2;
                dir_ = -1;
            }
        }
        return commit({lift, dest});
    }

  private:
    int wall_ = 0;
    int dir_ = -1;
    int row_ = 0;
};

// Builds an exact staircase separator and erodes its distance to the robber's
// boundary column one column per move, re-aiming whenever the robber changes
// sides; a spare cop harasses the robber's own edge every few rounds.
class SeparatorCops final : public TrackedCopStrategy {
  public:
    SeparatorCops(const GridContext& ctx, int cop_count, std::uint64_t seed)
        : TrackedCopStrategy(ctx, cop_count, seed, 0x5e9a7a70ULL),
          stair_class_(ctx.k(), -1),
          stair_col_(ctx.k(), 0) {
        const int jl = ctx_.j_len();
        const int start = jl / 3 + static_cast<int>(rng_.next_below(std::max(1, jl / 20)));
        for (int r = 0; r < ctx_.k(); ++r) stair_col_[r] = std::min(start, jl - 1);
    }
    std::string name() const override { return "separator"; }
    CopMove next(const std::vector<int>& occupied, int robber_edge, int round) override {
        reconcile(occupied);
        if (last_added_ >= 0 && pending_row_ >= 0) stair_class_[pending_row_] = last_added_;
        if (last_added_ >= 0 && pending_row_ == -2) harass_class_ = last_added_;
        pending_row_ = -1;

        const int jl = ctx_.j_len();
        const int k = ctx_.k();
        const int target = robber_column(robber_edge) < jl / 2 ? 0 : jl - 1;

        for (int r = 0; r < k; ++r) {
            if (stair_class_[r] >= 0) continue;
            pending_row_ = r;
            return commit({safe_lift(-1, occupied), ctx_.cyl_vertex(r, stair_col_[r])});
        }
        const bool spare = cop_count_ > k;
        if (spare && (harass_class_ < 0 || round % 4 == 0)) {
            pending_row_ = -2;
            const Vertex dest = ctx_.cylinder.edges[robber_edge].first;
            return commit({harass_class_ < 0 ? safe_lift(-1, occupied)
                                             : safe_lift(harass_class_, occupied),
                           dest});
        }
        const int r = march_row_;
        march_row_ = (march_row_ + 1) % k;
        int col = stair_col_[r];
        col += (target > col) - (target < col);
        col = std::clamp(col, 0, jl - 1);
        pending_row_ = r;
        const int lift = safe_lift(stair_class_[r], occupied);
        stair_col_[r] = col;
        return commit({lift, ctx_.cyl_vertex(r, col)});
    }

  private:
    std::vector<int> stair_class_;
    std::vector<int> stair_col_;
    int harass_class_ = -1;
    int march_row_ = 0;
    int pending_row_ = -1; // row of the in-flight placement, -2 for the harasser
};

class StayRobber final : public RobberPolicy {
  public:
    explicit StayRobber(int edge) : edge_(edge) {}
    int initial_edge() override { return edge_; }
    Move move(const std::vector<int>&, int, int) override { return {edge_, Twisting{}}; }

  private:
    int edge_;
};

} // namespace

std::unique_ptr<CopStrategy> make_cop_strategy(CopStrategyKind kind, const GridContext& ctx,
                                               int cop_count, std::uint64_t seed) {
    if (cop_count < 1) throw invalid_input_error("make_cop_strategy: need at least one cop");
    switch (kind) {
        case CopStrategyKind::random:
            return std::make_unique<RandomCops>(ctx, cop_count, seed);
        case CopStrategyKind::greedy:
            return std::make_unique<GreedyCops>(ctx, cop_count, seed);
        case CopStrategyKind::sweep:
            return std::make_unique<SweepCops>(ctx, cop_count, seed);
        case CopStrategyKind::separator:
            return std::make_unique<SeparatorCops>(ctx, cop_count, seed);
    }
    throw invalid_input_error("make_cop_strategy: unknown kind");
}

std::unique_ptr<RobberPolicy> make_stay_robber(int edge) {
    return std::make_unique<StayRobber>(edge);
}

} // namespace cfiwl
