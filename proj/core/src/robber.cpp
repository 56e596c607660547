#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "cfiwl/errors.hpp"
#include "cfiwl/games.hpp"

namespace cfiwl {

namespace {

std::vector<int> dedup(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

template <class F>
void for_each_k_subset(const std::vector<Vertex>& items, int k, F&& fn) {
    const int n = static_cast<int>(items.size());
    if (k <= 0 || n < k) return;
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    std::vector<Vertex> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = items[pick[i]];
        fn(subset);
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

// Survives on vertical edges in cop-free columns of the first or last k+2
// columns; those columns hold singleton classes only (the compression windows
// start at column period q_i > k+2), so every certificate below is supported
// on singleton classes or comes from an end-to-end twisting, hence is
// compressible. Invariants maintained round to round:
//   I.1  the robber's edge is vertical, inside its boundary strip, and no
//        occupied class has a member in its column;
//   I.2  every k cop classes whose closure contains the (unique) staircase
//        separator keep it at column distance >= |J|/3 - 2(round+1) from the
//        robber's boundary column.
// Decision rule per move, X = ground classes + announced class:
//   * no staircase of a k-subset of X within |J|/3 of this side: move (or
//     stay) within the strip to an X-free column;
//   * one is close but the ground classes already pin a staircase: stay on
//     this side (a pinned separator drifts at most two columns per round);
//   * one is close and the ground admits an end-to-end twisting: compose it
//     with two strip paths and jump to an X-free column on the far side;
//   * otherwise (ground is a pseudo-separator that is not toroidal) no
//     k-subset of X can close a separator: move within the strip.
class GridRobber final : public RobberPolicy {
  public:
    GridRobber(const GridContext& ctx, const DirectedEdgeIndex& idx,
               const BaseCompression& comp)
        : ctx_(ctx), idx_(idx), comp_(comp) {}

    int initial_edge() override {
        first_side_ = true;
        cur_ = vertical_edge(0);
        return cur_;
    }

    Move move(const std::vector<int>& ground_classes, int announced_class, int) override {
        const std::vector<int> ground = dedup(ground_classes);
        std::vector<int> x = ground;
        x.push_back(announced_class);
        x = dedup(std::move(x));

        if (!near_separator(x)) return side_move(ground, x);
        if (staircase_separator(ctx_, reps(ground))) return side_move(ground, x);
        auto e2e = end_to_end_twisting(ctx_, idx_, reps(ground));
        if (!e2e) return side_move(ground, x);
        return jump_move(ground, x, *e2e);
    }

    void after_placement(const std::vector<int>& occupied, int round) override {
        const std::vector<int> occ = dedup(occupied);
        auto [u, v] = ctx_.cylinder.edges[cur_];
        const RC a = ctx_.cyl_rc(u), b = ctx_.cyl_rc(v);
        if (a.col != b.col)
            throw invariant_violation_error("grid robber invariant: edge not vertical");
        const auto [lo, hi] = strip_bounds(first_side_);
        if (a.col < lo || a.col > hi)
            throw invariant_violation_error(
                "grid robber invariant: edge outside its boundary strip");
        if (column_touched(occ, a.col))
            throw invariant_violation_error(
                "grid robber invariant: occupied class in the robber's column");
        const int budget = ctx_.j_len() / 3 - 2 * (round + 1);
        for_each_k_subset(reps(occ), ctx_.k(), [&](const std::vector<Vertex>& w) {
            if (auto st = staircase_separator(ctx_, w)) {
                if (distance_to_column(ctx_, boundary_col(), *st) < budget)
                    throw invariant_violation_error(
                        "grid robber invariant: separator closer than the round budget");
            }
        });
    }

  private:
    int boundary_col() const { return first_side_ ? 0 : ctx_.j_len() - 1; }

    std::pair<int, int> strip_bounds(bool first) const {
        const int side = ctx_.k() + 2;
        return first ? std::pair{0, side - 1} : std::pair{ctx_.j_len() - side, ctx_.j_len() - 1};
    }

    int vertical_edge(int col) const {
        auto e = ctx_.cylinder.edge_index(ctx_.cyl_vertex(0, col), ctx_.cyl_vertex(1, col));
        if (!e) throw invariant_violation_error("grid robber: missing vertical edge");
        return *e;
    }

    int edge_col(int e) const { return ctx_.cyl_rc(ctx_.cylinder.edges[e].first).col; }

    bool edge_touches_col(int e, int col) const {
        auto [u, v] = ctx_.cylinder.edges[e];
        return ctx_.cyl_rc(u).col == col || ctx_.cyl_rc(v).col == col;
    }

    // One member per class; any member determines the class's closure.
    std::vector<Vertex> reps(const std::vector<int>& classes) const {
        std::vector<Vertex> out;
        out.reserve(classes.size());
        for (int c : classes) out.push_back(comp_.members[c].front());
        return out;
    }

    bool column_touched(const std::vector<int>& classes, int col) const {
        for (int c : classes)
            for (Vertex v : comp_.members[c])
                if (ctx_.cyl_rc(v).col == col) return true;
        return false;
    }

    std::vector<char> blocked_of(const std::vector<int>& classes) const {
        std::vector<char> blocked(ctx_.cylinder.n, 0);
        for (int c : classes)
            for (Vertex v : comp_.members[c]) blocked[v] = 1;
        return blocked;
    }

    // Some k-subset of X pins a staircase separator within |J|/3 of this side.
    bool near_separator(const std::vector<int>& x) const {
        bool near = false;
        for_each_k_subset(reps(x), ctx_.k(), [&](const std::vector<Vertex>& w) {
            if (near) return;
            if (auto st = staircase_separator(ctx_, w))
                near = distance_to_column(ctx_, boundary_col(), *st) < ctx_.j_len() / 3;
        });
        return near;
    }

    // Simple path starting with edge `from_edge` and ending with edge
    // `to_edge`, interior within columns [lo, hi] and off blocked vertices.
    std::vector<Vertex> connect_edges(int from_edge, int to_edge, int lo, int hi,
                                      const std::vector<char>& blocked) const {
        const OrderedBaseGraph& g = ctx_.cylinder;
        auto [a0, b0] = g.edges[from_edge];
        auto [u0, v0] = g.edges[to_edge];
        const std::array<std::pair<Vertex, Vertex>, 2> starts{{{a0, b0}, {b0, a0}}};
        const std::array<std::pair<Vertex, Vertex>, 2> goals{{{u0, v0}, {v0, u0}}};
        for (auto [a, b] : starts) {
            for (auto [u, v] : goals) {
                if (a == u || a == v || b == v) continue;
                if (blocked[a] || blocked[b] || blocked[u] || blocked[v]) continue;
                if (b == u) return {a, b, v};
                // BFS b -> u avoiding blocked vertices, a, v and the outside
                // of the column strip.
                std::vector<int> parent(g.n, -2);
                parent[a] = -3;
                parent[v] = -3;
                parent[b] = -1;
                std::deque<Vertex> queue{b};
                bool found = false;
                while (!queue.empty() && !found) {
                    const Vertex w = queue.front();
                    queue.pop_front();
                    for (Vertex t : g.adj[w]) {
                        if (parent[t] != -2 || blocked[t]) continue;
                        const int col = ctx_.cyl_rc(t).col;
                        if (col < lo || col > hi) continue;
                        parent[t] = w;
                        if (t == u) {
                            found = true;
                            break;
                        }
                        queue.push_back(t);
                    }
                }
                if (!found) continue;
                std::vector<Vertex> path{v};
                for (Vertex t = u; t != -1; t = parent[t]) path.push_back(t);
                path.push_back(a);
                std::reverse(path.begin(), path.end());
                return path;
            }
        }
        return {};
    }

    Move side_move(const std::vector<int>& ground, const std::vector<int>& x) {
        const int cur_col = edge_col(cur_);
        if (!column_touched(x, cur_col)) return {cur_, empty_twisting(ctx_.cylinder)};
        const auto [lo, hi] = strip_bounds(first_side_);
        std::vector<int> cands;
        for (int c = lo; c <= hi; ++c)
            if (c != cur_col && !column_touched(x, c)) cands.push_back(c);
        std::sort(cands.begin(), cands.end(), [&](int p, int q) {
            const int dp = std::abs(p - cur_col), dq = std::abs(q - cur_col);
            return dp != dq ? dp < dq : p < q;
        });
        const std::vector<char> blocked = blocked_of(ground);
        for (int c : cands) {
            const int target = vertical_edge(c);
            const auto path = connect_edges(cur_, target, lo, hi, blocked);
            if (path.empty()) continue;
            Twisting t = path_twisting(ctx_.cylinder, idx_, path);
            cur_ = target;
            return {target, std::move(t)};
        }
        throw invariant_violation_error(
            "grid robber: no reachable cop-free column on its side");
    }

    Move jump_move(const std::vector<int>& ground, const std::vector<int>& x,
                   const EndToEndResult& e2e) {
        const std::vector<int> tw = twisted_edges(ctx_.cylinder, idx_, e2e.twisting);
        const int far_bound = first_side_ ? ctx_.j_len() - 1 : 0;
        int near_e = -1, far_e = -1;
        for (int e : tw) {
            if (edge_touches_col(e, boundary_col()))
                near_e = e;
            else if (edge_touches_col(e, far_bound))
                far_e = e;
        }
        if (static_cast<int>(tw.size()) != 2 || near_e < 0 || far_e < 0)
            throw invariant_violation_error("grid robber: malformed end-to-end twisting");

        const std::vector<char> blocked = blocked_of(ground);
        Twisting total = e2e.twisting;
        if (near_e != cur_) {
            const auto [lo, hi] = strip_bounds(first_side_);
            const auto p1 = connect_edges(cur_, near_e, lo, hi, blocked);
            if (p1.empty())
                throw invariant_violation_error(
                    "grid robber: approach to the boundary edge blocked");
            total = xor_twistings(total, path_twisting(ctx_.cylinder, idx_, p1));
        }

        const auto [lo, hi] = strip_bounds(!first_side_);
        std::vector<int> cands;
        for (int c = lo; c <= hi; ++c)
            if (!column_touched(x, c)) cands.push_back(c);
        std::sort(cands.begin(), cands.end(), [&](int p, int q) {
            const int dp = std::abs(p - far_bound), dq = std::abs(q - far_bound);
            return dp != dq ? dp < dq : p < q;
        });
        for (int c : cands) {
            const int target = vertical_edge(c);
            Twisting cand = total;
            if (target != far_e) {
                const auto p2 = connect_edges(far_e, target, lo, hi, blocked);
                if (p2.empty()) continue;
                cand = xor_twistings(cand, path_twisting(ctx_.cylinder, idx_, p2));
            }
            first_side_ = !first_side_;
            cur_ = target;
            return {target, std::move(cand)};
        }
        throw invariant_violation_error("grid robber: no landing column beyond the jump");
    }

    const GridContext& ctx_;
    const DirectedEdgeIndex& idx_;
    const BaseCompression& comp_;
    int cur_ = -1;
    bool first_side_ = true;
};

} // namespace

std::unique_ptr<RobberPolicy> make_grid_robber_policy(const GridContext& ctx,
                                                      const DirectedEdgeIndex& idx,
                                                      const BaseCompression& comp) {
    return std::make_unique<GridRobber>(ctx, idx, comp);
}

} // namespace cfiwl
