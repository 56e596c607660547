#include "cfiwl/grid_compression.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "cfiwl/errors.hpp"

namespace cfiwl {

namespace {

void check_cyl_vertices(const GridContext& ctx, const std::vector<Vertex>& w,
                        const char* who) {
    for (Vertex v : w)
        if (v < 0 || v >= ctx.cylinder.n)
            throw invalid_input_error(std::string(who) + ": vertex out of range");
}

void check_rc(const GridContext& ctx, const RC& u, const char* who) {
    if (u.row < 0 || u.row >= ctx.k() || u.col < 0 || u.col >= ctx.jstar_len())
        throw invalid_input_error(std::string(who) + ": coordinate out of range");
}

int floor_mod(long long value, long long modulus) {
    return static_cast<int>(((value % modulus) + modulus) % modulus);
}

// Start and one-past-end column of the row's equivalence window [q, lambda*q);
// empty when lambda < 2.
std::pair<int, int> window_of(const GridContext& ctx, int row) {
    const long long q = ctx.params.row_period(row);
    const long long lambda = ctx.params.lambda[static_cast<std::size_t>(row)];
    if (lambda < 2) return {0, 0};
    return {static_cast<int>(q), static_cast<int>(lambda * q)};
}

// Per-row column blockage of [w]_approx(l), restricted to the cylinder.
std::vector<std::vector<char>> blocked_columns(const GridContext& ctx, int l,
                                               const std::vector<Vertex>& w) {
    std::vector<std::vector<char>> blocked(
        static_cast<std::size_t>(ctx.k()),
        std::vector<char>(static_cast<std::size_t>(ctx.j_len()), 0));
    for (Vertex v : w) {
        const RC rc = ctx.cyl_rc(v);
        for (int c = rc.col % l; c < ctx.j_len(); c += l)
            blocked[static_cast<std::size_t>(rc.row)][static_cast<std::size_t>(c)] = 1;
    }
    return blocked;
}

// BFS over the cylinder minus `blocked`, from the free vertices of column 0.
// Returns the predecessor array (-2 unreached, -1 source).
std::vector<int> cylinder_bfs(const GridContext& ctx, const std::vector<char>& blocked) {
    std::vector<int> pred(static_cast<std::size_t>(ctx.cylinder.n), -2);
    std::queue<Vertex> queue;
    for (int r = 0; r < ctx.k(); ++r) {
        const Vertex v = ctx.cyl_vertex(r, 0);
        if (!blocked[static_cast<std::size_t>(v)]) {
            pred[static_cast<std::size_t>(v)] = -1;
            queue.push(v);
        }
    }
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop();
        for (Vertex u : ctx.cylinder.adj[static_cast<std::size_t>(v)])
            if (!blocked[static_cast<std::size_t>(u)] &&
                pred[static_cast<std::size_t>(u)] == -2) {
                pred[static_cast<std::size_t>(u)] = v;
                queue.push(u);
            }
    }
    return pred;
}

std::vector<char> as_blocked_flags(const GridContext& ctx, const std::vector<Vertex>& w) {
    std::vector<char> blocked(static_cast<std::size_t>(ctx.cylinder.n), 0);
    for (Vertex v : w) blocked[static_cast<std::size_t>(v)] = 1;
    return blocked;
}

// Walks a vertex set known to form a simple path from column 0 to column
// |J|-1; in-set neighbors are the row neighbors and the vertical partner.
std::vector<Vertex> walk_column_spanning_path(const GridContext& ctx,
                                              const std::set<Vertex>& members,
                                              const char* who) {
    auto in_set_neighbors = [&](Vertex v) {
        std::vector<Vertex> out;
        for (Vertex u : ctx.cylinder.adj[static_cast<std::size_t>(v)])
            if (members.count(u)) out.push_back(u);
        return out;
    };
    Vertex start = -1;
    for (Vertex v : members)
        if (in_set_neighbors(v).size() == 1 && ctx.cyl_rc(v).col == 0) {
            start = v;
            break;
        }
    if (start == -1)
        throw invariant_violation_error(std::string(who) +
                                        ": no degree-one vertex in column 0");
    std::vector<Vertex> path{start};
    std::set<Vertex> visited{start};
    while (true) {
        Vertex next = -1;
        int options = 0;
        for (Vertex u : in_set_neighbors(path.back()))
            if (!visited.count(u)) {
                next = u;
                ++options;
            }
        if (options == 0) break;
        if (options > 1)
            throw invariant_violation_error(std::string(who) + ": branching vertex set");
        path.push_back(next);
        visited.insert(next);
    }
    if (visited.size() != members.size() || ctx.cyl_rc(path.back()).col != ctx.j_len() - 1)
        throw invariant_violation_error(std::string(who) +
                                        ": vertex set is not a spanning boundary path");
    return path;
}

} // namespace

GridContext make_grid_context(const GridParams& params) {
    if (params.k < 3) throw invalid_input_error("make_grid_context: k must be at least 3");
    if (static_cast<long long>(params.k) * params.jstar_len > 50'000'000LL)
        throw resource_cap_error("make_grid_context: grid too large");
    GridContext ctx;
    ctx.params = params;
    ctx.cylinder = make_cylinder(params.k, static_cast<int>(params.j_len));
    ctx.torus = make_torus(params.k, static_cast<int>(params.jstar_len));
    return ctx;
}

bool equiv(const GridContext& ctx, Vertex a, Vertex b) {
    check_cyl_vertices(ctx, {a, b}, "equiv");
    if (a == b) return true;
    const RC ra = ctx.cyl_rc(a), rb = ctx.cyl_rc(b);
    if (ra.row != rb.row) return false;
    const auto [lo, hi] = window_of(ctx, ra.row);
    if (ra.col < lo || ra.col >= hi || rb.col < lo || rb.col >= hi) return false;
    return (ra.col - rb.col) % ctx.row_period(ra.row) == 0;
}

bool equiv_star(const GridContext& ctx, RC a, RC b) {
    check_rc(ctx, a, "equiv_star");
    check_rc(ctx, b, "equiv_star");
    return a.row == b.row && (a.col - b.col) % ctx.row_period(a.row) == 0;
}

bool approx_l(const GridContext& ctx, int l, RC a, RC b) {
    if (l <= 0) throw invalid_input_error("approx_l: modulus must be positive");
    check_rc(ctx, a, "approx_l");
    check_rc(ctx, b, "approx_l");
    return a.row == b.row && (a.col - b.col) % l == 0;
}

bool approx(const GridContext& ctx, RC a, RC b) { return approx_l(ctx, ctx.fk(), a, b); }

BaseCompression grid_compression(const GridContext& ctx) {
    std::vector<std::vector<Vertex>> classes;
    for (int r = 0; r < ctx.k(); ++r) {
        const auto [lo, hi] = window_of(ctx, r);
        const int q = ctx.row_period(r);
        for (int c = 0; c < ctx.j_len(); ++c) {
            if (c < lo || c >= hi) {
                classes.push_back({ctx.cyl_vertex(r, c)});
            } else if (c < lo + q) {
                std::vector<Vertex> cls;
                for (int m = c; m < hi; m += q) cls.push_back(ctx.cyl_vertex(r, m));
                classes.push_back(std::move(cls));
            } // later window columns already belong to an emitted class
        }
    }
    return make_compression(ctx.cylinder, classes);
}

std::vector<RowCensus> class_census(const GridContext& ctx) {
    std::vector<RowCensus> census;
    for (int r = 0; r < ctx.k(); ++r) {
        const auto [lo, hi] = window_of(ctx, r);
        const int q = ctx.row_period(r);
        RowCensus row;
        row.head_singletons = std::min(q, ctx.j_len());
        row.full_classes = hi > lo ? q : 0;
        row.full_class_size = hi > lo ? (hi - lo) / q : 0;
        row.tail_singletons =
            ctx.j_len() - row.head_singletons - row.full_classes * row.full_class_size;
        census.push_back(row);
    }
    return census;
}

std::vector<Vertex> equiv_closure(const GridContext& ctx, const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "equiv_closure");
    std::set<Vertex> out;
    for (Vertex v : w) {
        out.insert(v);
        const RC rc = ctx.cyl_rc(v);
        const auto [lo, hi] = window_of(ctx, rc.row);
        if (rc.col < lo || rc.col >= hi) continue;
        const int q = ctx.row_period(rc.row);
        for (int c = lo + (rc.col - lo) % q; c < hi; c += q)
            out.insert(ctx.cyl_vertex(rc.row, c));
    }
    return {out.begin(), out.end()};
}

std::vector<Vertex> approx_closure_cyl(const GridContext& ctx, int l,
                                       const std::vector<Vertex>& w) {
    if (l <= 0) throw invalid_input_error("approx_closure_cyl: modulus must be positive");
    check_cyl_vertices(ctx, w, "approx_closure_cyl");
    std::set<Vertex> out;
    for (Vertex v : w) {
        const RC rc = ctx.cyl_rc(v);
        for (int c = rc.col % l; c < ctx.j_len(); c += l)
            out.insert(ctx.cyl_vertex(rc.row, c));
    }
    return {out.begin(), out.end()};
}

std::vector<RC> equiv_star_closure(const GridContext& ctx, const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "equiv_star_closure");
    std::set<RC> out;
    for (Vertex v : w) {
        const RC rc = ctx.cyl_rc(v);
        const int q = ctx.row_period(rc.row);
        for (int c = rc.col % q; c < ctx.jstar_len(); c += q)
            out.insert(RC{rc.row, c});
    }
    return {out.begin(), out.end()};
}

bool is_vertical_separator(const GridContext& ctx, const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "is_vertical_separator");
    const std::vector<int> pred = cylinder_bfs(ctx, as_blocked_flags(ctx, w));
    for (int r = 0; r < ctx.k(); ++r) {
        const Vertex v = ctx.cyl_vertex(r, ctx.j_len() - 1);
        if (pred[static_cast<std::size_t>(v)] != -2) return false;
    }
    return true;
}

ToroidalSeparatorReport is_toroidal_vertical_separator(const GridContext& ctx,
                                                       const std::vector<RC>& s) {
    for (const RC& u : s) check_rc(ctx, u, "is_toroidal_vertical_separator");
    for (int z = 0; z < ctx.jstar_len(); ++z) {
        std::vector<Vertex> shifted;
        for (const RC& u : s) {
            const int c = (u.col + z) % ctx.jstar_len();
            if (c < ctx.j_len()) shifted.push_back(ctx.cyl_vertex(u.row, c));
        }
        if (is_vertical_separator(ctx, shifted)) return {true, z};
    }
    return {false, 0};
}

bool is_closed_staircase(const GridContext& ctx, const std::vector<RC>& s) {
    for (const RC& u : s) check_rc(ctx, u, "is_closed_staircase");
    if (static_cast<int>(s.size()) != ctx.k()) return false;
    std::vector<int> col_of(static_cast<std::size_t>(ctx.k()), -1);
    for (const RC& u : s) {
        if (col_of[static_cast<std::size_t>(u.row)] != -1) return false;
        col_of[static_cast<std::size_t>(u.row)] = u.col;
    }
    for (int r = 0; r < ctx.k(); ++r) {
        const int d = floor_mod(col_of[static_cast<std::size_t>(r)] -
                                    col_of[static_cast<std::size_t>((r + 1) % ctx.k())],
                                ctx.jstar_len());
        if (d != 0 && d != 1 && d != ctx.jstar_len() - 1) return false;
    }
    return true;
}

bool is_pairwise_separator(const GridContext& ctx, const std::vector<Vertex>& w,
                           int lower_row) {
    if (lower_row < 0 || lower_row >= ctx.k())
        throw invalid_input_error("is_pairwise_separator: row out of range");
    check_cyl_vertices(ctx, w, "is_pairwise_separator");
    const int upper_row = (lower_row + 1) % ctx.k();
    const int q = ctx.fk() * static_cast<int>(
                                 ctx.params.periods[static_cast<std::size_t>(upper_row)]);
    const auto blocked = blocked_columns(ctx, q, w);
    const auto& low = blocked[static_cast<std::size_t>(lower_row)];
    const auto& up = blocked[static_cast<std::size_t>(upper_row)];
    // A two-row strip is cut exactly when some blocked column of one row is at
    // distance at most one from a blocked column of the other.
    for (int c = 0; c < ctx.j_len(); ++c) {
        if (!low[static_cast<std::size_t>(c)]) continue;
        if (up[static_cast<std::size_t>(c)] ||
            (c > 0 && up[static_cast<std::size_t>(c - 1)]) ||
            (c + 1 < ctx.j_len() && up[static_cast<std::size_t>(c + 1)]))
            return true;
    }
    return false;
}

PseudoSeparatorReport pseudo_separator_report(const GridContext& ctx,
                                              const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "pseudo_separator_report");
    PseudoSeparatorReport rep;
    rep.pairwise_all = true;
    for (int i = 0; i < ctx.k(); ++i)
        if (!is_pairwise_separator(ctx, w, i)) {
            rep.pairwise_all = false;
            if (!rep.failing_lower_row) rep.failing_lower_row = i;
        }
    rep.closure_vertical =
        is_vertical_separator(ctx, approx_closure_cyl(ctx, ctx.fk(), w));
    rep.pseudo = rep.pairwise_all && rep.closure_vertical;
    return rep;
}

bool is_pseudo_separator(const GridContext& ctx, const std::vector<Vertex>& w) {
    return pseudo_separator_report(ctx, w).pseudo;
}

std::optional<std::vector<RC>> staircase_separator(const GridContext& ctx,
                                                   const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "staircase_separator");
    const int k = ctx.k(), js = ctx.jstar_len();
    // Torus columns of [w]_equiv_star per row.
    std::vector<std::set<int>> columns(static_cast<std::size_t>(k));
    for (Vertex v : w) {
        const RC rc = ctx.cyl_rc(v);
        const int q = ctx.row_period(rc.row);
        for (int c = rc.col % q; c < js; c += q)
            columns[static_cast<std::size_t>(rc.row)].insert(c);
    }
    for (const auto& cols : columns)
        if (cols.empty()) return std::nullopt;

    // Depth-first chain extension: the column of each next row must be
    // cyclically within one of the previous row's column.
    std::vector<std::vector<int>> solutions;
    std::vector<int> chain(static_cast<std::size_t>(k), -1);
    auto extend = [&](auto&& self, int row) -> void {
        if (row == k) {
            const int d = floor_mod(chain[0] - chain[static_cast<std::size_t>(k - 1)], js);
            if (d == 0 || d == 1 || d == js - 1) solutions.push_back(chain);
            return;
        }
        const int prev = chain[static_cast<std::size_t>(row - 1)];
        for (int d = -1; d <= 1; ++d) {
            const int c = floor_mod(prev + d, js);
            if (columns[static_cast<std::size_t>(row)].count(c)) {
                chain[static_cast<std::size_t>(row)] = c;
                self(self, row + 1);
            }
        }
    };
    for (int c0 : columns[0]) {
        chain[0] = c0;
        extend(extend, 1);
    }
    if (solutions.empty()) return std::nullopt;
    if (solutions.size() > 1)
        throw invariant_violation_error(
            "staircase_separator: multiple k-vertex separators in one closure");
    std::vector<RC> out;
    for (int r = 0; r < k; ++r) out.push_back(RC{r, solutions[0][static_cast<std::size_t>(r)]});
    return out;
}

int torus_column_distance(const GridContext& ctx, int col_a, int col_b) {
    if (col_a < 0 || col_a >= ctx.jstar_len() || col_b < 0 || col_b >= ctx.jstar_len())
        throw invalid_input_error("torus_column_distance: column out of range");
    const int d = col_a < col_b ? col_b - col_a : col_a - col_b;
    return std::min(d, ctx.jstar_len() - d);
}

int distance_to_column(const GridContext& ctx, int boundary_col, const std::vector<RC>& s) {
    for (const RC& u : s) check_rc(ctx, u, "distance_to_column");
    int best = -1;
    for (const RC& u : s) {
        const int d = torus_column_distance(ctx, boundary_col, u.col);
        if (best == -1 || d < best) best = d;
    }
    return best;
}

Twisting path_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                       const std::vector<Vertex>& path) {
    if (path.size() < 3)
        throw invalid_input_error("path_twisting: need at least three vertices");
    std::set<Vertex> seen;
    for (Vertex v : path) {
        if (v < 0 || v >= g.n)
            throw invalid_input_error("path_twisting: vertex out of range");
        if (!seen.insert(v).second)
            throw invalid_input_error("path_twisting: repeated vertex");
    }
    for (std::size_t i = 1; i < path.size(); ++i)
        if (!g.adjacent(path[i - 1], path[i]))
            throw invalid_input_error("path_twisting: consecutive vertices not adjacent");
    Twisting t = empty_twisting(g);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        t.member[static_cast<std::size_t>(idx.id_of(path[i], path[i + 1]))] = 1;
        t.member[static_cast<std::size_t>(idx.id_of(path[i], path[i - 1]))] = 1;
    }
    return t;
}

std::vector<Vertex> row_path(const GridContext& ctx, int row) {
    if (row < 0 || row >= ctx.k()) throw invalid_input_error("row_path: row out of range");
    std::vector<Vertex> path;
    for (int c = 0; c < ctx.j_len(); ++c) path.push_back(ctx.cyl_vertex(row, c));
    return path;
}

std::vector<Vertex> weave_path(const GridContext& ctx, int lower_row, int residue) {
    if (lower_row < 0 || lower_row >= ctx.k())
        throw invalid_input_error("weave_path: row out of range");
    const int upper_row = (lower_row + 1) % ctx.k();
    const int q = ctx.fk() * static_cast<int>(
                                 ctx.params.periods[static_cast<std::size_t>(upper_row)]);
    const int j = floor_mod(residue, q);
    std::set<Vertex> members;
    for (int c = 0; c < ctx.j_len(); ++c) {
        const int d = floor_mod(j - c, q);
        if (d != 0) members.insert(ctx.cyl_vertex(lower_row, c));
        if (d <= 1 || d == q - 1) members.insert(ctx.cyl_vertex(upper_row, c));
    }
    return walk_column_spanning_path(ctx, members, "weave_path");
}

namespace {

// Shortest boundary-to-boundary path through the free vertices, or nullopt.
std::optional<std::vector<Vertex>> crossing_path(const GridContext& ctx,
                                                 const std::vector<char>& blocked) {
    const std::vector<int> pred = cylinder_bfs(ctx, blocked);
    for (int r = 0; r < ctx.k(); ++r) {
        Vertex v = ctx.cyl_vertex(r, ctx.j_len() - 1);
        if (pred[static_cast<std::size_t>(v)] == -2) continue;
        std::vector<Vertex> path;
        for (; v != -1; v = pred[static_cast<std::size_t>(v)]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
    }
    return std::nullopt;
}

// Branch 2 fallback for the toy corner where the row period equals |J|: the
// literal two-row crossing exists even though the residues are cyclically
// adjacent, so a weave would collide with the closure. Restricting the BFS to
// the two rows keeps the path inside the pair.
std::vector<Vertex> two_row_crossing(const GridContext& ctx, int lower_row,
                                     const std::vector<Vertex>& w) {
    const int upper_row = (lower_row + 1) % ctx.k();
    const int q = ctx.fk() * static_cast<int>(
                                 ctx.params.periods[static_cast<std::size_t>(upper_row)]);
    const auto columns = blocked_columns(ctx, q, w);
    std::vector<char> blocked(static_cast<std::size_t>(ctx.cylinder.n), 1);
    for (int r : {lower_row, upper_row})
        for (int c = 0; c < ctx.j_len(); ++c)
            blocked[static_cast<std::size_t>(ctx.cyl_vertex(r, c))] =
                columns[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    const auto path = crossing_path(ctx, blocked);
    if (!path)
        throw invariant_violation_error(
            "end_to_end_twisting: failing row pair admits no two-row crossing");
    return *path;
}

// Periodization of branch 3: the crossing segment between a free column j and
// column j + f, chained by vertical arcs at the free columns, shifted by all
// multiples of f and trimmed to the cylinder.
std::vector<Vertex> periodized_crossing(const GridContext& ctx,
                                        const std::vector<Vertex>& bfs_path, int j) {
    const int f = ctx.fk(), jl = ctx.j_len(), k = ctx.k();
    int b = -1;
    for (std::size_t i = 0; i < bfs_path.size(); ++i)
        if (ctx.cyl_rc(bfs_path[i]).col == j + f) {
            b = static_cast<int>(i);
            break;
        }
    if (b < 0)
        throw invariant_violation_error("end_to_end_twisting: crossing misses column j+f");
    int a = -1;
    for (int i = b; i >= 0; --i)
        if (ctx.cyl_rc(bfs_path[static_cast<std::size_t>(i)]).col == j) {
            a = i;
            break;
        }
    if (a < 0)
        throw invariant_violation_error("end_to_end_twisting: crossing misses column j");
    // Segment cols live in [j, j+f]; interior strictly inside.
    std::vector<RC> segment;
    for (int i = a; i <= b; ++i)
        segment.push_back(ctx.cyl_rc(bfs_path[static_cast<std::size_t>(i)]));
    const int row_in = segment.front().row, row_out = segment.back().row;

    // One period: the vertical arc at the entry column from the previous
    // copy's exit row up to this copy's entry row, then the segment without
    // its exit vertex (the next copy's arc starts with it). Arc entries carry
    // column offset 0; segment entries keep their offset from the entry
    // column.
    std::vector<RC> period;
    std::size_t arc_len = 0;
    for (int r = row_out; r != row_in; r = (r + 1) % k) {
        period.push_back(RC{r, 0});
        ++arc_len;
    }
    for (std::size_t i = 0; i + 1 < segment.size(); ++i) period.push_back(segment[i]);
    std::vector<std::pair<int, int>> chain; // (row, absolute column), may leave [0, jl)
    const int z_lo = -(j / f + 2), z_hi = (jl - j) / f + 2;
    for (int z = z_lo; z <= z_hi; ++z) {
        const int base = j + z * f;
        for (std::size_t i = 0; i < period.size(); ++i) {
            const int col = i < arc_len ? base : base + (period[i].col - j);
            chain.emplace_back(period[i].row, col);
        }
    }
    // Close with the final exit vertex of the last copy.
    chain.emplace_back(row_out, j + (z_hi + 1) * f);

    int last_neg = -1, first_over = static_cast<int>(chain.size());
    for (int i = 0; i < static_cast<int>(chain.size()); ++i) {
        if (chain[static_cast<std::size_t>(i)].second < 0) last_neg = i;
        if (chain[static_cast<std::size_t>(i)].second >= jl && i < first_over)
            first_over = i;
    }
    std::vector<Vertex> out;
    for (int i = last_neg + 1; i < first_over; ++i)
        out.push_back(ctx.cyl_vertex(chain[static_cast<std::size_t>(i)].first,
                                     chain[static_cast<std::size_t>(i)].second));
    if (out.empty() || ctx.cyl_rc(out.front()).col != 0 ||
        ctx.cyl_rc(out.back()).col != jl - 1)
        throw invariant_violation_error("end_to_end_twisting: trimmed chain is not boundary to boundary");
    return out;
}

} // namespace

std::optional<EndToEndResult> end_to_end_twisting(const GridContext& ctx,
                                                  const DirectedEdgeIndex& idx,
                                                  const std::vector<Vertex>& w) {
    check_cyl_vertices(ctx, w, "end_to_end_twisting");
    std::vector<Vertex> distinct = w;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (static_cast<int>(distinct.size()) > ctx.k())
        throw invalid_input_error("end_to_end_twisting: more vertices than rows");

    std::vector<std::vector<int>> cols_by_row(static_cast<std::size_t>(ctx.k()));
    for (Vertex v : distinct) {
        const RC rc = ctx.cyl_rc(v);
        cols_by_row[static_cast<std::size_t>(rc.row)].push_back(rc.col);
    }

    // Branch 1: a row without cops carries a whole-row path.
    for (int r = 0; r < ctx.k(); ++r)
        if (cols_by_row[static_cast<std::size_t>(r)].empty()) {
            const std::vector<Vertex> path = row_path(ctx, r);
            return EndToEndResult{path_twisting(ctx.cylinder, idx, path), path, 1};
        }

    // Every row holds exactly one cop from here on.
    for (int i = 0; i < ctx.k(); ++i) {
        if (is_pairwise_separator(ctx, distinct, i)) continue;
        const int upper = (i + 1) % ctx.k();
        const int q = ctx.fk() *
                      static_cast<int>(ctx.params.periods[static_cast<std::size_t>(upper)]);
        const int ci = cols_by_row[static_cast<std::size_t>(i)][0];
        const int cu = cols_by_row[static_cast<std::size_t>(upper)][0];
        const int d = floor_mod(ci - cu, q);
        const std::vector<Vertex> path = (d == 0 || d == 1 || d == q - 1)
                                             ? two_row_crossing(ctx, i, distinct)
                                             : weave_path(ctx, i, ci);
        return EndToEndResult{path_twisting(ctx.cylinder, idx, path), path, 2};
    }

    // Pairwise separation everywhere: decided by the approx(f) closure.
    const std::vector<Vertex> closure = approx_closure_cyl(ctx, ctx.fk(), distinct);
    if (is_vertical_separator(ctx, closure)) return std::nullopt;

    // Branch 3: periodize a crossing of the non-separating closure around a
    // cop-free column residue.
    std::vector<char> used(static_cast<std::size_t>(ctx.fk()), 0);
    for (Vertex v : distinct)
        used[static_cast<std::size_t>(ctx.cyl_rc(v).col % ctx.fk())] = 1;
    int j = 0;
    while (used[static_cast<std::size_t>(j)]) ++j;
    const auto bfs_path = crossing_path(ctx, as_blocked_flags(ctx, closure));
    if (!bfs_path)
        throw invariant_violation_error(
            "end_to_end_twisting: non-separating closure admits no crossing");
    const std::vector<Vertex> path = periodized_crossing(ctx, *bfs_path, j);
    return EndToEndResult{path_twisting(ctx.cylinder, idx, path), path, 3};
}

} // namespace cfiwl
