#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/graph.hpp"

namespace cfiwl {

// Structured compression of the k x |J| cylindrical grid C, analyzed through
// the k x |J*| toroidal grid C* with |J*| = 2|J|. In both graphs every column
// is closed into a vertical k-cycle; C's rows are open paths while C*'s rows
// wrap around, and C is the induced subgraph of C* on columns [0, |J|).
// Row i carries the period q_i = f(k) * p_i * p_{i+1 mod k}, which divides
// |J*|.
//
// Relations (defined on V(C*), restricted to V(C) where needed):
//   equiv_star: same row, column difference divisible by the row period.
//   approx(l):  same row, column difference divisible by l (same l each row).
//   approx:     approx(f(k)).
//   equiv (on V(C) only): equiv_star restricted to the column window
//               [q_i, lambda_i * q_i), where lambda_i is the largest integer
//               with (lambda_i + 1) * q_i <= |J|; all columns outside the
//               window are singletons.

// A torus vertex as (row, column in [0, |J*|)).
struct RC {
    int row = 0;
    int col = 0;
    friend bool operator==(const RC&, const RC&) = default;
    friend auto operator<=>(const RC&, const RC&) = default;
};

struct GridContext {
    GridParams params;
    OrderedBaseGraph cylinder;  // C, vertex ids row * |J| + col
    OrderedBaseGraph torus;     // C*, vertex ids row * |J*| + col

    int j_len() const { return static_cast<int>(params.j_len); }
    int jstar_len() const { return static_cast<int>(params.jstar_len); }
    int k() const { return params.k; }
    int fk() const { return static_cast<int>(params.fk); }

    Vertex cyl_vertex(int row, int col) const { return row * j_len() + col; }
    RC cyl_rc(Vertex v) const { return {v / j_len(), v % j_len()}; }
    Vertex star_vertex(RC u) const { return u.row * jstar_len() + u.col; }
    RC star_rc(Vertex v) const { return {v / jstar_len(), v % jstar_len()}; }
    bool rc_in_cylinder(RC u) const { return u.col < j_len(); }

    int row_period(int row) const { return static_cast<int>(params.row_period(row)); }
    int lambda(int row) const { return static_cast<int>(params.lambda[row]); }
};

GridContext make_grid_context(const GridParams& params);

// Relations. equiv takes cylinder vertex ids; the others take torus
// coordinates (valid for cylinder vertices via cyl_rc since columns agree).
bool equiv(const GridContext& ctx, Vertex a, Vertex b);
bool equiv_star(const GridContext& ctx, RC a, RC b);
bool approx_l(const GridContext& ctx, int l, RC a, RC b);
bool approx(const GridContext& ctx, RC a, RC b);

// The compression induced by equiv on the cylinder.
BaseCompression grid_compression(const GridContext& ctx);

// Per-row class census of equiv: singleton columns before the window,
// singleton columns after it, and full classes of size lambda_i - 1.
struct RowCensus {
    int head_singletons = 0;
    int tail_singletons = 0;
    int full_classes = 0;
    int full_class_size = 0;
    long long total_classes() const {
        return static_cast<long long>(head_singletons) + tail_singletons + full_classes;
    }
};

std::vector<RowCensus> class_census(const GridContext& ctx);

// Closures. Cylinder-side closures return cylinder vertex ids; the
// equiv_star closure of a cylinder set lives on the torus.
std::vector<Vertex> equiv_closure(const GridContext& ctx, const std::vector<Vertex>& w);
std::vector<Vertex> approx_closure_cyl(const GridContext& ctx, int l,
                                       const std::vector<Vertex>& w);
std::vector<RC> equiv_star_closure(const GridContext& ctx, const std::vector<Vertex>& w);

// W (cylinder vertices) separates column 0 from column |J|-1 in C - W.
// Vacuously true when either boundary column is entirely deleted.
bool is_vertical_separator(const GridContext& ctx, const std::vector<Vertex>& w);

// Some cyclic shift z of S (torus vertices) intersected with V(C) is a
// vertical separator of C.
struct ToroidalSeparatorReport {
    bool separates = false;
    int shift = 0; // witness
};
ToroidalSeparatorReport is_toroidal_vertical_separator(const GridContext& ctx,
                                                       const std::vector<RC>& s);

// One vertex per row whose columns are cyclically consecutive in C*
// (including the wrap pair row k-1 / row 0).
bool is_closed_staircase(const GridContext& ctx, const std::vector<RC>& s);

// Pairwise-separator for rows (lower_row, lower_row+1 mod k): the closure of
// W under approx(f(k) * p_{lower_row+1 mod k}) separates column 0 from column
// |J|-1 in the subgraph of C induced on those two rows.
bool is_pairwise_separator(const GridContext& ctx, const std::vector<Vertex>& w,
                           int lower_row);

// Pseudo-separator: pairwise-separator for every row pair, and the closure
// [W] under approx(f(k)) is a vertical separator of C.
struct PseudoSeparatorReport {
    bool pseudo = false;
    bool pairwise_all = false;
    bool closure_vertical = false;
    std::optional<int> failing_lower_row; // least violating row pair, if any
};
PseudoSeparatorReport pseudo_separator_report(const GridContext& ctx,
                                              const std::vector<Vertex>& w);
bool is_pseudo_separator(const GridContext& ctx, const std::vector<Vertex>& w);

// The k-vertex toroidal vertical separator S_W inside [W]_equiv_star, unique
// when it exists (nullopt otherwise; also nullopt when |W| too small to cover
// every row). Members are returned row by row.
std::optional<std::vector<RC>> staircase_separator(const GridContext& ctx,
                                                   const std::vector<Vertex>& w);

// Exact distance in C* between a full column (all rows) and a torus vertex:
// the cyclic column distance. dist to a set takes the minimum over members.
int torus_column_distance(const GridContext& ctx, int col_a, int col_b);
int distance_to_column(const GridContext& ctx, int boundary_col, const std::vector<RC>& s);

// ---- Twisting paths in C ----------------------------------------------------

// A path u_1, ..., u_m induces the twisting {(u_i, u_{i+1}), (u_i, u_{i-1}) :
// 1 < i < m}: it twists exactly the first and last path edge and fixes every
// vertex off the interior (including both path endpoints).
Twisting path_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                       const std::vector<Vertex>& path);

// Whole cop-free row: columns 0..|J|-1 of the row (trivially row-periodic).
std::vector<Vertex> row_path(const GridContext& ctx, int row);

// Weave path for a pairwise violation at rows (i, i+1) witnessed by the
// residue j of W's row-i vertex (mod q = f(k) * p_{i+1}): row-i vertices at
// columns with (j - col) mod q != 0 and row-(i+1) vertices at columns with
// (j - col) mod q in {q-1, 0, 1}, ordered as the induced path from column 0
// to column |J|-1.
std::vector<Vertex> weave_path(const GridContext& ctx, int lower_row, int residue);

// End-to-end twisting: a compressible twisting that twists exactly one edge
// incident to column 0 and one incident to column |J|-1 and fixes every
// vertex of [W]_equiv. Exists iff W (at most k vertices) is not a
// pseudo-separator; nullopt when W is one.
struct EndToEndResult {
    Twisting twisting;
    std::vector<Vertex> path;  // supporting path; first/last vertices lie in
                               // the boundary columns
    int branch = 0;            // 1 cop-free row, 2 weave, 3 shifted closure
};
std::optional<EndToEndResult> end_to_end_twisting(const GridContext& ctx,
                                                  const DirectedEdgeIndex& idx,
                                                  const std::vector<Vertex>& w);

} // namespace cfiwl
