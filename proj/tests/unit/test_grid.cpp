#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/errors.hpp"
#include "cfiwl/grid_compression.hpp"
#include "cfiwl/rng.hpp"
#include "frozen.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfiwl;

namespace {

GridContext toy123() { return make_grid_context(toy_params(3, {1, 2, 3})); }
GridContext toy235() { return make_grid_context(toy_params(3, {2, 3, 5})); }

// Random cylinder vertex set; mixes one-per-row and arbitrary shapes so both
// separator-like and degenerate inputs occur.
std::vector<Vertex> random_w(Rng& rng, const GridContext& ctx, int max_size) {
    std::vector<Vertex> w;
    const int jl = ctx.j_len();
    if (rng.next_below(2) == 0) {
        // One per row, columns either aligned, consecutive or random.
        const int mode = static_cast<int>(rng.next_below(3));
        const int base = static_cast<int>(rng.next_below(jl));
        for (int r = 0; r < ctx.k(); ++r) {
            int c;
            if (mode == 0) c = base;
            else if (mode == 1) c = (base + static_cast<int>(rng.next_below(2 * r + 1))) % jl;
            else c = static_cast<int>(rng.next_below(jl));
            w.push_back(ctx.cyl_vertex(r, c));
        }
    } else {
        const int size = static_cast<int>(rng.next_below(max_size + 1));
        std::set<Vertex> s;
        while (static_cast<int>(s.size()) < size)
            s.insert(static_cast<Vertex>(rng.next_below(ctx.cylinder.n)));
        w.assign(s.begin(), s.end());
    }
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
}

// Definitional restatement of equiv used as an independent check.
bool equiv_by_hand(const GridContext& ctx, Vertex a, Vertex b) {
    if (a == b) return true;
    const RC ra = ctx.cyl_rc(a), rb = ctx.cyl_rc(b);
    if (ra.row != rb.row) return false;
    const long long q = ctx.params.row_period(ra.row);
    const long long lo = q, hi = ctx.params.lambda[ra.row] * q;
    if (ra.col < lo || ra.col >= hi || rb.col < lo || rb.col >= hi) return false;
    return (ra.col - rb.col) % q == 0;
}

void check_census(const GridContext& ctx,
                  const std::array<frozen::RowCensusExpect, 3>& expect,
                  long long expect_total) {
    const std::vector<RowCensus> census = class_census(ctx);
    REQUIRE(census.size() == 3);
    long long total = 0;
    for (int r = 0; r < 3; ++r) {
        CAPTURE(r);
        CHECK(census[r].head_singletons == expect[r].head);
        CHECK(census[r].tail_singletons == expect[r].tail);
        CHECK(census[r].full_classes == expect[r].full);
        CHECK(census[r].full_class_size == expect[r].full_size);
        total += census[r].total_classes();
    }
    CHECK(total == expect_total);

    // Recount literally from the compression.
    const BaseCompression comp = grid_compression(ctx);
    CHECK(static_cast<long long>(comp.members.size()) == total);
    std::vector<RowCensus> seen(3);
    for (const auto& cls : comp.members) {
        const RC rc = ctx.cyl_rc(cls[0]);
        if (cls.size() == 1) {
            const long long q = ctx.params.row_period(rc.row);
            if (rc.col < q) ++seen[rc.row].head_singletons;
            else ++seen[rc.row].tail_singletons;
        } else {
            ++seen[rc.row].full_classes;
            if (seen[rc.row].full_class_size == 0)
                seen[rc.row].full_class_size = static_cast<int>(cls.size());
            CHECK(static_cast<int>(cls.size()) == census[rc.row].full_class_size);
        }
    }
    for (int r = 0; r < 3; ++r) {
        CAPTURE(r);
        CHECK(seen[r].head_singletons == census[r].head_singletons);
        CHECK(seen[r].tail_singletons == census[r].tail_singletons);
        CHECK(seen[r].full_classes == census[r].full_classes);
    }
}

} // namespace

TEST_CASE("context shape and coordinate round-trips") {
    const GridContext ctx = toy123();
    CHECK(ctx.k() == 3);
    CHECK(ctx.fk() == 8);
    CHECK(ctx.j_len() == frozen::toy123_j_len);
    CHECK(ctx.jstar_len() == frozen::toy123_jstar_len);
    CHECK(ctx.cylinder.n == 3 * 24);
    CHECK(ctx.torus.n == 3 * 48);
    for (int r = 0; r < 3; ++r)
        CHECK(ctx.row_period(r) == frozen::toy123_row_periods[static_cast<std::size_t>(r)]);

    for (Vertex v = 0; v < ctx.cylinder.n; ++v) {
        const RC rc = ctx.cyl_rc(v);
        CHECK(ctx.cyl_vertex(rc.row, rc.col) == v);
        CHECK(ctx.cylinder.coords[v] == std::pair<int, int>{rc.row, rc.col});
        CHECK(ctx.rc_in_cylinder(rc) == true);
        CHECK(ctx.star_rc(ctx.star_vertex(rc)) == rc);
        // Cylinder degrees: 3 on the boundary columns, 4 inside.
        const int want = (rc.col == 0 || rc.col == ctx.j_len() - 1) ? 3 : 4;
        CHECK(ctx.cylinder.degree(v) == want);
    }
    for (Vertex v = 0; v < ctx.torus.n; ++v) CHECK(ctx.torus.degree(v) == 4);
    CHECK(!ctx.rc_in_cylinder(RC{0, ctx.j_len()}));
    CHECK(!ctx.rc_in_cylinder(RC{0, ctx.jstar_len() - 1}));
}

TEST_CASE("frozen parameters at full scale") {
    const GridParams p = build_params(frozen::grid_k, frozen::grid_w);
    CHECK(p.fk == frozen::grid_fk);
    CHECK(std::vector<long long>(p.periods) ==
          std::vector<long long>(frozen::grid_periods.begin(), frozen::grid_periods.end()));
    CHECK(p.j_len == frozen::grid_j_len);
    CHECK(p.jstar_len == frozen::grid_jstar_len);
    for (int r = 0; r < 3; ++r) {
        CHECK(p.row_period(r) == frozen::grid_row_periods[static_cast<std::size_t>(r)]);
        CHECK(p.lambda[static_cast<std::size_t>(r)] ==
              frozen::grid_lambda[static_cast<std::size_t>(r)]);
    }

    const GridContext ctx = make_grid_context(p);
    check_census(ctx, frozen::grid_census, frozen::grid_total_classes);

    const BaseCompression comp = grid_compression(ctx);
    CHECK(compressed_size(ctx.cylinder, comp) == frozen::grid_compressed_size);
    CHECK(compressed_size(ctx.cylinder, discrete_compression(ctx.cylinder)) ==
          frozen::grid_cfi_size);
}

TEST_CASE("frozen parameters at midi and toy scale") {
    const GridContext midi = make_grid_context(
        toy_params(3, {frozen::midi_periods.begin(), frozen::midi_periods.end()}));
    CHECK(midi.j_len() == frozen::midi_j_len);
    CHECK(midi.jstar_len() == frozen::midi_jstar_len);
    for (int r = 0; r < 3; ++r) {
        CHECK(midi.row_period(r) == frozen::midi_row_periods[static_cast<std::size_t>(r)]);
        CHECK(midi.lambda(r) == frozen::midi_lambda[static_cast<std::size_t>(r)]);
    }
    check_census(midi, frozen::midi_census, frozen::midi_total_classes);

    // Both toys have empty windows: the compression is discrete.
    for (const GridContext& ctx : {toy123(), toy235()}) {
        const BaseCompression comp = grid_compression(ctx);
        CHECK(static_cast<int>(comp.members.size()) == ctx.cylinder.n);
        const std::vector<RowCensus> census = class_census(ctx);
        for (const RowCensus& rc : census) {
            CHECK(rc.full_classes == 0);
            CHECK(rc.head_singletons + rc.tail_singletons == ctx.j_len());
        }
    }
}

TEST_CASE("equivalence relations match their definitions") {
    const GridContext ctx = toy123();
    // Exhaustive on the toy cylinder: only reflexive pairs (discrete).
    for (Vertex a = 0; a < ctx.cylinder.n; ++a)
        for (Vertex b = 0; b < ctx.cylinder.n; ++b) {
            CHECK(equiv(ctx, a, b) == (a == b));
            CHECK(equiv(ctx, a, b) == equiv_by_hand(ctx, a, b));
        }

    // equiv_star on the toy torus: same row and column difference mod q.
    for (int ra = 0; ra < 3; ++ra)
        for (int ca = 0; ca < ctx.jstar_len(); ca += 5)
            for (int rb = 0; rb < 3; ++rb)
                for (int cb = 0; cb < ctx.jstar_len(); ++cb) {
                    const bool want =
                        ra == rb && (ca - cb) % ctx.row_period(ra) == 0;
                    CHECK(equiv_star(ctx, {ra, ca}, {rb, cb}) == want);
                    const bool want8 = ra == rb && (ca - cb) % 8 == 0;
                    CHECK(approx(ctx, {ra, ca}, {rb, cb}) == want8);
                    CHECK(approx_l(ctx, 8, {ra, ca}, {rb, cb}) == want8);
                    CHECK(approx_l(ctx, 3, {ra, ca}, {rb, cb}) ==
                          (ra == rb && (ca - cb) % 3 == 0));
                }

    // Midi has real windows: spot-check a full class and its boundaries.
    const GridContext midi = make_grid_context(toy_params(3, {8, 9, 11}));
    Rng rng(0x96D15EEDu);
    for (int t = 0; t < 4000; ++t) {
        const Vertex a = static_cast<Vertex>(rng.next_below(midi.cylinder.n));
        const Vertex b = static_cast<Vertex>(rng.next_below(midi.cylinder.n));
        CHECK(equiv(midi, a, b) == equiv_by_hand(midi, a, b));
        CHECK(equiv(midi, a, b) == equiv(midi, b, a));
    }
    // Row 0: q = 576, lambda = 4, window [576, 2304). Class of column 576 is
    // {576, 1152, 1728}; 2304 is outside.
    CHECK(equiv(midi, midi.cyl_vertex(0, 576), midi.cyl_vertex(0, 1152)));
    CHECK(equiv(midi, midi.cyl_vertex(0, 1152), midi.cyl_vertex(0, 1728)));
    CHECK(!equiv(midi, midi.cyl_vertex(0, 576), midi.cyl_vertex(0, 2304)));
    CHECK(!equiv(midi, midi.cyl_vertex(0, 0), midi.cyl_vertex(0, 576)));
    CHECK(!equiv(midi, midi.cyl_vertex(0, 576), midi.cyl_vertex(1, 1152)));
    const BaseCompression mcomp = grid_compression(midi);
    const std::size_t cls = mcomp.class_of[midi.cyl_vertex(0, 576)];
    CHECK(mcomp.members[cls] ==
          std::vector<Vertex>{midi.cyl_vertex(0, 576), midi.cyl_vertex(0, 1152),
                              midi.cyl_vertex(0, 1728)});
}

TEST_CASE("closures match the naive oracles") {
    Rng rng(0xC105EDCAu);
    for (const GridContext& ctx : {toy123(), toy235()}) {
        for (int t = 0; t < 30; ++t) {
            const std::vector<Vertex> w = random_w(rng, ctx, 6);
            CHECK(equiv_star_closure(ctx, w) == oracle::naive_star_closure(ctx, w));
            for (int l : {2, 3, 8, 16})
                CHECK(approx_closure_cyl(ctx, l, w) ==
                      oracle::naive_approx_closure(ctx, l, w));
            // equiv closure: brute force over all cylinder vertices.
            std::vector<Vertex> brute;
            for (Vertex v = 0; v < ctx.cylinder.n; ++v)
                for (Vertex m : w)
                    if (equiv(ctx, v, m)) {
                        brute.push_back(v);
                        break;
                    }
            CHECK(equiv_closure(ctx, w) == brute);
        }
    }
    // Midi: closures in windows are genuinely larger than the input.
    const GridContext midi = make_grid_context(toy_params(3, {8, 9, 11}));
    const std::vector<Vertex> w{midi.cyl_vertex(0, 1152)};
    CHECK(equiv_closure(midi, w) ==
          std::vector<Vertex>{midi.cyl_vertex(0, 576), midi.cyl_vertex(0, 1152),
                              midi.cyl_vertex(0, 1728)});
    CHECK(equiv_star_closure(midi, w) == oracle::naive_star_closure(midi, w));
}

TEST_CASE("vertical separators") {
    const GridContext ctx = toy123();
    const int jl = ctx.j_len();

    CHECK(!is_vertical_separator(ctx, {}));
    // A full interior column separates; with a hole it does not.
    std::vector<Vertex> col5{ctx.cyl_vertex(0, 5), ctx.cyl_vertex(1, 5), ctx.cyl_vertex(2, 5)};
    CHECK(is_vertical_separator(ctx, col5));
    CHECK(!is_vertical_separator(ctx, {col5[0], col5[1]}));
    // A deleted boundary column is vacuously separating.
    CHECK(is_vertical_separator(
        ctx, {ctx.cyl_vertex(0, 0), ctx.cyl_vertex(1, 0), ctx.cyl_vertex(2, 0)}));
    CHECK(is_vertical_separator(ctx, {ctx.cyl_vertex(0, jl - 1), ctx.cyl_vertex(1, jl - 1),
                                      ctx.cyl_vertex(2, jl - 1)}));
    // A staircase with steps <= 1 separates; a gap of 2 leaks.
    CHECK(is_vertical_separator(
        ctx, {ctx.cyl_vertex(0, 5), ctx.cyl_vertex(1, 6), ctx.cyl_vertex(2, 5)}));
    CHECK(!is_vertical_separator(
        ctx, {ctx.cyl_vertex(0, 5), ctx.cyl_vertex(1, 6), ctx.cyl_vertex(2, 7)}));

    Rng rng(0x5E9A7A70u);
    for (int t = 0; t < 200; ++t) {
        const std::vector<Vertex> w = random_w(rng, ctx, 8);
        CHECK(is_vertical_separator(ctx, w) == oracle::naive_vertical_separator(ctx, w));
    }
}

TEST_CASE("closed staircases and toroidal separators") {
    const GridContext ctx = toy123();

    std::vector<RC> yes, no;
    for (int r = 0; r < 3; ++r) {
        yes.push_back({r, frozen::staircase_yes_cols[static_cast<std::size_t>(r)]});
        no.push_back({r, frozen::staircase_no_cols[static_cast<std::size_t>(r)]});
    }
    CHECK(is_closed_staircase(ctx, yes));
    CHECK(!is_closed_staircase(ctx, no));
    CHECK(is_toroidal_vertical_separator(ctx, yes).separates);
    CHECK(!is_toroidal_vertical_separator(ctx, no).separates);

    // Wrap around the torus seam.
    const int js = ctx.jstar_len();
    CHECK(is_closed_staircase(ctx, {{0, js - 1}, {1, 0}, {2, 0}}));
    CHECK(is_closed_staircase(ctx, {{0, 7}, {1, 7}, {2, 7}}));
    // Wrong shapes.
    CHECK(!is_closed_staircase(ctx, {{0, 5}, {0, 6}, {2, 5}}));
    CHECK(!is_closed_staircase(ctx, {{0, 5}, {1, 6}}));
    CHECK(!is_closed_staircase(ctx, {}));

    Rng rng(0x70F01DA1u);
    int staircases = 0;
    for (int t = 0; t < 120; ++t) {
        // Random 3-sets of torus vertices, biased toward near-staircases.
        std::vector<RC> s;
        const int base = static_cast<int>(rng.next_below(js));
        for (int r = 0; r < 3; ++r) {
            const int row = rng.next_below(8) == 0 ? static_cast<int>(rng.next_below(3)) : r;
            const int col = (base + static_cast<int>(rng.next_below(4)) - 1 + js) % js;
            s.push_back({row, col});
        }
        const bool stair = is_closed_staircase(ctx, s);
        const auto rep = is_toroidal_vertical_separator(ctx, s);
        CHECK(rep.separates == oracle::naive_toroidal_separator(ctx, s));
        // Three-vertex toroidal separators are exactly the closed staircases.
        CHECK(rep.separates == stair);
        if (stair) {
            ++staircases;
            // Witness shift really works.
            std::vector<Vertex> shifted;
            for (const RC& u : s) {
                const int c = (u.col + rep.shift) % js;
                if (c < ctx.j_len()) shifted.push_back(ctx.cyl_vertex(u.row, c));
            }
            CHECK(is_vertical_separator(ctx, shifted));
        }
    }
    CHECK(staircases >= 15);
}

TEST_CASE("pairwise separators") {
    const GridContext ctx = toy235();
    Rng rng(0x9A135EEDu);
    for (int t = 0; t < 120; ++t) {
        const std::vector<Vertex> w = random_w(rng, ctx, 5);
        for (int i = 0; i < 3; ++i) {
            CAPTURE(t);
            CAPTURE(i);
            CHECK(is_pairwise_separator(ctx, w, i) ==
                  oracle::naive_pairwise_separator(ctx, w, i));
        }
    }

    // One vertex per row: the pair (i, i+1) separates exactly when the column
    // difference is in {-1, 0, 1} modulo f(k) * p_{i+1}.
    for (int t = 0; t < 150; ++t) {
        std::vector<int> cols(3);
        std::vector<Vertex> w;
        for (int r = 0; r < 3; ++r) {
            cols[r] = static_cast<int>(rng.next_below(ctx.j_len()));
            w.push_back(ctx.cyl_vertex(r, cols[r]));
        }
        for (int i = 0; i < 3; ++i) {
            const long long q = ctx.fk() * ctx.params.periods[(i + 1) % 3];
            const long long d = ((cols[i] - cols[(i + 1) % 3]) % q + q) % q;
            const bool want = d <= 1 || d == q - 1;
            CHECK(is_pairwise_separator(ctx, w, i) == want);
        }
    }

    // A cop-free row in the pair always defeats separation.
    const std::vector<Vertex> only_row0{ctx.cyl_vertex(0, 7)};
    CHECK(!is_pairwise_separator(ctx, only_row0, 0)); // row 1 free
    CHECK(!is_pairwise_separator(ctx, only_row0, 1)); // both rows free
    CHECK(!is_pairwise_separator(ctx, only_row0, 2)); // row 2 free
}

TEST_CASE("pseudo separator report") {
    Rng rng(0xB5E0D05Eu);
    for (const GridContext& ctx : {toy123(), toy235()}) {
        int pseudo_count = 0, other = 0;
        for (int t = 0; t < 150; ++t) {
            const std::vector<Vertex> w = random_w(rng, ctx, 3);
            const PseudoSeparatorReport rep = pseudo_separator_report(ctx, w);
            CHECK(rep.pseudo == (rep.pairwise_all && rep.closure_vertical));
            CHECK(rep.pseudo == is_pseudo_separator(ctx, w));

            bool all = true;
            std::optional<int> least;
            for (int i = 0; i < 3; ++i)
                if (!oracle::naive_pairwise_separator(ctx, w, i)) {
                    all = false;
                    if (!least) least = i;
                }
            CHECK(rep.pairwise_all == all);
            CHECK(rep.failing_lower_row == least);
            CHECK(rep.closure_vertical ==
                  oracle::naive_vertical_separator(
                      ctx, oracle::naive_approx_closure(ctx, ctx.fk(), w)));
            // Structural fact used by the twisting construction: for at most
            // k vertices, pairwise separation forces the closure to separate.
            if (rep.pairwise_all) CHECK(rep.closure_vertical);
            (rep.pseudo ? pseudo_count : other)++;
        }
        CHECK(pseudo_count >= 10);
        CHECK(other >= 10);
    }
}

TEST_CASE("staircase separator vs exhaustive search") {
    Rng rng(0x57A13CA5u);
    for (const GridContext& ctx : {toy123(), toy235()}) {
        int found = 0, missing = 0;
        for (int t = 0; t < 60; ++t) {
            const std::vector<Vertex> w = random_w(rng, ctx, 3);
            const auto s = staircase_separator(ctx, w);

            std::vector<bool> covered(3, false);
            for (Vertex v : w) covered[static_cast<std::size_t>(ctx.cyl_rc(v).row)] = true;
            if (!(covered[0] && covered[1] && covered[2])) {
                CHECK(!s.has_value());
                ++missing;
                continue;
            }

            const std::vector<RC> candidates = equiv_star_closure(ctx, w);
            const auto all = oracle::all_separator_subsets(ctx, candidates);
            CHECK(all.size() <= 1);
            CHECK(s.has_value() == (all.size() == 1));
            if (s) {
                ++found;
                std::vector<RC> sorted = *s;
                std::sort(sorted.begin(), sorted.end());
                std::vector<RC> want = all[0];
                std::sort(want.begin(), want.end());
                CHECK(sorted == want);
                CHECK(is_closed_staircase(ctx, *s));
                CHECK(is_toroidal_vertical_separator(ctx, *s).separates);
                // Members really lie in the closure.
                for (const RC& u : *s)
                    CHECK(std::binary_search(candidates.begin(), candidates.end(), u));
            } else {
                ++missing;
            }
        }
        CAPTURE(ctx.j_len());
        CHECK(found >= 5);
        CHECK(missing >= 5);
    }
}

TEST_CASE("staircase separator at full parameters") {
    const GridContext ctx = make_grid_context(build_params(3, 16));
    // Aligned one-per-row set: the unique separator is the aligned staircase.
    std::vector<Vertex> aligned;
    for (int r = 0; r < 3; ++r) aligned.push_back(ctx.cyl_vertex(r, 3000));
    const auto s = staircase_separator(ctx, aligned);
    REQUIRE(s.has_value());
    CHECK(*s == std::vector<RC>{{0, 3000}, {1, 3000}, {2, 3000}});
    CHECK(is_closed_staircase(ctx, *s));

    // Staircase-shaped set: still unique and recovered exactly.
    std::vector<Vertex> stair{ctx.cyl_vertex(0, 3000), ctx.cyl_vertex(1, 3001),
                              ctx.cyl_vertex(2, 3000)};
    const auto s2 = staircase_separator(ctx, stair);
    REQUIRE(s2.has_value());
    CHECK(*s2 == std::vector<RC>{{0, 3000}, {1, 3001}, {2, 3000}});

    // Far-apart residues admit no separator; a missing row returns nothing.
    CHECK(!staircase_separator(ctx, {ctx.cyl_vertex(0, 3000), ctx.cyl_vertex(1, 3500),
                                     ctx.cyl_vertex(2, 4000)})
               .has_value());
    CHECK(!staircase_separator(ctx, {ctx.cyl_vertex(0, 3000), ctx.cyl_vertex(1, 3000)})
               .has_value());
}

TEST_CASE("distances") {
    const GridContext ctx = toy123();
    const int js = ctx.jstar_len();
    CHECK(torus_column_distance(ctx, 0, 0) == 0);
    CHECK(torus_column_distance(ctx, 0, 1) == 1);
    CHECK(torus_column_distance(ctx, 0, js - 1) == 1);
    CHECK(torus_column_distance(ctx, 3, js - 2) == 5);
    CHECK(torus_column_distance(ctx, js / 2, 0) == js / 2);

    Rng rng(0xD157ACE5u);
    for (int t = 0; t < 50; ++t) {
        std::vector<RC> s;
        const int size = static_cast<int>(rng.next_below(4));
        for (int i = 0; i < size; ++i)
            s.push_back({static_cast<int>(rng.next_below(3)),
                         static_cast<int>(rng.next_below(js))});
        const int col = static_cast<int>(rng.next_below(js));
        CHECK(distance_to_column(ctx, col, s) == oracle::naive_torus_distance(ctx, col, s));
    }
    CHECK(distance_to_column(ctx, 0, {}) == -1);
}

TEST_CASE("path twistings") {
    const GridContext ctx = toy123();
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
    const int jl = ctx.j_len();

    for (int r = 0; r < 3; ++r) {
        const std::vector<Vertex> path = row_path(ctx, r);
        REQUIRE(static_cast<int>(path.size()) == jl);
        for (int c = 0; c < jl; ++c) CHECK(path[static_cast<std::size_t>(c)] == ctx.cyl_vertex(r, c));

        const Twisting tw = path_twisting(ctx.cylinder, idx, path);
        CHECK(is_twisting(ctx.cylinder, idx, tw));
        const std::vector<int> twisted = twisted_edges(ctx.cylinder, idx, tw);
        const std::vector<int> want{*ctx.cylinder.edge_index(ctx.cyl_vertex(r, 0),
                                                             ctx.cyl_vertex(r, 1)),
                                    *ctx.cylinder.edge_index(ctx.cyl_vertex(r, jl - 2),
                                                             ctx.cyl_vertex(r, jl - 1))};
        std::vector<int> sorted_want = want;
        std::sort(sorted_want.begin(), sorted_want.end());
        CHECK(twisted == sorted_want);
        // Fixes endpoints and everything off the row.
        CHECK(twisting_fixes(ctx.cylinder, idx, tw, ctx.cyl_vertex(r, 0)));
        CHECK(twisting_fixes(ctx.cylinder, idx, tw, ctx.cyl_vertex(r, jl - 1)));
        CHECK(twisting_fixes(ctx.cylinder, idx, tw, ctx.cyl_vertex((r + 1) % 3, 5)));
        CHECK(!twisting_fixes(ctx.cylinder, idx, tw, ctx.cyl_vertex(r, 5)));
        // Row paths induce compressible twistings.
        CHECK(is_compressible_twisting(ctx.cylinder, idx, grid_compression(ctx), tw));
    }

    // Short or broken paths are rejected.
    CHECK_THROWS_AS(path_twisting(ctx.cylinder, idx, {0, 1}), invalid_input_error);
    CHECK_THROWS_AS(path_twisting(ctx.cylinder, idx, {}), invalid_input_error);
    CHECK_THROWS_AS(
        path_twisting(ctx.cylinder, idx,
                      {ctx.cyl_vertex(0, 0), ctx.cyl_vertex(0, 2), ctx.cyl_vertex(0, 3)}),
        invalid_input_error);
    CHECK_THROWS_AS(
        path_twisting(ctx.cylinder, idx,
                      {ctx.cyl_vertex(0, 0), ctx.cyl_vertex(0, 1), ctx.cyl_vertex(0, 0)}),
        invalid_input_error);
}

TEST_CASE("weave paths") {
    for (const GridContext& ctx : {toy123(), toy235()}) {
        const int jl = ctx.j_len();
        for (int lower = 0; lower < 3; ++lower) {
            const long long q = ctx.fk() * ctx.params.periods[(lower + 1) % 3];
            for (int residue : {0, 1, 5, static_cast<int>(q - 1) % jl, jl / 2}) {
                CAPTURE(lower);
                CAPTURE(residue);
                const std::vector<Vertex> path = weave_path(ctx, lower, residue);
                REQUIRE(path.size() >= 2);
                // Endpoints in the boundary columns.
                CHECK(ctx.cyl_rc(path.front()).col == 0);
                CHECK(ctx.cyl_rc(path.back()).col == jl - 1);
                // Consecutive vertices adjacent, all distinct.
                std::set<Vertex> seen;
                for (std::size_t i = 0; i < path.size(); ++i) {
                    CHECK(seen.insert(path[i]).second);
                    if (i > 0) CHECK(ctx.cylinder.adjacent(path[i - 1], path[i]));
                }
                // Vertex set equals the definitional residue description.
                std::set<Vertex> want;
                for (int c = 0; c < jl; ++c) {
                    const long long d = ((residue - c) % q + q) % q;
                    if (d != 0) want.insert(ctx.cyl_vertex(lower, c));
                    if (d <= 1 || d == q - 1)
                        want.insert(ctx.cyl_vertex((lower + 1) % 3, c));
                }
                CHECK(seen == want);
            }
        }
    }
}

TEST_CASE("end-to-end twistings") {
    Rng rng(0xE2E54A11u);
    for (const GridContext& ctx : {toy123(), toy235()}) {
        const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
        const BaseCompression comp = grid_compression(ctx);
        const int jl = ctx.j_len();
        int exists = 0, blocked = 0;
        for (int t = 0; t < 80; ++t) {
            CAPTURE(t);
            const std::vector<Vertex> w = random_w(rng, ctx, 3);
            const auto res = end_to_end_twisting(ctx, idx, w);
            const bool pseudo = is_pseudo_separator(ctx, w);
            CHECK(res.has_value() == !pseudo);
            if (!res) {
                ++blocked;
                continue;
            }
            ++exists;
            const Twisting& tw = res->twisting;
            CHECK(is_twisting(ctx.cylinder, idx, tw));
            CHECK(is_compressible_twisting(ctx.cylinder, idx, comp, tw));
            const std::vector<int> twisted = twisted_edges(ctx.cylinder, idx, tw);
            REQUIRE(twisted.size() == 2);
            auto touches_col = [&](int e, int col) {
                const Edge& ed = ctx.cylinder.edges[static_cast<std::size_t>(e)];
                return ctx.cyl_rc(ed.first).col == col || ctx.cyl_rc(ed.second).col == col;
            };
            CHECK((touches_col(twisted[0], 0) || touches_col(twisted[1], 0)));
            CHECK((touches_col(twisted[0], jl - 1) || touches_col(twisted[1], jl - 1)));
            // Fixes the whole equivalence closure of W.
            for (Vertex v : equiv_closure(ctx, w))
                CHECK(twisting_fixes(ctx.cylinder, idx, tw, v));

            // The supporting path is a real path from end to end avoiding the
            // closure.
            const std::vector<Vertex>& path = res->path;
            REQUIRE(path.size() >= 3);
            CHECK(ctx.cyl_rc(path.front()).col == 0);
            CHECK(ctx.cyl_rc(path.back()).col == jl - 1);
            std::set<Vertex> seen;
            for (std::size_t i = 0; i < path.size(); ++i) {
                CHECK(seen.insert(path[i]).second);
                if (i > 0) CHECK(ctx.cylinder.adjacent(path[i - 1], path[i]));
            }
            const std::vector<Vertex> closure = equiv_closure(ctx, w);
            for (Vertex v : closure) CHECK(!seen.count(v));

            // Branch consistency.
            std::vector<int> per_row(3, 0);
            for (Vertex v : w) ++per_row[static_cast<std::size_t>(ctx.cyl_rc(v).row)];
            std::set<int> path_rows;
            for (Vertex v : path) path_rows.insert(ctx.cyl_rc(v).row);
            if (res->branch == 1) {
                CHECK(path_rows.size() == 1);
                CHECK(per_row[static_cast<std::size_t>(*path_rows.begin())] == 0);
            } else if (res->branch == 2) {
                CHECK(per_row == std::vector<int>{1, 1, 1});
                CHECK(path_rows.size() == 2);
            } else {
                CHECK(res->branch == 3);
            }
        }
        CHECK(exists >= 20);
        CHECK(blocked >= 10);
    }

    // Hand-picked shapes.
    const GridContext ctx = toy123();
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
    // Empty set: cop-free row.
    const auto empty_res = end_to_end_twisting(ctx, idx, {});
    REQUIRE(empty_res.has_value());
    CHECK(empty_res->branch == 1);
    // Aligned column: pseudo-separator, no twisting.
    CHECK(!end_to_end_twisting(ctx, idx,
                               {ctx.cyl_vertex(0, 7), ctx.cyl_vertex(1, 7),
                                ctx.cyl_vertex(2, 7)})
               .has_value());
    // Staircase: also a pseudo-separator.
    CHECK(!end_to_end_twisting(ctx, idx,
                               {ctx.cyl_vertex(0, 7), ctx.cyl_vertex(1, 8),
                                ctx.cyl_vertex(2, 7)})
               .has_value());
    // Spread columns: weave branch.
    const auto spread = end_to_end_twisting(
        ctx, idx, {ctx.cyl_vertex(0, 3), ctx.cyl_vertex(1, 11), ctx.cyl_vertex(2, 19)});
    REQUIRE(spread.has_value());
    CHECK(spread->branch == 2);
    // Oversized inputs are rejected.
    CHECK_THROWS_AS(end_to_end_twisting(ctx, idx,
                                        {ctx.cyl_vertex(0, 1), ctx.cyl_vertex(0, 3),
                                         ctx.cyl_vertex(1, 5), ctx.cyl_vertex(2, 7)}),
                    invalid_input_error);
}
