#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/errors.hpp"
#include "cfiwl/rng.hpp"
#include "frozen.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfiwl;

namespace {

// Tuning fork: two degree-1 prongs 0, 1 attached to 2, 3, which meet at 4.
// Classes A = {0,1}, B = {2,3}, C = {4} have aligned neighbor positions, so
// edges (0,2) and (1,3) share a class/position profile: an assignment is
// compressible here iff bits[0] == bits[1] (edge order (0,2),(1,3),(2,4),(3,4)).
OrderedBaseGraph tuning_fork() {
    return make_base_graph(5, {{0, 2}, {1, 3}, {2, 4}, {3, 4}});
}

BaseCompression fork_compression(const OrderedBaseGraph& g) {
    return make_compression(g, {{0, 1}, {2, 3}, {4}});
}

// Independent pairwise restatement of assignment compressibility: any two
// edges whose endpoints lie in equal classes at equal neighbor positions must
// carry equal values.
bool pairwise_compressible(const OrderedBaseGraph& g, const BaseCompression& comp,
                           const EdgeAssignment& f) {
    const int m = static_cast<int>(g.edges.size());
    for (int e1 = 0; e1 < m; ++e1) {
        for (int e2 = e1 + 1; e2 < m; ++e2) {
            for (int o1 = 0; o1 < 2; ++o1) {
                auto [u1, v1] = g.edges[e1];
                if (o1) std::swap(u1, v1);
                auto [u2, v2] = g.edges[e2];
                if (comp.class_of[u1] != comp.class_of[u2]) std::swap(u2, v2);
                if (comp.class_of[u1] != comp.class_of[u2]) continue;
                if (comp.class_of[v1] != comp.class_of[v2]) continue;
                if (neighbor_index(g, u1, v1) != neighbor_index(g, u2, v2)) continue;
                if (neighbor_index(g, v1, u1) != neighbor_index(g, v2, u2)) continue;
                if (f.bits[e1] != f.bits[e2]) return false;
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("compression construction and validation") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression d = discrete_compression(g);
    CHECK(d.num_classes() == 5);
    CHECK_NOTHROW(d.validate(g));
    for (Vertex v = 0; v < 5; ++v) CHECK(d.members[d.class_of[v]] == std::vector<Vertex>{v});

    BaseCompression c = fork_compression(g);
    CHECK(c.num_classes() == 3);
    CHECK(c.class_of == std::vector<int>{0, 0, 1, 1, 2});
    CHECK_NOTHROW(c.validate(g));

    // Degree mismatch: {0, 4} has degrees 1 and 2.
    CHECK_THROWS_AS(make_compression(g, {{0, 4}, {1}, {2}, {3}}), invalid_input_error);
    // Adjacent members: {2, 4}.
    CHECK_THROWS_AS(make_compression(g, {{2, 4}, {0}, {1}, {3}}), invalid_input_error);
    // Not a partition: vertex 4 missing / duplicated.
    CHECK_THROWS_AS(make_compression(g, {{0, 1}, {2, 3}}), invalid_input_error);
    CHECK_THROWS_AS(make_compression(g, {{0, 1}, {2, 3}, {4}, {4}}), invalid_input_error);
}

TEST_CASE("compressed size is the sum of per-class gadget sizes") {
    OrderedBaseGraph g = tuning_fork();
    // Discrete: same as the CFI vertex count, 1+1+2+2+2 = 8.
    CHECK(compressed_size(g, discrete_compression(g)) == 8);
    CHECK(static_cast<int>(build_cfi(g, zero_assignment(g)).n()) == 8);
    // Fork classes: 2^0 + 2^1 + 2^1 = 5.
    CHECK(compressed_size(g, fork_compression(g)) == 5);

    Rng rng(0xC0135u);
    for (int trial = 0; trial < 30; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 8), rng.next_int(0, 5));
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 10));
        std::uint64_t expect = 0;
        for (const auto& cls : comp.members)
            expect += 1ULL << (b.degree(cls[0]) - 1);
        CHECK(compressed_size(b, comp) == expect);
    }
}

TEST_CASE("assignment compressibility on the tuning fork") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression comp = fork_compression(g);
    int compressible = 0;
    for (int bits = 0; bits < 16; ++bits) {
        EdgeAssignment f = zero_assignment(g);
        for (int e = 0; e < 4; ++e) f.bits[e] = (bits >> e) & 1;
        bool want = (f.bits[0] == f.bits[1]);
        CHECK(is_compressible_assignment(g, comp, f) == want);
        CHECK(pairwise_compressible(g, comp, f) == want);
        compressible += want ? 1 : 0;
    }
    CHECK(compressible == 8);
}

TEST_CASE("assignment compressibility agrees with the pairwise restatement") {
    Rng rng(0xAB5EEDu);
    int pos = 0, neg = 0;
    for (int trial = 0; trial < 80; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 7), rng.next_int(0, 4));
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 12));
        EdgeAssignment f = zero_assignment(b);
        if (rng.next_bool()) {
            f = gen::random_compressible_assignment(rng, b, comp);
        } else {
            for (auto& bit : f.bits) bit = static_cast<std::uint8_t>(rng.next_bool());
        }
        bool got = is_compressible_assignment(b, comp, f);
        CHECK(got == pairwise_compressible(b, comp, f));
        (got ? pos : neg) += 1;
    }
    // Negative instances need aligned parallel profiles, which random draws
    // rarely produce; the tuning-fork case covers them exhaustively.
    CHECK(pos >= 15);
}

TEST_CASE("per-class-pair assignments are always compressible") {
    Rng rng(0x5EEDAB3u);
    for (int trial = 0; trial < 30; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 7), rng.next_int(0, 4));
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 12));
        EdgeAssignment f = gen::random_compressible_assignment(rng, b, comp);
        CHECK(is_compressible_assignment(b, comp, f));
    }
}

TEST_CASE("twisting compressibility on the tuning fork") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression comp = fork_compression(g);
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g);

    // All 8 twistings: vertices 2, 3, 4 independently flip both out-edges.
    std::vector<Twisting> all = oracle::all_twistings(g, idx);
    REQUIRE(static_cast<int>(all.size()) == 8);
    // Compressible = vertices 2 and 3 switch together: 4 of them.
    int compressible = 0;
    std::set<std::vector<std::uint8_t>> effects;
    for (const Twisting& t : all) {
        bool v2 = t.contains(idx.id_of(2, 0));
        bool v3 = t.contains(idx.id_of(3, 1));
        bool want = (v2 == v3);
        CHECK(is_compressible_twisting(g, idx, comp, t) == want);
        if (want) {
            ++compressible;
            effects.insert(twisting_effect(g, idx, t).bits);
        }
    }
    CHECK(compressible == 4);
    // Their effects: {}, {01}, {23}, {0123} over edge indices.
    CHECK(effects ==
          std::set<std::vector<std::uint8_t>>{
              {0, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}});
}

TEST_CASE("lifted relation on CFI vertices") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression comp = fork_compression(g);
    CFIGraph cfi = build_cfi(g, zero_assignment(g));
    ColoredGraph lifted = cfi_with_lifted_relation(cfi, comp);
    REQUIRE(lifted.has_equivalence());
    CHECK_NOTHROW(lifted.validate());
    CHECK(lifted.n == cfi.n());
    for (int x = 0; x < cfi.n(); ++x) {
        for (int y = 0; y < cfi.n(); ++y) {
            bool same = comp.class_of[cfi.origin[x]] == comp.class_of[cfi.origin[y]] &&
                        cfi.mask[x] == cfi.mask[y];
            CHECK((lifted.eq_class[x] == lifted.eq_class[y]) == same);
        }
    }
    // Colors and edges are untouched.
    CHECK(lifted.color == cfi.to_colored().color);
    CHECK(lifted.edges == cfi.edges);
}

TEST_CASE("compressed CFI is the exact quotient by the lifted relation") {
    Rng rng(0x00075EEDu);
    for (int trial = 0; trial < 25; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 7), rng.next_int(0, 4));
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 12));
        EdgeAssignment f = gen::random_compressible_assignment(rng, b, comp);
        CFIGraph cfi = build_cfi(b, f);
        CompressedCFIGraph q = build_compressed_cfi(b, comp, f);

        CHECK(static_cast<std::uint64_t>(q.graph.n) == compressed_size(b, comp));
        CHECK_NOTHROW(q.graph.validate());

        // Vertex lookup round-trips.
        for (int x = 0; x < q.graph.n; ++x)
            CHECK(q.vertex_of(q.q_class[x], q.q_mask[x]) == x);
        CHECK_THROWS_AS(q.vertex_of(0, 1u << 25), invalid_input_error);

        // Quotient adjacency iff some member pair is CFI-adjacent.
        std::set<Edge> want;
        for (const Edge& e : cfi.edges) {
            int qa = q.vertex_of(comp.class_of[cfi.origin[e.first]], cfi.mask[e.first]);
            int qb = q.vertex_of(comp.class_of[cfi.origin[e.second]], cfi.mask[e.second]);
            REQUIRE(qa != qb); // class non-adjacency forbids loops
            want.insert({std::min(qa, qb), std::max(qa, qb)});
        }
        CHECK(std::set<Edge>(q.graph.edges.begin(), q.graph.edges.end()) == want);

        // Class colors are the least member's base color.
        for (int x = 0; x < q.graph.n; ++x)
            CHECK(q.graph.color[x] == comp.members[q.q_class[x]][0] + 1);
    }
}

TEST_CASE("compressed CFI rejects non-compressible assignments") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression comp = fork_compression(g);
    EdgeAssignment f = single_edge_assignment(g, 0); // bits[0] != bits[1]
    CHECK_THROWS_AS(build_compressed_cfi(g, comp, f), invalid_input_error);
}

TEST_CASE("tuning-fork compressed quotient shape") {
    OrderedBaseGraph g = tuning_fork();
    BaseCompression comp = fork_compression(g);
    CompressedCFIGraph q = build_compressed_cfi(g, comp, zero_assignment(g));
    CHECK(q.graph.n == 5);
    // Colors: class A -> vertex 0's color 1, B -> 3, C -> 5.
    std::multiset<int> colors(q.graph.color.begin(), q.graph.color.end());
    CHECK(colors == std::multiset<int>{1, 3, 3, 5, 5});
}

TEST_CASE("find_compressible_twisting against exhaustive enumeration") {
    Rng rng(0xFC715EEDu);
    int found = 0, missing = 0;
    for (int trial = 0; trial < 60; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 5), rng.next_int(0, 3));
        if (b.edges.size() > 8) continue;
        DirectedEdgeIndex idx = DirectedEdgeIndex::build(b);
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 10));
        EdgeAssignment f = gen::random_compressible_assignment(rng, b, comp);
        EdgeAssignment h = gen::random_compressible_assignment(rng, b, comp);
        std::vector<Vertex> fixed;
        for (Vertex u = 0; u < b.n; ++u)
            if (rng.next_bernoulli(1, 5)) fixed.push_back(u);

        std::optional<Twisting> got = find_compressible_twisting(b, idx, comp, f, h, fixed);

        EdgeAssignment target = xor_assignments(f, h);
        std::optional<Twisting> want;
        std::vector<Twisting> all = oracle::all_twistings(b, idx);
        std::sort(all.begin(), all.end(),
                  [](const Twisting& x, const Twisting& y) { return x.member < y.member; });
        for (const Twisting& t : all) {
            if (twisting_effect(b, idx, t) != target) continue;
            if (!is_compressible_twisting(b, idx, comp, t)) continue;
            bool ok = true;
            for (Vertex u : fixed) ok = ok && twisting_fixes(b, idx, t, u);
            if (ok) {
                want = t;
                break;
            }
        }
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
            CHECK(got->member == want->member);
            ++found;
        } else {
            ++missing;
        }
    }
    CHECK(found >= 10);
    CHECK(missing >= 5);
}

TEST_CASE("compressible twistings induce quotient isomorphisms") {
    Rng rng(0x15011501u);
    int exercised = 0;
    for (int trial = 0; trial < 40; ++trial) {
        OrderedBaseGraph b = gen::random_base(rng, rng.next_int(2, 6), rng.next_int(0, 4));
        DirectedEdgeIndex idx = DirectedEdgeIndex::build(b);
        BaseCompression comp = gen::random_compression(rng, b, rng.next_int(0, 12));
        EdgeAssignment f = gen::random_compressible_assignment(rng, b, comp);
        EdgeAssignment h = gen::random_compressible_assignment(rng, b, comp);
        std::optional<Twisting> t = find_compressible_twisting(b, idx, comp, f, h);
        if (!t) continue;
        ++exercised;

        // The effect is compressible, so h = f + effect is reachable inside the
        // compressible world and both quotients exist.
        EdgeAssignment eff = twisting_effect(b, idx, *t);
        CHECK(is_compressible_assignment(b, comp, eff));
        CHECK(xor_assignments(f, eff) == h);

        CompressedCFIGraph qf = build_compressed_cfi(b, comp, f);
        CompressedCFIGraph qh = build_compressed_cfi(b, comp, h);

        // Per-class mask delta: equal across members by compressibility.
        std::vector<std::uint32_t> delta(comp.num_classes(), 0);
        for (int c = 0; c < comp.num_classes(); ++c) {
            Vertex u = comp.members[c][0];
            for (int p = 0; p < b.degree(u); ++p)
                if (t->contains(idx.id_of(u, b.adj[u][p])))
                    delta[c] ^= 1u << p;
        }
        std::vector<Vertex> map(qf.graph.n);
        for (int x = 0; x < qf.graph.n; ++x)
            map[x] = qh.vertex_of(qf.q_class[x], qf.q_mask[x] ^ delta[qf.q_class[x]]);
        CHECK(check_isomorphism(qf.graph, qh.graph, map));
    }
    CHECK(exercised >= 10);
}

TEST_CASE("class-fixing variant expands to member fixing") {
    OrderedBaseGraph g = tuning_fork();
    DirectedEdgeIndex idx = DirectedEdgeIndex::build(g);
    BaseCompression comp = fork_compression(g);
    EdgeAssignment f = zero_assignment(g);
    // Target effect {edges 2,3}: achieved only by the vertex-4 twisting, which
    // moves class C. Fixing class C kills it; fixing A (never moved) does not.
    EdgeAssignment h = xor_assignments(single_edge_assignment(g, 2),
                                       single_edge_assignment(g, 3));
    CHECK(find_compressible_twisting_fixing_classes(g, idx, comp, f, h, {0}).has_value());
    CHECK(!find_compressible_twisting_fixing_classes(g, idx, comp, f, h, {2}).has_value());
    // Effect {0,1} is achieved only by the twisting moving both B and C, so
    // fixing either of those classes kills it while fixing A does not.
    EdgeAssignment h2 = xor_assignments(single_edge_assignment(g, 0),
                                        single_edge_assignment(g, 1));
    CHECK(find_compressible_twisting_fixing_classes(g, idx, comp, f, h2, {0}).has_value());
    CHECK(!find_compressible_twisting_fixing_classes(g, idx, comp, f, h2, {1}).has_value());
    CHECK(!find_compressible_twisting_fixing_classes(g, idx, comp, f, h2, {2}).has_value());
}

TEST_CASE("end-column compression of a cylinder") {
    OrderedBaseGraph cyl = make_cylinder(3, 5);
    BaseCompression comp = gen::end_column_compression(cyl, 3, 5);
    CHECK_NOTHROW(comp.validate(cyl));
    CHECK(comp.num_classes() == 15 - 3);
    // End columns have degree 3, interior degree 4:
    // 3 classes of two degree-3 ends (2^2 each) + 9 interior singletons (2^3).
    CHECK(compressed_size(cyl, comp) == 3 * 4 + 9 * 8);
    Rng rng(42);
    EdgeAssignment f = gen::random_compressible_assignment(rng, cyl, comp);
    CHECK(is_compressible_assignment(cyl, comp, f));
    CompressedCFIGraph q = build_compressed_cfi(cyl, comp, f);
    CHECK(static_cast<std::uint64_t>(q.graph.n) == compressed_size(cyl, comp));
}
