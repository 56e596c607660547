#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "cfiwl/f2.hpp"
#include "cfiwl/rng.hpp"
#include "frozen.hpp"

using namespace cfiwl;

namespace {
bool satisfies(const std::vector<std::vector<int>>& rows, const std::vector<int>& rhs,
               const std::vector<std::uint8_t>& x) {
    for (size_t i = 0; i < rows.size(); ++i) {
        int acc = 0;
        for (int v : rows[i]) acc ^= x[v];
        if (acc != rhs[i]) return false;
    }
    return true;
}
} // namespace

TEST_CASE("frozen lex-min example") {
    F2System sys(3);
    CHECK(sys.add_constraint({0, 1}, true));
    CHECK(sys.add_constraint({1, 2}, false));
    auto sol = sys.lex_min_solution();
    REQUIRE(sol.has_value());
    CHECK(*sol == frozen::f2_lexmin_011);
}

TEST_CASE("inconsistency detection leaves the system usable") {
    F2System sys(2);
    CHECK(sys.add_constraint({0}, true));
    CHECK(sys.add_constraint({1}, false));
    CHECK(!sys.add_constraint({0, 1}, false)); // x0+x1 = 1 already forced
    CHECK(sys.consistent());
    auto sol = sys.lex_min_solution();
    REQUIRE(sol.has_value());
    CHECK(*sol == std::vector<std::uint8_t>{1, 0});
    // Redundant constraint accepted.
    CHECK(sys.add_constraint({0, 1}, true));
}

TEST_CASE("fix_var and empty system") {
    F2System sys(4);
    CHECK(sys.fix_var(2, true));
    auto sol = sys.lex_min_solution();
    REQUIRE(sol.has_value());
    CHECK(*sol == std::vector<std::uint8_t>{0, 0, 1, 0});

    F2System empty(0);
    auto esol = empty.lex_min_solution();
    REQUIRE(esol.has_value());
    CHECK(esol->empty());
}

TEST_CASE("lex-min against exhaustive enumeration on random systems") {
    Rng rng(0xF2F2F2ULL);
    for (int iter = 0; iter < 300; ++iter) {
        const int nv = rng.next_int(1, 10);
        const int nr = rng.next_int(0, 12);
        std::vector<std::vector<int>> rows;
        std::vector<int> rhs;
        F2System sys(nv);
        bool sys_consistent = true;
        for (int r = 0; r < nr; ++r) {
            std::vector<int> vars;
            for (int v = 0; v < nv; ++v)
                if (rng.next_bool()) vars.push_back(v);
            bool b = rng.next_bool();
            if (sys.add_constraint(vars, b)) {
                rows.push_back(vars);
                rhs.push_back(b ? 1 : 0);
            } else {
                // Rejected constraint must indeed be unsatisfiable together with
                // the accepted ones.
                bool any = false;
                for (int mask = 0; mask < (1 << nv) && !any; ++mask) {
                    std::vector<std::uint8_t> x(nv);
                    for (int v = 0; v < nv; ++v) x[v] = (mask >> v) & 1;
                    int acc = 0;
                    for (int v : vars) acc ^= x[v];
                    if (acc == (b ? 1 : 0) && satisfies(rows, rhs, x)) any = true;
                }
                CHECK(!any);
                sys_consistent = true; // system itself unchanged, still consistent
            }
        }
        CHECK(sys.consistent() == sys_consistent);
        auto sol = sys.lex_min_solution();
        REQUIRE(sol.has_value());
        CHECK(satisfies(rows, rhs, *sol));
        // Exhaustive lex-min: variable 0 most significant, prefer 0.
        std::vector<std::uint8_t> best;
        for (int mask = 0; mask < (1 << nv); ++mask) {
            std::vector<std::uint8_t> x(nv);
            // Lexicographic order over (x0, x1, ...): make x0 the top bit.
            for (int v = 0; v < nv; ++v) x[v] = (mask >> (nv - 1 - v)) & 1;
            if (!satisfies(rows, rhs, x)) continue;
            best = x;
            break; // masks ascend in exactly lexicographic order of x
        }
        REQUIRE((!best.empty() || nv == 0));
        CHECK(*sol == best);

        auto any_sol = sys.any_solution();
        REQUIRE(any_sol.has_value());
        CHECK(satisfies(rows, rhs, *any_sol));
    }
}
