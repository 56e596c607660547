// Microbenchmarks for the construction, refinement and game-solving hot paths.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/games.hpp"
#include "cfiwl/grid_compression.hpp"
#include "cfiwl/rng.hpp"
#include "cfiwl/wl.hpp"

namespace {

using namespace cfiwl;

const GridContext& toy_context() {
    static const GridContext ctx = make_grid_context(toy_params(3, {2, 3, 5}));
    return ctx;
}

const GridContext& midi_context() {
    static const GridContext ctx = make_grid_context(toy_params(3, {8, 9, 11}));
    return ctx;
}

void BM_BuildCfi(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OrderedBaseGraph base = make_grid(2, n);
    const EdgeAssignment f = zero_assignment(base);
    for (auto _ : state) {
        CFIGraph cfi = build_cfi(base, f);
        benchmark::DoNotOptimize(cfi.edges.data());
    }
}
BENCHMARK(BM_BuildCfi)->Arg(8)->Arg(32)->Arg(128);

void BM_Wl2Distinguish(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OrderedBaseGraph base = make_grid(2, n);
    const ColoredGraph a = build_cfi(base, zero_assignment(base)).to_colored();
    const ColoredGraph b =
        build_cfi(base, single_edge_assignment(base, *base.edge_index(0, n))).to_colored();
    for (auto _ : state) {
        auto round = wl_distinguishing_round(a, b, 2);
        benchmark::DoNotOptimize(round);
    }
}
BENCHMARK(BM_Wl2Distinguish)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Wl1Stable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OrderedBaseGraph base = make_grid(2, n);
    const ColoredGraph g = build_cfi(base, zero_assignment(base)).to_colored();
    for (auto _ : state) {
        const int r = wl_stable_round(g, 1);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Wl1Stable)->Arg(16)->Arg(64);

void BM_GridCompressionBuild(benchmark::State& state) {
    const GridContext& ctx = midi_context();
    for (auto _ : state) {
        BaseCompression comp = grid_compression(ctx);
        benchmark::DoNotOptimize(comp.members.data());
    }
    state.counters["classes"] =
        static_cast<double>(grid_compression(ctx).num_classes());
}
BENCHMARK(BM_GridCompressionBuild)->Unit(benchmark::kMillisecond);

void BM_CompressedCfiBuild(benchmark::State& state) {
    const GridContext& ctx = toy_context();
    const BaseCompression comp = grid_compression(ctx);
    const EdgeAssignment f = zero_assignment(ctx.cylinder);
    for (auto _ : state) {
        CompressedCFIGraph q = build_compressed_cfi(ctx.cylinder, comp, f);
        benchmark::DoNotOptimize(q.graph.edges.data());
    }
}
BENCHMARK(BM_CompressedCfiBuild)->Unit(benchmark::kMillisecond);

void BM_StaircaseSeparator(benchmark::State& state) {
    const GridContext& ctx = toy_context();
    Rng rng(11);
    std::vector<std::vector<Vertex>> samples;
    for (int i = 0; i < 64; ++i) {
        std::vector<Vertex> w;
        for (int row = 0; row < ctx.k(); ++row)
            w.push_back(ctx.cyl_vertex(
                row, static_cast<int>(rng.next_below(
                         static_cast<std::uint64_t>(ctx.j_len())))));
        samples.push_back(std::move(w));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        auto s = staircase_separator(ctx, samples[i++ % samples.size()]);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_StaircaseSeparator);

void BM_EndToEndTwisting(benchmark::State& state) {
    const GridContext& ctx = toy_context();
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
    Rng rng(13);
    std::vector<std::vector<Vertex>> samples;
    for (int i = 0; i < 64; ++i) {
        std::vector<Vertex> w;
        const int size = rng.next_int(1, ctx.k());
        for (int j = 0; j < size; ++j)
            w.push_back(static_cast<Vertex>(
                rng.next_below(static_cast<std::uint64_t>(ctx.cylinder.n))));
        samples.push_back(std::move(w));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        auto t = end_to_end_twisting(ctx, idx, samples[i++ % samples.size()]);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_EndToEndTwisting);

void BM_FindMoveTwisting(benchmark::State& state) {
    const GridContext& ctx = toy_context();
    const BaseCompression comp = grid_compression(ctx);
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
    const int e_from = *ctx.cylinder.edge_index(ctx.cyl_vertex(0, 0), ctx.cyl_vertex(1, 0));
    const int e_to = *ctx.cylinder.edge_index(ctx.cyl_vertex(0, 4), ctx.cyl_vertex(1, 4));
    const std::vector<int> occupied = {comp.class_of[ctx.cyl_vertex(2, 60)]};
    for (auto _ : state) {
        auto t = find_move_twisting(ctx.cylinder, idx, comp, occupied, e_from, e_to);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_FindMoveTwisting);

void BM_SolveCopsRobber(benchmark::State& state) {
    const ColoredGraph g = make_cylinder(3, 4).to_colored();
    for (auto _ : state) {
        auto res = solve_cops_robber(g, 2);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SolveCopsRobber)->Unit(benchmark::kMillisecond);

void BM_PebbleGame(benchmark::State& state) {
    const ColoredGraph a = make_colored_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
    const ColoredGraph b =
        make_colored_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    for (auto _ : state) {
        auto res = solve_pebble_game(a, b, 3);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_PebbleGame)->Unit(benchmark::kMillisecond);

void BM_SimulateToyGame(benchmark::State& state) {
    const GridContext& ctx = toy_context();
    const BaseCompression comp = grid_compression(ctx);
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(ctx.cylinder);
    SimulationOptions opts;
    opts.cop_count = ctx.k() + 1;
    opts.max_rounds = static_cast<int>(ctx.params.j_len / 6 - (ctx.k() + 2));
    opts.check_certificates = true;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        opts.seed = seed++;
        auto cops = make_cop_strategy(CopStrategyKind::separator, ctx, opts.cop_count, opts.seed);
        auto robber = make_grid_robber_policy(ctx, idx, comp);
        GameTranscript t = simulate_compressed_game(ctx.cylinder, idx, comp, *cops, *robber, opts);
        benchmark::DoNotOptimize(t.rounds_played);
    }
}
BENCHMARK(BM_SimulateToyGame)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
