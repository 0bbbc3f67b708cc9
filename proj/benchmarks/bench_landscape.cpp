#include <benchmark/benchmark.h>

#include <random>

#include "nkesn/landscape.hpp"

using namespace nkesn;

namespace {

NkLandscape random_landscape(int n, int k, Neighborhood model, std::uint64_t seed) {
    NetworkConfig cfg;
    cfg.n_outputs = n;
    cfg.k = k;
    cfg.neighborhood = model;
    cfg.seed = seed;
    NkLandscape l;
    l.n = n;
    l.arity = k + 1;
    l.masks = make_mask_table(cfg);
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    l.tables.resize(n);
    for (auto& t : l.tables) {
        t.resize(std::size_t(1) << (k + 1));
        for (auto& v : t) v = dist(eng);
    }
    return l;
}

}  // namespace

static void Evaluate(benchmark::State& state) {
    const NkLandscape l =
        random_landscape(static_cast<int>(state.range(0)), 3, Neighborhood::Adjacent, 7);
    BitVector x(l.n, 0);
    for (int i = 0; i < l.n; i += 3) x[i] = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(l, x));
    }
}
BENCHMARK(Evaluate)->Arg(20)->Arg(100);

static void SolveAdjacentDp(benchmark::State& state) {
    const NkLandscape l = random_landscape(static_cast<int>(state.range(0)),
                                           static_cast<int>(state.range(1)),
                                           Neighborhood::Adjacent, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_adjacent_dp(l));
    }
}
BENCHMARK(SolveAdjacentDp)->Args({20, 3})->Args({20, 8})->Args({100, 3})->Args({100, 8});

static void SolveExhaustive(benchmark::State& state) {
    const NkLandscape l =
        random_landscape(static_cast<int>(state.range(0)), 3, Neighborhood::Random, 13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_exhaustive(l));
    }
}
BENCHMARK(SolveExhaustive)->Arg(16)->Arg(20);

static void SolveLocalSearch(benchmark::State& state) {
    const NkLandscape l =
        random_landscape(static_cast<int>(state.range(0)), 3, Neighborhood::Random, 17);
    LocalSearchOptions opts;
    opts.seed = 5;
    opts.restarts = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_local_search(l, opts));
    }
}
BENCHMARK(SolveLocalSearch)->Arg(20)->Arg(100);
