#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>

#include "nkesn/landscape.hpp"
#include "nkesn/serialization.hpp"
#include "oracles.hpp"

using namespace nkesn;

namespace {

NkLandscape constant_landscape(int n, int k, double value) {
    NetworkConfig cfg;
    cfg.n_outputs = n;
    cfg.k = k;
    NkLandscape l;
    l.n = n;
    l.arity = k + 1;
    l.masks = make_mask_table(cfg);
    l.tables.assign(n, std::vector<double>(std::size_t(1) << (k + 1), value));
    return l;
}

BitVector random_bits(std::mt19937_64& eng, int n) {
    BitVector x(n);
    for (auto& b : x) b = static_cast<std::uint8_t>(eng() & 1u);
    return x;
}

}  // namespace

TEST_SUITE("landscape") {

TEST_CASE("pattern packing follows the canonical sorted order") {
    BitVector x(20, 0);
    CHECK(pattern(x, {0, 2, 4, 6}) == 0);

    BitVector ones(4, 1);
    CHECK(pattern(ones, {0, 1, 2, 3}) == 15);

    x[2] = 1;
    x[6] = 1;
    const std::vector<int> row{0, 2, 4, 6};
    CHECK(pattern(x, row) == oracles::extract_pattern(x, row));
    CHECK(pattern(x, row) == 0b1010);

    std::mt19937_64 eng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const BitVector bits = random_bits(eng, 20);
        CHECK(pattern(bits, row) == oracles::extract_pattern(bits, row));
    }
}

TEST_CASE("evaluate: single subfunction and constant landscapes") {
    NkLandscape single = constant_landscape(1, 0, 0.0);
    single.tables[0] = {0.25, 0.75};
    CHECK(evaluate(single, {0}) == 0.25);
    CHECK(evaluate(single, {1}) == 0.75);

    const NkLandscape flat = constant_landscape(9, 2, 0.4);
    std::mt19937_64 eng(2);
    for (int trial = 0; trial < 50; ++trial)
        CHECK(evaluate(flat, random_bits(eng, 9)) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("evaluate matches an independent pattern-extraction recomputation") {
    const NkLandscape l = oracles::random_landscape(12, 3, Neighborhood::Random, 5);
    std::mt19937_64 eng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const BitVector x = random_bits(eng, l.n);
        double expected = 0.0;
        for (int i = 0; i < l.n; ++i)
            expected += l.tables[i][oracles::extract_pattern(x, l.masks.rows[i])];
        expected /= l.n;
        CHECK(evaluate(l, x) == expected);
    }
}

TEST_CASE("evaluate is invariant under subfunction reordering") {
    const NkLandscape l = oracles::random_landscape(10, 2, Neighborhood::Adjacent, 8);
    NkLandscape shuffled = l;
    std::vector<int> order(l.n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 eng(3);
    std::shuffle(order.begin(), order.end(), eng);
    for (int i = 0; i < l.n; ++i) {
        shuffled.masks.rows[i] = l.masks.rows[order[i]];
        shuffled.tables[i] = l.tables[order[i]];
    }
    for (int trial = 0; trial < 100; ++trial) {
        const BitVector x = random_bits(eng, l.n);
        CHECK(evaluate(shuffled, x) ==
              doctest::Approx(evaluate(l, x)).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive: ties break to the lexicographically smallest vector") {
    const NkLandscape flat = constant_landscape(8, 2, 1.5);
    const Solution s = solve_exhaustive(flat);
    CHECK(s.bits == BitVector(8, 0));
    CHECK(s.value == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.value == evaluate(flat, s.bits));
}

TEST_CASE("exhaustive: hand-checkable 4-point domain") {
    NkLandscape l = constant_landscape(2, 1, 0.0);
    // patterns over bits (x0, x1): 00, 10, 01, 11 -> indices 0,1,2,3
    l.tables[0] = {0.1, 0.2, 0.3, 0.9};
    l.tables[1] = {0.5, 0.1, 0.2, 0.8};
    const Solution s = solve_exhaustive(l);
    CHECK(s.bits == BitVector{1, 1});
    CHECK(s.value == evaluate(l, {1, 1}));
}

TEST_CASE("exhaustive dominates random sampling") {
    const NkLandscape l = oracles::random_landscape(14, 3, Neighborhood::Random, 21);
    const Solution s = solve_exhaustive(l);
    std::mt19937_64 eng(4);
    for (int trial = 0; trial < 1000; ++trial)
        CHECK(s.value >= evaluate(l, random_bits(eng, l.n)));
}

TEST_CASE("exhaustive refuses n > 30") {
    const NkLandscape l = constant_landscape(31, 1, 0.0);
    CHECK_THROWS_AS(solve_exhaustive(l), std::invalid_argument);
}

TEST_CASE("dp equals exhaustive on random adjacent landscapes") {
    std::uint64_t seed = 1000;
    for (int n : {8, 11, 14}) {
        for (int k : {1, 2, 3, 4}) {
            for (int rep = 0; rep < 3; ++rep) {
                const NkLandscape l =
                    oracles::random_landscape(n, k, Neighborhood::Adjacent, ++seed);
                const Solution dp = solve_adjacent_dp(l);
                const Solution ex = solve_exhaustive(l);
                CHECK(dp.value == ex.value);
                CHECK(dp.bits == ex.bits);
                CHECK(dp.value == evaluate(l, dp.bits));
            }
        }
    }
}

TEST_CASE("dp handles the degenerate arity K+1 = N") {
    for (int n : {3, 5, 8}) {
        const NkLandscape l =
            oracles::random_landscape(n, n - 1, Neighborhood::Adjacent, 400 + n);
        const Solution dp = solve_adjacent_dp(l);
        const Solution ex = solve_exhaustive(l);
        CHECK(dp.value == ex.value);
        CHECK(dp.bits == ex.bits);
    }
}

TEST_CASE("dp equals exhaustive on a constant landscape (tie-break parity)") {
    const NkLandscape flat = constant_landscape(10, 3, 2.25);
    const Solution dp = solve_adjacent_dp(flat);
    CHECK(dp.bits == BitVector(10, 0));
    CHECK(dp.value == doctest::Approx(2.25).epsilon(1e-15));
}

TEST_CASE("dp rejects non-adjacent masks") {
    const NkLandscape l = oracles::random_landscape(12, 3, Neighborhood::Random, 9);
    CHECK_THROWS_AS(solve_adjacent_dp(l), std::invalid_argument);
}

TEST_CASE("local search solves separable landscapes exactly") {
    // Each subfunction depends only on its anchor bit.
    NkLandscape l = constant_landscape(12, 2, 0.0);
    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    BitVector best_bits(l.n);
    for (int i = 0; i < l.n; ++i) {
        const double off = dist(eng), on = dist(eng);
        best_bits[i] = static_cast<std::uint8_t>(on > off);
        const auto& row = l.masks.rows[i];
        const auto anchor_pos =
            std::lower_bound(row.begin(), row.end(), i) - row.begin();
        for (std::size_t p = 0; p < l.tables[i].size(); ++p)
            l.tables[i][p] = (p >> anchor_pos) & 1u ? on : off;
    }
    LocalSearchOptions opts;
    opts.seed = 7;
    opts.restarts = 1;
    const Solution s = solve_local_search(l, opts);
    CHECK(s.bits == best_bits);
    CHECK(s.value == solve_exhaustive(l).value);
}

TEST_CASE("local search returns a certified single-flip local optimum") {
    const NkLandscape l = oracles::random_landscape(16, 3, Neighborhood::Adjacent, 77);
    LocalSearchOptions opts;
    opts.seed = 3;
    opts.restarts = 50;
    const Solution s = solve_local_search(l, opts);
    const Solution ex = solve_exhaustive(l);
    CHECK(s.value <= ex.value);
    CHECK(s.value == evaluate(l, s.bits));
    for (int q = 0; q < l.n; ++q) {
        BitVector flipped = s.bits;
        flipped[q] ^= 1;
        CHECK(evaluate(l, flipped) <= evaluate(l, s.bits));
    }
}

TEST_CASE("local search on a constant landscape returns the start value") {
    const NkLandscape flat = constant_landscape(10, 2, 0.7);
    LocalSearchOptions opts;
    opts.seed = 11;
    opts.restarts = 3;
    const Solution s = solve_local_search(flat, opts);
    CHECK(s.value == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("incremental flip deltas match full re-evaluation differences") {
    const NkLandscape adj = oracles::random_landscape(20, 4, Neighborhood::Adjacent, 50);
    const NkLandscape rnd = oracles::random_landscape(20, 4, Neighborhood::Random, 51);
    std::mt19937_64 eng(12);
    for (const NkLandscape* l : {&adj, &rnd}) {
        for (int trial = 0; trial < 5000; ++trial) {
            BitVector x = random_bits(eng, l->n);
            const int q = static_cast<int>(eng() % l->n);
            BitVector flipped = x;
            flipped[q] ^= 1;
            const double full = raw_sum(*l, flipped) - raw_sum(*l, x);
            CHECK(flip_delta_raw(*l, x, q) == doctest::Approx(full).epsilon(1e-12));
        }
    }
}

TEST_CASE("more restarts never hurt (same seed stream)") {
    const NkLandscape l = oracles::random_landscape(18, 3, Neighborhood::Random, 33);
    LocalSearchOptions opts;
    opts.seed = 19;
    double prev = -1e300;
    for (int restarts = 1; restarts <= 8; ++restarts) {
        opts.restarts = restarts;
        const Solution s = solve_local_search(l, opts);
        CHECK(s.value >= prev);
        prev = s.value;
    }
}

TEST_CASE("local search rejects invalid options") {
    const NkLandscape l = constant_landscape(6, 2, 0.0);
    LocalSearchOptions opts;
    opts.restarts = 0;
    CHECK_THROWS_AS(solve_local_search(l, opts), std::invalid_argument);
    opts.restarts = 1;
    opts.radius = 2;
    CHECK_THROWS_AS(solve_local_search(l, opts), std::invalid_argument);
}

TEST_CASE("landscape file round trip re-solves to the identical optimum") {
    const NkLandscape l = oracles::random_landscape(12, 3, Neighborhood::Adjacent, 91);
    const auto path = std::filesystem::temp_directory_path() / "nkesn_landscape_rt.json";
    save_landscape(l, path);
    const NkLandscape loaded = load_landscape(path);
    std::filesystem::remove(path);

    CHECK(loaded.masks.rows == l.masks.rows);
    CHECK(loaded.tables == l.tables);
    const Solution a = solve_adjacent_dp(l);
    const Solution b = solve_adjacent_dp(loaded);
    CHECK(a.bits == b.bits);
    CHECK(a.value == b.value);
}

}  // TEST_SUITE
