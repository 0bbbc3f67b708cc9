#include "nkesn/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nkesn/rng.hpp"

namespace nkesn {

void NkLandscape::validate() const {
    if (n < 1) throw std::invalid_argument("landscape: n must be >= 1");
    if (arity < 1 || arity > n) throw std::invalid_argument("landscape: arity out of range");
    if (arity > 25) throw std::invalid_argument("landscape: arity too large for lookup tables");
    if (masks.size() != n) throw std::invalid_argument("landscape: mask table size != n");
    if (masks.arity() != arity) throw std::invalid_argument("landscape: mask arity mismatch");
    masks.validate();
    if (static_cast<int>(tables.size()) != n)
        throw std::invalid_argument("landscape: table count != n");
    const std::size_t expected = std::size_t(1) << arity;
    for (const auto& t : tables) {
        if (t.size() != expected)
            throw std::invalid_argument("landscape: table size != 2^(K+1)");
        for (double v : t)
            if (!std::isfinite(v)) throw std::invalid_argument("landscape: non-finite table entry");
    }
}

std::uint32_t pattern(const BitVector& x, const std::vector<int>& mask_row) {
    std::uint32_t p = 0;
    for (std::size_t j = 0; j < mask_row.size(); ++j) {
        if (x[mask_row[j]]) p |= std::uint32_t(1) << j;
    }
    return p;
}

double raw_sum(const NkLandscape& landscape, const BitVector& x) {
    if (static_cast<int>(x.size()) != landscape.n)
        throw std::invalid_argument("evaluate: bit vector length != n");
    double sum = 0.0;
    for (int i = 0; i < landscape.n; ++i)
        sum += landscape.tables[i][pattern(x, landscape.masks.rows[i])];
    return sum;
}

double evaluate(const NkLandscape& landscape, const BitVector& x) {
    return raw_sum(landscape, x) / landscape.n;
}

double flip_delta_raw(const NkLandscape& landscape, const BitVector& x, int q) {
    double delta = 0.0;
    for (int i = 0; i < landscape.n; ++i) {
        const auto& row = landscape.masks.rows[i];
        const auto it = std::lower_bound(row.begin(), row.end(), q);
        if (it == row.end() || *it != q) continue;
        const auto bit = std::uint32_t(1) << (it - row.begin());
        const std::uint32_t p = pattern(x, row);
        delta += landscape.tables[i][p ^ bit] - landscape.tables[i][p];
    }
    return delta;
}

namespace {

bool lex_less(const BitVector& a, const BitVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Candidate comparison used by every solver: larger sum wins, ties go to the
// lexicographically smallest vector.
bool improves(double sum, const BitVector& bits, double best_sum, const BitVector& best_bits) {
    if (sum > best_sum) return true;
    return sum == best_sum && (best_bits.empty() || lex_less(bits, best_bits));
}

}  // namespace

Solution solve_exhaustive(const NkLandscape& landscape) {
    const int n = landscape.n;
    if (n > 30) throw std::invalid_argument("solve_exhaustive: n > 30");

    double best_sum = -std::numeric_limits<double>::infinity();
    BitVector best;
    BitVector x(n, 0);
    const std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t u = 0; u < count; ++u) {
        for (int j = 0; j < n; ++j) x[j] = static_cast<std::uint8_t>((u >> j) & 1u);
        const double sum = raw_sum(landscape, x);
        if (improves(sum, x, best_sum, best)) {
            best_sum = sum;
            best = x;
        }
    }
    return Solution{best, best_sum / n, SolveMethod::Exhaustive};
}

namespace {

struct DpCell {
    bool alive = false;
    double sum = 0.0;
    BitVector bits;  // full length, undecided positions zero
};

}  // namespace

Solution solve_adjacent_dp(const NkLandscape& landscape) {
    if (!landscape.masks.is_adjacent())
        throw std::invalid_argument("solve_adjacent_dp: mask table is not adjacent");
    const int n = landscape.n;
    const int k = landscape.arity - 1;  // subfunction i reads positions i..i+k mod n

    // Condition on the first k bits (the ones the wrapping subfunctions read),
    // then decide positions k..n-1 left to right. The state is the window of
    // the last k decided bits; partial sums accumulate subfunctions in index
    // order, so a complete path reproduces raw_sum exactly.
    const std::uint32_t prefixes = std::uint32_t(1) << k;
    const std::uint32_t states = std::uint32_t(1) << k;

    double best_sum = -std::numeric_limits<double>::infinity();
    BitVector best;

    std::vector<DpCell> cur(states), nxt(states);
    for (std::uint32_t prefix = 0; prefix < prefixes; ++prefix) {
        for (auto& c : cur) c.alive = false;
        for (auto& c : nxt) c.alive = false;

        // Seed: positions 0..k-1 fixed to the prefix bits; state is those same
        // bits (window ending at position k-1).
        std::uint32_t seed_state = 0;
        BitVector seed_bits(n, 0);
        for (int j = 0; j < k; ++j) {
            const auto bit = static_cast<std::uint8_t>((prefix >> j) & 1u);
            seed_bits[j] = bit;
            if (bit) seed_state |= std::uint32_t(1) << j;
        }
        cur[seed_state] = DpCell{true, 0.0, std::move(seed_bits)};

        for (int q = k; q < n; ++q) {
            for (auto& c : nxt) c.alive = false;
            for (std::uint32_t s = 0; s < states; ++s) {
                if (!cur[s].alive) continue;
                for (std::uint8_t choice = 0; choice < 2; ++choice) {
                    BitVector bits = cur[s].bits;
                    bits[q] = choice;
                    // Subfunction q-k reads q-k..q, all decided now.
                    const int i = q - k;
                    const double sum =
                        cur[s].sum + landscape.tables[i][pattern(bits, landscape.masks.rows[i])];
                    // Window of the last k decided bits, positions q-k+1..q.
                    std::uint32_t state = 0;
                    for (int j = 0; j < k; ++j)
                        if (bits[q - k + 1 + j]) state |= std::uint32_t(1) << j;
                    auto& slot = nxt[state];
                    if (!slot.alive || improves(sum, bits, slot.sum, slot.bits)) {
                        slot = DpCell{true, sum, std::move(bits)};
                    }
                }
            }
            std::swap(cur, nxt);
        }

        // Close the ring: subfunctions n-k..n-1 read decided tail bits plus the
        // conditioned prefix, still in index order.
        for (std::uint32_t s = 0; s < states; ++s) {
            if (!cur[s].alive) continue;
            double sum = cur[s].sum;
            for (int i = n - k; i < n; ++i)
                sum += landscape.tables[i][pattern(cur[s].bits, landscape.masks.rows[i])];
            if (improves(sum, cur[s].bits, best_sum, best)) {
                best_sum = sum;
                best = cur[s].bits;
            }
        }
    }
    return Solution{best, best_sum / n, SolveMethod::DynamicProgramming};
}

namespace {

// Hill climber state with incrementally maintained flip deltas.
struct Climber {
    const NkLandscape& landscape;
    // For each bit q: the subfunctions reading q, with q's bit position in
    // each subfunction's canonical pattern.
    std::vector<std::vector<std::pair<int, std::uint32_t>>> readers;
    // Bits sharing at least one subfunction with q (including q itself);
    // their deltas go stale when q flips.
    std::vector<std::vector<int>> neighbors;

    BitVector x;
    std::vector<std::uint32_t> patterns;  // current pattern per subfunction
    std::vector<double> delta;            // raw_sum change per flip

    explicit Climber(const NkLandscape& l) : landscape(l) {
        const int n = l.n;
        readers.resize(n);
        neighbors.resize(n);
        std::vector<std::vector<int>> touching(n);
        for (int i = 0; i < n; ++i) {
            const auto& row = l.masks.rows[i];
            for (std::size_t j = 0; j < row.size(); ++j) {
                readers[row[j]].push_back({i, std::uint32_t(1) << j});
                touching[row[j]].push_back(i);
            }
        }
        for (int q = 0; q < n; ++q) {
            std::vector<int> nb;
            for (int i : touching[q])
                for (int other : l.masks.rows[i]) nb.push_back(other);
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            neighbors[q] = std::move(nb);
        }
        patterns.resize(n);
        delta.resize(n);
    }

    void start(BitVector start_bits) {
        x = std::move(start_bits);
        for (int i = 0; i < landscape.n; ++i)
            patterns[i] = pattern(x, landscape.masks.rows[i]);
        for (int q = 0; q < landscape.n; ++q) refresh_delta(q);
    }

    void refresh_delta(int q) {
        double d = 0.0;
        for (const auto& [i, bit] : readers[q])
            d += landscape.tables[i][patterns[i] ^ bit] - landscape.tables[i][patterns[i]];
        delta[q] = d;
    }

    void flip(int q) {
        x[q] ^= 1;
        for (const auto& [i, bit] : readers[q]) patterns[i] ^= bit;
        for (int nb : neighbors[q]) refresh_delta(nb);
    }

    // Best-improvement loop: flip the largest positive delta (ties to the
    // lowest index) until none remains. The flip budget only guards against
    // rounding-induced delta cycles; certify() restores progress if it ever
    // trips.
    void climb() {
        long budget = 1000 + 50L * landscape.n * landscape.arity;
        while (budget-- > 0) {
            int best_q = -1;
            double best_d = 0.0;
            for (int q = 0; q < landscape.n; ++q) {
                if (delta[q] > best_d) {
                    best_d = delta[q];
                    best_q = q;
                }
            }
            if (best_q < 0) return;
            flip(best_q);
        }
    }

    // Deltas compare differently-rounded sums than evaluate does; certify the
    // end point against full re-evaluations and keep climbing on any
    // disagreement so the single-flip audit always holds.
    void certify() {
        bool improved = true;
        while (improved) {
            improved = false;
            double current = raw_sum(landscape, x);
            for (int q = 0; q < landscape.n; ++q) {
                BitVector flipped = x;
                flipped[q] ^= 1;
                if (raw_sum(landscape, flipped) > current) {
                    flip(q);
                    climb();
                    improved = true;
                    break;
                }
            }
        }
    }
};

}  // namespace

Solution solve_local_search(const NkLandscape& landscape, const LocalSearchOptions& options) {
    if (options.restarts < 1)
        throw std::invalid_argument("solve_local_search: restarts must be >= 1");
    if (options.radius != 1)
        throw std::invalid_argument("solve_local_search: only radius 1 is supported");

    const int n = landscape.n;
    Climber climber(landscape);

    double best_sum = -std::numeric_limits<double>::infinity();
    BitVector best;
    for (int restart = 0; restart < options.restarts; ++restart) {
        auto eng = seeded_engine(options.seed, "local_search_restart",
                                 static_cast<std::uint64_t>(restart));
        BitVector start(n);
        for (int q = 0; q < n; ++q) start[q] = static_cast<std::uint8_t>(eng() & 1u);
        climber.start(std::move(start));
        climber.climb();
        climber.certify();
        const double sum = raw_sum(landscape, climber.x);
        if (improves(sum, climber.x, best_sum, best)) {
            best_sum = sum;
            best = climber.x;
        }
    }
    return Solution{best, best_sum / n, SolveMethod::LocalSearch};
}

}  // namespace nkesn
