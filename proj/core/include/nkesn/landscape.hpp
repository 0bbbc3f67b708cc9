#ifndef NKESN_LANDSCAPE_HPP
#define NKESN_LANDSCAPE_HPP

#include <cstdint>
#include <vector>

#include "nkesn/network.hpp"

namespace nkesn {

// k-bounded pseudo-Boolean function in lookup-table form: N subfunctions,
// each reading the K+1 bits selected by its mask row. tables[i][p] is the
// value of subfunction i for sub-pattern p, with p encoded in the canonical
// bit order fixed by the (sorted) mask row.
struct NkLandscape {
    int n = 0;
    int arity = 0;  // K+1
    MaskTable masks;
    std::vector<std::vector<double>> tables;

    void validate() const;
};

enum class SolveMethod { Exhaustive, DynamicProgramming, LocalSearch };

struct Solution {
    BitVector bits;
    double value = 0.0;  // always equals evaluate(landscape, bits)
    SolveMethod provenance = SolveMethod::Exhaustive;
};

// Packs the masked bits of x into a table index: bit j of the result is
// x[mask_row[j]].
std::uint32_t pattern(const BitVector& x, const std::vector<int>& mask_row);

// Sum of subfunction values in index order, without the 1/N factor. All
// solvers compare this exact left-to-right sum, so optima agree bit-for-bit
// across methods.
double raw_sum(const NkLandscape& landscape, const BitVector& x);

// (1/N) * raw_sum.
double evaluate(const NkLandscape& landscape, const BitVector& x);

// Change of raw_sum from flipping bit q, computed from the subfunctions whose
// mask contains q only.
double flip_delta_raw(const NkLandscape& landscape, const BitVector& x, int q);

// Global optimum by enumeration of all 2^N vectors. Ties broken by
// lexicographically smallest bit vector. Guarded to n <= 30.
Solution solve_exhaustive(const NkLandscape& landscape);

// Global optimum for adjacent (wrapped) masks by conditioning on the first K
// bits and sweeping a sliding-window state left to right. Same value and,
// after tie-breaking, same vector as solve_exhaustive. Rejects non-adjacent
// mask tables.
Solution solve_adjacent_dp(const NkLandscape& landscape);

struct LocalSearchOptions {
    std::uint64_t seed = 0;
    int restarts = 1;
    int radius = 1;  // only radius 1 is supported
};

// Best-improvement hill climbing under single bit flips. Improving moves are
// found through incrementally maintained per-bit deltas; after the deltas are
// exhausted the result is certified (and, on the rare float disagreement,
// polished) against full re-evaluations so the returned vector is a true
// Hamming-1 local optimum of evaluate. Best over restarts, ties
// lexicographically smallest.
Solution solve_local_search(const NkLandscape& landscape, const LocalSearchOptions& options);

}  // namespace nkesn

#endif
