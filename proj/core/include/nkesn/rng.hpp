#ifndef NKESN_RNG_HPP
#define NKESN_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace nkesn {

// Seeding and sampling helpers. Everything here is fully deterministic given
// (seed, stream tag): mt19937_64 has a standard-mandated sequence and the
// double conversions below avoid std::uniform_real_distribution, whose output
// is implementation-defined.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent generator for a named substream of a master seed. Streams with
// different tags never share state, so e.g. mask construction can change
// without perturbing weight draws.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::string_view stream) {
    return std::mt19937_64(splitmix64(seed ^ fnv1a64(stream)));
}

inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::string_view stream,
                                     std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed ^ fnv1a64(stream)) + index));
}

// Uniform double in [0, 1) using the top 53 bits.
inline double uniform_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& eng, double lo, double hi) {
    return lo + uniform_unit(eng) * (hi - lo);
}

// Uniform integer in [0, n) without modulo bias.
inline std::uint64_t uniform_index(std::mt19937_64& eng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t r;
    do {
        r = eng();
    } while (r >= limit);
    return r % n;
}

// k distinct values from [0, n), in draw order (partial Fisher-Yates).
inline std::vector<int> sample_without_replacement(std::mt19937_64& eng, int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: k out of range");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(uniform_index(eng, static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

}  // namespace nkesn

#endif
