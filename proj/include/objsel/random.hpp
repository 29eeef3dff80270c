#pragma once

// Portable random helpers. std::*_distribution output is implementation
// defined, so draws are built directly on top of std::mt19937_64, whose
// output sequence is fixed by the standard.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace objsel::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a sequence of keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xD6E8FEB86659FD93ull));
}

using Engine = std::mt19937_64;

/// Uniform in the open interval (0, 1) with 53 random bits.
inline double uniform_open(Engine& eng) noexcept {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % bound;
}

/// Standard normal via Box-Muller; one draw per call, the pair partner is discarded.
inline double standard_normal(Engine& eng) noexcept {
    const double u1 = uniform_open(eng);
    const double u2 = uniform_open(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Laplace(0, b) by inverse CDF.
inline double laplace(Engine& eng, double b) noexcept {
    const double u = uniform_open(eng) - 0.5;
    const double mag = -b * std::log1p(-2.0 * std::fabs(u));
    return u < 0 ? -mag : mag;
}

inline bool bernoulli(Engine& eng, double p) noexcept { return uniform_open(eng) < p; }

/// Fisher-Yates shuffle of 0..n-1 truncated to the first `k` positions.
inline std::vector<std::size_t> sample_without_replacement(Engine& eng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(eng, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

inline std::vector<std::size_t> sample_with_replacement(Engine& eng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(k);
    for (auto& i : idx) i = static_cast<std::size_t>(uniform_index(eng, n));
    return idx;
}

}  // namespace objsel::rng
