#pragma once

#include <cstdint>
#include <random>

namespace mrftrack {

/// Every stochastic operation takes one of these explicitly; there is no
/// global generator.
using Rng = std::mt19937_64;

/// Independent, reproducible generator for a (seed, stream) pair.
[[nodiscard]] inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6d72u, 0x6674u};
    return Rng(seq);
}

[[nodiscard]] inline double standard_normal(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform on [0, 1).
[[nodiscard]] inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform integer on [0, n).
[[nodiscard]] inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace mrftrack
