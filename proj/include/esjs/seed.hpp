#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace esjs {

using Rng = std::mt19937_64;

// Labeled seed splitting. Every stochastic component derives its own stream
// from the run seed, a label and an index, so streams never depend on the
// order in which other components consumed randomness.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                        std::uint64_t index = 0) noexcept;

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

/// Uniform draw on the open interval (0, 1).
[[nodiscard]] inline double open_unit(Rng& rng) noexcept {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform index in [0, bound) by multiply-shift; bound must be non-zero.
[[nodiscard]] inline std::size_t uniform_index(Rng& rng, std::size_t bound) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(rng()) * static_cast<u128>(bound)) >> 64);
}

}  // namespace esjs
