#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lqgduet {

// Philox4x32-10 counter-based generator.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// Two independent standard normals for the counter (trial, step, channel) under seed.
inline std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint32_t trial,
                                               std::uint64_t step, std::uint32_t channel) {
    const auto out = philox4x32({static_cast<std::uint32_t>(step),
                                 static_cast<std::uint32_t>(step >> 32), trial, channel},
                                {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t b0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    constexpr double k53 = 1.0 / 9007199254740992.0;
    const double u0 = static_cast<double>((b0 >> 11) + 1) * k53;  // (0, 1]
    const double u1 = static_cast<double>(b1 >> 11) * k53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u0));
    const double t = 2.0 * std::numbers::pi * u1;
    return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace lqgduet
