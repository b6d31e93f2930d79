#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace patchsel {

/// Counter-based random numbers (Philox4x32-10).
///
/// Every draw is a pure function of (seed, stream, step, index), so ensembles
/// of trajectories can be generated in any order, or in parallel, and still
/// reproduce bit-for-bit. `stream` identifies the replicate (or certificate
/// sample) and `step` the time step.

namespace detail {

struct Philox4x32Out {
    std::array<std::uint32_t, 4> x;
};

inline Philox4x32Out philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                   std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += w0;
            key[1] += w1;
        }
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return {ctr};
}

inline double u64_to_unit_open(std::uint64_t x) {
    // (0,1): never returns 0, safe as an argument to log().
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Stateless generator for one (seed, stream) pair.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(static_cast<std::uint32_t>(stream) ^
                  static_cast<std::uint32_t>(stream >> 32)) {}

    /// Fills `out` with independent U(0,1) variates for the given step.
    void uniforms(std::uint64_t step, std::span<double> out) const {
        for (std::size_t i = 0; i < out.size(); i += 2) {
            const auto [a, b] = block(step, static_cast<std::uint32_t>(i / 2));
            out[i] = detail::u64_to_unit_open(a);
            if (i + 1 < out.size()) out[i + 1] = detail::u64_to_unit_open(b);
        }
    }

    /// Fills `out` with independent standard normal variates (Box-Muller).
    void normals(std::uint64_t step, std::span<double> out) const {
        for (std::size_t i = 0; i < out.size(); i += 2) {
            const auto [a, b] = block(step, static_cast<std::uint32_t>(i / 2));
            const double u1 = detail::u64_to_unit_open(a);
            const double u2 = detail::u64_to_unit_open(b);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            const double ang = 2.0 * std::numbers::pi * u2;
            out[i] = rad * std::cos(ang);
            if (i + 1 < out.size()) out[i + 1] = rad * std::sin(ang);
        }
    }

private:
    std::pair<std::uint64_t, std::uint64_t> block(std::uint64_t step,
                                                  std::uint32_t idx) const {
        const auto r = detail::philox4x32_10(
            {static_cast<std::uint32_t>(step),
             static_cast<std::uint32_t>(step >> 32), stream_, idx},
            key_);
        const std::uint64_t a = (std::uint64_t{r.x[0]} << 32) | r.x[1];
        const std::uint64_t b = (std::uint64_t{r.x[2]} << 32) | r.x[3];
        return {a, b};
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
};

}  // namespace patchsel
