#pragma once

#include <array>
#include <cstdint>

namespace spde {

/// Philox4x32-10 block cipher: 4 counter words and 2 key words to 4 random words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal draws addressed by (seed, path, index). Any draw can be
/// recomputed independently of the others, so the result of a Monte Carlo run
/// does not depend on how paths are split across threads.
class CounterNormal {
public:
    explicit CounterNormal(std::uint64_t seed) : seed_(seed) {}

    double operator()(std::uint64_t path, std::uint64_t index) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace spde
