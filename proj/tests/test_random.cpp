#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spde/parallel.hpp"
#include "spde/random.hpp"

using namespace spde;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using W = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          W{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          W{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter normals are addressable and standard") {
    const CounterNormal z(42);
    CHECK(z(7, 3) == z(7, 3));
    CHECK(z(7, 3) != z(7, 2));
    CHECK(z(7, 3) != CounterNormal(43)(7, 3));
    std::vector<double> a(200'000), b(200'000), ab(200'000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = z(i, 4);
        b[i] = z(i, 5);
        ab[i] = a[i] * b[i];
    }
    const auto ma = sample_moments(a);
    const auto mb = sample_moments(b);
    // 5 standard errors
    CHECK(std::abs(ma.mean) < 5.0 / std::sqrt(2e5));
    CHECK(std::abs(ma.variance - 1.0) < 5.0 * std::sqrt(2.0 / 2e5));
    CHECK(std::abs(mb.variance - 1.0) < 5.0 * std::sqrt(2.0 / 2e5));
    CHECK(std::abs(sample_moments(ab).mean) < 5.0 / std::sqrt(2e5));
}

TEST_CASE("parallel map does not depend on the worker count") {
    const CounterNormal z(1);
    const auto fn = [&](std::size_t i) { return std::exp(z(i, 0)); };
    const auto one = parallel_map(10'001, 1, fn);
    for (int threads : {2, 3, 8}) {
        const auto many = parallel_map(10'001, threads, fn);
        CHECK(many == one);
        CHECK(pairwise_sum(many) == pairwise_sum(one));
    }
    CHECK_THROWS(parallel_map(100, 4, [](std::size_t i) -> double {
        if (i == 57) throw std::runtime_error("boom");
        return 0.0;
    }));
    CHECK(default_threads() >= 1);
}

TEST_CASE("pairwise summation") {
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{1.5}) == 1.5);
    std::vector<double> v(1 << 20, 0.1);
    CHECK(std::abs(pairwise_sum(v) - 0.1 * (1 << 20)) < 1e-9);
    const auto m = sample_moments(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
}
