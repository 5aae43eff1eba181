#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spde/basis.hpp"
#include "spde/functions.hpp"
#include "spde/quadrature.hpp"

using namespace spde;

TEST_CASE("cosine and sine bases are orthonormal on [0,1]") {
    for (Basis basis : {Basis::Cosine, Basis::Sine}) {
        for (int i = 1; i <= 20; ++i) {
            for (int j = i; j <= 20; ++j) {
                const double g = integrate_gauss_legendre(
                    [&](double x) { return basis_eval(basis, i, x) * basis_eval(basis, j, x); }, 0.0, 1.0, 64,
                    8);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("boundary behaviour of the eigenfunctions") {
    for (int n = 1; n <= 50; ++n) {
        CHECK(basis_eval(Basis::Cosine, n, 1.0) == 0.0);
        CHECK(basis_eval(Basis::Sine, n, 0.0) == 0.0);
        CHECK(basis_eval(Basis::Sine, n, 1.0) == 0.0);
        CHECK(basis_eval(Basis::Cosine, n, 0.0) == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK(sin_pi(3.0) == 0.0);
    CHECK(sin_pi(0.5) == 1.0);
}

TEST_CASE("eigenvalues") {
    CHECK(lambda_additive(1, 1.0, 1.0) == doctest::Approx(1.0 - std::numbers::pi * std::numbers::pi / 4.0));
    CHECK(cosine_frequency(3) == doctest::Approx(2.5 * std::numbers::pi));
    const double c = 5.5 + std::sqrt(2.0 * std::numbers::pi) + 4.0 * std::numbers::pi * std::numbers::pi;
    // m = 2: c - (2 pi)^2 - sqrt(2 pi)
    CHECK(lambda_nonlocal(2, 1.0, 1.0, c, 0.5) == doctest::Approx(5.5).epsilon(1e-14));
}

TEST_CASE("exprel2 is continuous through lambda = 0") {
    for (double t : {1e-3, 0.3, 1.0, 2.0}) {
        CHECK(exprel2(0.0, t) == t);
        CHECK(exprel1(0.0, t) == t);
        for (double lam : {1e-14, 1e-10, 1e-8, 1e-6, 1e-5, 4.9e-5, 5.1e-5, 1e-3}) {
            for (double sign : {-1.0, 1.0}) {
                const double l = sign * lam;
                // reference from the integral int_0^t e^{2 l s} ds by long-double series
                long double ref = 0.0L, term = t;
                for (int k = 1; k < 30; ++k) {
                    ref += term;
                    term *= 2.0L * l * t / (k + 1);
                }
                CHECK(std::abs(exprel2(l, t) - static_cast<double>(ref)) <= 1e-10 * t);
            }
        }
    }
    CHECK(exprel2(-3.0, 1.0) == doctest::Approx((std::exp(-6.0) - 1.0) / -6.0).epsilon(1e-15));
}

TEST_CASE("harmonic convolution matches quadrature") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const Harmonic h{U(rng), U(rng), U(rng), 0.5 + std::abs(U(rng))};
        const double lambda = k % 5 == 0 ? 0.0 : 3.0 * U(rng);
        const double t = 0.1 + std::abs(U(rng));
        const double ref = adaptive_simpson(
            [&](double s) { return std::exp(lambda * (t - s)) * h.value(s); }, 0.0, t, {1e-13, 48, 4'000'000});
        CHECK(h.convolve_exponential(lambda, t) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("time functions carry analytic derivatives") {
    const auto s = TimeFunction::sine();
    CHECK(s.has_analytic_derivative());
    CHECK(s.derivative(0.7) == doctest::Approx(std::cos(0.7)));
    const auto custom = TimeFunction::custom([](double t) { return t * t * t; });
    CHECK_FALSE(custom.has_analytic_derivative());
    CHECK(custom.derivative(2.0) == doctest::Approx(12.0).epsilon(1e-8));
    const auto mixed = TimeFunction::cosine().value_plus_derivative(2.0, -1.0);
    CHECK(mixed(0.4) == doctest::Approx(2.0 * std::cos(0.4) + std::sin(0.4)));
    CHECK(mixed.harmonic_tag().has_value());
}

TEST_CASE("quadrature rules") {
    const auto& gl = gauss_legendre(10);
    double sum = 0.0;
    for (double w : gl.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // E[Z^4] = 3, E[Z^6] = 15 under the standard normal weight
    const auto& gh = gauss_hermite(20);
    double m4 = 0.0, m6 = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
        m6 += gh.weights[i] * std::pow(gh.nodes[i], 6);
    }
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}
