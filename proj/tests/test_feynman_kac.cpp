#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "spde/densities.hpp"
#include "spde/errors.hpp"
#include "spde/feynman_kac.hpp"

using namespace spde;

TEST_CASE("step grid covers the interval exactly") {
    const auto t = step_times(0.5, 1.5, 0.3);
    CHECK(t.front() == 0.5);
    CHECK(t.back() == 1.5);
    CHECK(t.size() == 5);
    CHECK(step_times(0.0, 1.0, 0.1).size() == 11);
}

TEST_CASE("Euler-Maruyama trivial cases") {
    // no noise and constant drift: exact straight line
    const SdeCoefficients line{[](double, double) { return 2.0; }, [](double, double) { return 0.0; }, 0.0, 1.0};
    CHECK(euler_maruyama(line, 1.0, 0.01, 5) == doctest::Approx(3.0).epsilon(1e-13));
    // zero coefficients leave the state alone
    const SdeCoefficients still{[](double, double) { return 0.0; }, [](double, double) { return 0.0; }, 0.0, 1.0};
    CHECK(euler_maruyama(still, -0.7, 0.1, 5) == -0.7);
    // constant coefficients: X_T = x + mu T + s sum sqrt(h) Z_k
    const SdeCoefficients bm{[](double, double) { return 0.5; }, [](double, double) { return 2.0; }, 0.0, 1.0};
    const CounterNormal z(9);
    double expect = 0.5;
    for (int k = 0; k < 4; ++k) expect += 0.5 * 0.25 + 2.0 * 0.5 * z(3, k);
    CHECK(euler_maruyama(bm, 0.5, 0.25, z, 3) == doctest::Approx(expect).epsilon(1e-14));
    const SdeCoefficients bad{[](double, double) { return 0.0; }, [](double, double) { return -1.0; }, 0.0, 1.0};
    CHECK_THROWS_AS(euler_maruyama(bad, 0.0, 0.1, 1), NegativeDiffusion);
}

TEST_CASE("estimates at t = 0 are exact") {
    const AdditiveSystem system(fixtures::example1());
    McOptions o;
    o.n_paths = 10;
    const auto e = estimate_additive_pdf(0.1, 0.0, 0.5, 2.0, system, 10, o);
    CHECK(e.std_error == 0.0);
    const auto law = additive_law(sum_series_truncated(system, 0.0, 0.5, 10, false));
    CHECK(e.value == doctest::Approx(law.pdf(0.1)));
}

TEST_CASE("degenerate starting laws and regions are refused") {
    const AdditiveSystem system(fixtures::example1());
    McOptions o;
    o.n_paths = 10;
    CHECK_THROWS_AS(estimate_additive_pdf(0.0, 1.0, 1.0, 2.0, system, 10, o), DegenerateInitialLaw);
    CHECK_THROWS_AS(estimate_additive_pdf(0.0, 3.0, 0.5, 2.0, system, 10, o), InvalidParameter);
    auto m = fixtures::example3();
    CHECK_THROWS_AS(estimate_multiplicative_pdf(-1.0, 0.3, 0.125, m, o), RegionViolation);
    m.deterministic_initial = true;
    m.initial.log_variance = 0.0;
    CHECK_THROWS_AS(estimate_multiplicative_pdf(1.0, 0.3, 0.125, m, o), DegenerateInitialLaw);
    o.n_paths = 1;
    CHECK_THROWS_AS(estimate_kpz_pdf(0.0, 0.3, 0.125, 0.5, fixtures::example4(), o), InvalidParameter);
}

TEST_CASE("estimates are reproducible and independent of the worker count") {
    const AdditiveSystem system(fixtures::example1());
    McOptions o;
    o.n_paths = 2000;
    o.seed = 17;
    o.threads = 1;
    const auto a = estimate_additive_pdf(0.6, 1.0, 0.5, 2.0, system, 10, o);
    o.threads = 3;
    const auto b = estimate_additive_pdf(0.6, 1.0, 0.5, 2.0, system, 10, o);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    o.seed = 18;
    CHECK(estimate_additive_pdf(0.6, 1.0, 0.5, 2.0, system, 10, o).value != a.value);
}

TEST_CASE("the two GBM schemes and the KPZ schemes agree") {
    const auto m = fixtures::example3();
    McOptions o;
    o.n_paths = 20'000;
    o.dt = 1e-4;
    const double u = std::exp(multiplicative_log_mean(0.3, 0.125, m));
    const auto exact = estimate_multiplicative_pdf(u, 0.3, 0.125, m, o, GbmScheme::Exact);
    const auto euler = estimate_multiplicative_pdf(u, 0.3, 0.125, m, o, GbmScheme::Euler);
    const double closed = multiplicative_pdf(u, 0.3, 0.125, m);
    CHECK(std::abs(exact.value - closed) < 4.0 * exact.std_error);
    CHECK(std::abs(euler.value - closed) < 4.0 * euler.std_error + 1e-3 * closed);

    const auto k = fixtures::example4();
    const auto c = kpz_fk_coefficients(k);
    CHECK(c.drift == doctest::Approx(2.0 * (M_PI * M_PI + 0.25)).epsilon(1e-14));
    CHECK(c.diffusion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    o.dt = 1e-2;
    const double kappa = kpz_mean(0.3, 0.125, k);
    const auto ke = estimate_kpz_pdf(kappa, 0.3, 0.125, 0.5, k, o, KpzScheme::Euler);
    const auto kx = estimate_kpz_pdf(kappa, 0.3, 0.125, 0.5, k, o, KpzScheme::Exact);
    // constant coefficients: Euler is exact in law
    CHECK(std::abs(ke.value - kx.value) < 4.0 * (ke.std_error + kx.std_error));
    CHECK(std::abs(kx.value - kpz_pdf(kappa, 0.3, 0.125, k)) < 4.0 * kx.std_error);
}
