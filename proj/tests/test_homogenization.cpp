#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "spde/errors.hpp"
#include "spde/homogenization.hpp"

using namespace spde;

namespace {

struct Operator {
    // a0 U(0) + b0 U'(0) = g,  a1 U(1) + b1 U'(1) = h
    double a0, b0, a1, b1;
    bool left_is_g = true;
};

// Row 0 puts h on the left end and g on the right one.
Operator operator_for(const BoundaryCase& bc) {
    switch (bc.row) {
        case 0: return {0, 1, 1, 0, false};
        case 1: return {1, 0, 1, 0};
        case 2: return {1, 0, 0, 1};
        case 3: return {0, 1, 0, 1};
        case 4: return {1, 0, bc.gamma, 1};
        case 5: return {0, 1, bc.gamma, 1};
        case 6: return {-bc.gamma, 1, 1, 0};
        case 7: return {-bc.gamma, 1, 0, 1};
        default: return {-bc.gamma1, 1, bc.gamma2, 1};
    }
}

double residual(const LiftFunction& lift, const BoundaryCase& bc, double t) {
    const Operator op = operator_for(bc);
    const double l = op.a0 * lift(t, 0.0) + op.b0 * lift.dx(t, 0.0);
    const double r = op.a1 * lift(t, 1.0) + op.b1 * lift.dx(t, 1.0);
    const double left_data = op.left_is_g ? bc.g(t) : bc.h(t);
    const double right_data = op.left_is_g ? bc.h(t) : bc.g(t);
    return std::max(std::abs(l - left_data), std::abs(r - right_data));
}

TimeFunction random_harmonic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    return TimeFunction::harmonic({U(rng), U(rng), U(rng), 0.5 + std::abs(U(rng))});
}

}  // namespace

TEST_CASE("every boundary row is met exactly by its lift") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> G(0.1, 5.0);
    std::uniform_real_distribution<double> T(0.0, 3.0);
    for (int row = 0; row <= 8; ++row) {
        CAPTURE(row);
        double worst = 0.0, worst_independent = 0.0;
        for (int draw = 0; draw < 1000; ++draw) {
            const BoundaryCase bc = BoundaryCase::table(row, random_harmonic(rng), random_harmonic(rng), G(rng),
                                                        G(rng), G(rng));
            const LiftFunction lift = build_lift(bc);
            CHECK(lift.analytic_time_derivative());
            std::vector<double> ts{T(rng), T(rng), T(rng)};
            worst = std::max(worst, verify_boundary(lift, bc, ts));
            for (double t : ts) worst_independent = std::max(worst_independent, residual(lift, bc, t));
        }
        CHECK(worst <= 1e-12);
        CHECK(worst_independent <= 1e-12);
    }
}

TEST_CASE("linear lifts agree with a direct solve of the two conditions") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> G(0.1, 5.0);
    for (int row : {0, 1, 2, 4, 5, 6, 7, 8}) {
        const BoundaryCase bc = BoundaryCase::table(row, TimeFunction::sine(), TimeFunction::cosine(), G(rng),
                                                    G(rng), G(rng));
        const LiftFunction lift = build_lift(bc);
        const Operator op = operator_for(bc);
        // Y = p x + q
        Eigen::Matrix2d A;
        A << op.b0, op.a0, op.a1 + op.b1, op.a1;
        const double t = 0.7;
        const Eigen::Vector2d rhs(op.left_is_g ? bc.g(t) : bc.h(t), op.left_is_g ? bc.h(t) : bc.g(t));
        const Eigen::Vector2d pq = A.partialPivLu().solve(rhs);
        for (double x : {0.0, 0.25, 0.8, 1.0}) {
            CHECK(lift(t, x) == doctest::Approx(pq[0] * x + pq[1]).epsilon(1e-12));
        }
        CHECK(lift.dxx(t) == 0.0);
    }
}

TEST_CASE("Neumann-Neumann row needs curvature") {
    const BoundaryCase bc = BoundaryCase::table(3, TimeFunction::sine(), TimeFunction::cosine());
    const LiftFunction lift = build_lift(bc);
    const double t = 1.1;
    CHECK(lift.dxx(t) == doctest::Approx(std::cos(t) - std::sin(t)));
    CHECK(lift.dx(t, 0.0) == doctest::Approx(std::sin(t)));
}

TEST_CASE("vanishing Robin denominators are rejected") {
    CHECK_THROWS_AS(build_lift(BoundaryCase::table(4, TimeFunction::sine(), TimeFunction::cosine(), -1.0)),
                    DegenerateRobin);
    CHECK_THROWS_AS(build_lift(BoundaryCase::table(5, TimeFunction::sine(), TimeFunction::cosine(), 0.0)),
                    DegenerateRobin);
    CHECK_THROWS_AS(build_lift(BoundaryCase::table(7, TimeFunction::sine(), TimeFunction::cosine(), 0.0)),
                    DegenerateRobin);
    BoundaryCase out_of_range;
    out_of_range.row = 9;
    CHECK_FALSE(check_boundary(out_of_range).empty());
}

TEST_CASE("effective forcing removes the lift from the equation") {
    const BoundaryCase bc = BoundaryCase::main(TimeFunction::sine(), TimeFunction::cosine());
    const LiftFunction lift = build_lift(bc);
    const Forcing f = Forcing::separable(TimeFunction::cosine(), [](double x) { return x * x; }, "x^2");
    const double b = 1.3;
    const Forcing ft = effective_forcing(f, lift, b);
    for (double t : {0.0, 0.4, 2.0}) {
        for (double x : {0.0, 0.3, 1.0}) {
            // Y = cos t (x - 1) + sin t
            const double y = std::cos(t) * (x - 1.0) + std::sin(t);
            const double yt = -std::sin(t) * (x - 1.0) + std::cos(t);
            CHECK(ft(t, x) == doctest::Approx(std::cos(t) * x * x - yt + b * y).epsilon(1e-13));
        }
    }
}
