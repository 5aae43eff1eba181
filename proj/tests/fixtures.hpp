#pragma once

#include <cmath>
#include <numbers>

#include "spde/basis.hpp"
#include "spde/model.hpp"

// The three worked examples, built by hand rather than through the config parser.
namespace fixtures {

inline spde::AdditiveModel example1() {
    using namespace spde;
    AdditiveModel m;
    m.a = 1.0;
    m.b = 1.0;
    m.sigma = 1.0;
    m.forcing = Forcing::separable(
        TimeFunction::cosine(), [](double x) { return basis_eval(Basis::Cosine, 1, x); }, "e1");
    m.boundary = BoundaryCase::main(TimeFunction::sine(), TimeFunction::cosine());
    m.noise = NoiseSpec::reciprocal(10);
    m.initial_modes = {{0.0, 1.0 / 16.0}};
    return m;
}

inline spde::MultiplicativeModel example3() {
    spde::MultiplicativeModel m;
    m.a = 1.0;
    m.b = 1.0;
    m.alpha = 0.5;
    m.c = 5.5 + std::sqrt(2.0 * std::numbers::pi) + 4.0 * std::numbers::pi * std::numbers::pi;
    m.epsilon = std::sqrt(2.0) / 2.0;
    m.m = 2;
    m.q_m = 1.0;
    m.initial = {1.0, 0.25};
    return m;
}

inline spde::KpzModel example4() {
    spde::KpzModel m;
    m.theta = 1.0;
    m.xi = 1.0;
    m.epsilon = std::sqrt(2.0) / 2.0;
    m.m = 1;
    m.q_m = 1.0;
    m.initial = {1.0, 0.25};
    m.window = {0.001, 0.999};
    return m;
}

}  // namespace fixtures
