#pragma once

#include <functional>
#include <vector>

namespace spde {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre on [-1, 1]. Rules are computed once per order and cached.
const QuadratureRule& gauss_legendre(int order);

/// Gauss-Hermite for the standard normal weight: sum_i w_i f(z_i) ~ E[f(Z)], Z ~ N(0,1).
const QuadratureRule& gauss_hermite(int order);

/// Composite Gauss-Legendre with `panels` equal subintervals of [a, b].
double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                int order, int panels = 1);

struct SimpsonOptions {
    double tolerance = 1e-10;
    int max_depth = 48;
    long max_evaluations = 4'000'000;
};

/// Adaptive Simpson with Richardson correction; absolute tolerance.
/// Throws QuadratureFailure when the evaluation budget runs out.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& options = {});

}  // namespace spde
