#include "spde/basis.hpp"

#include <cmath>
#include <numbers>

namespace spde {

double sin_pi(double r) {
    // Reduce to [0, 2) so that integers land exactly on 0 or 1.
    double reduced = std::fmod(r, 2.0);
    if (reduced < 0.0) reduced += 2.0;
    double sign = 1.0;
    if (reduced >= 1.0) {
        reduced -= 1.0;
        sign = -1.0;
    }
    if (reduced == 0.0) return 0.0;
    if (reduced > 0.5) reduced = 1.0 - reduced;
    return sign * std::sin(std::numbers::pi * reduced);
}

double basis_eval(Basis basis, int n, double x) {
    if (basis == Basis::Cosine) {
        // cos(pi y) = sin(pi (y + 1/2)) with y = (n - 1/2) x
        return std::numbers::sqrt2 * sin_pi((n - 0.5) * x + 0.5);
    }
    return std::numbers::sqrt2 * sin_pi(n * x);
}

double cosine_frequency(int n) { return (n - 0.5) * std::numbers::pi; }

double lambda_additive(int n, double a, double b) {
    const double ab = a * cosine_frequency(n);
    return b - ab * ab;
}

double lambda_nonlocal(int n, double a, double b, double c, double alpha) {
    const double k = n * std::numbers::pi;
    return c - a * a * k * k - b * std::pow(k, alpha);
}

double exprel2(double lambda, double t) {
    const double z = 2.0 * lambda * t;
    if (std::abs(z) < 1e-4) {
        return t * (1.0 + lambda * t + z * z / 6.0);
    }
    return std::expm1(z) / (2.0 * lambda);
}

double exprel1(double lambda, double t) {
    const double z = lambda * t;
    if (std::abs(z) < 1e-4) {
        return t * (1.0 + z / 2.0 + z * z / 6.0);
    }
    return std::expm1(z) / lambda;
}

}  // namespace spde
