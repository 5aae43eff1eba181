#pragma once

#include <span>
#include <string>
#include <vector>

#include "spde/errors.hpp"
#include "spde/functions.hpp"

namespace spde {

/// Boundary data for the additive problem.
///
/// row == 0 is the main mixed case  dU/dx(t,0) = h(t),  U(t,1) = g(t).
/// rows 1..8 are the catalogue of two-point conditions (Dirichlet, Neumann
/// and Robin combinations), with g attached to x = 0 and h to x = 1:
///
///   1  U(0)=g              U(1)=h
///   2  U(0)=g              U'(1)=h
///   3  U'(0)=g             U'(1)=h
///   4  U(0)=g              (U'+gamma U)(1)=h
///   5  U'(0)=g             (U'+gamma U)(1)=h
///   6  (U'-gamma U)(0)=g   U(1)=h
///   7  (U'-gamma U)(0)=g   U'(1)=h
///   8  (U'-gamma1 U)(0)=g  (U'+gamma2 U)(1)=h
struct BoundaryCase {
    int row = 0;
    TimeFunction g;
    TimeFunction h;
    double gamma = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    static BoundaryCase main(TimeFunction g, TimeFunction h);
    static BoundaryCase table(int row, TimeFunction g, TimeFunction h, double gamma = 0.0,
                              double gamma1 = 0.0, double gamma2 = 0.0);

    std::string describe() const;
};

/// Denominator and row-range checks; empty when the case is usable.
std::vector<Violation> check_boundary(const BoundaryCase& bc);

/// c0 + c1 x + c2 x^2
struct Quadratic {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double value(double x) const { return c0 + x * (c1 + x * c2); }
    double slope(double x) const { return c1 + 2.0 * c2 * x; }
    double curvature() const { return 2.0 * c2; }
};

/// Y(t, x) = g(t) P_g(x) + h(t) P_h(x). Every lift in the catalogue is linear
/// in the boundary data, so two spatial profiles describe it completely.
class LiftFunction {
public:
    LiftFunction() = default;
    LiftFunction(TimeFunction g, TimeFunction h, Quadratic g_profile, Quadratic h_profile)
        : g_(std::move(g)), h_(std::move(h)), g_profile_(g_profile), h_profile_(h_profile) {}

    double operator()(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;
    double dxx(double t) const;

    const TimeFunction& g() const { return g_; }
    const TimeFunction& h() const { return h_; }
    const Quadratic& g_profile() const { return g_profile_; }
    const Quadratic& h_profile() const { return h_profile_; }

    bool analytic_time_derivative() const {
        return g_.has_analytic_derivative() && h_.has_analytic_derivative();
    }
    bool is_zero() const { return g_.is_zero() && h_.is_zero(); }

private:
    TimeFunction g_;
    TimeFunction h_;
    Quadratic g_profile_;
    Quadratic h_profile_;
};

/// Throws DegenerateRobin when the row's denominator vanishes.
LiftFunction build_lift(const BoundaryCase& bc);

/// f~(t,x) = f(t,x) - dY/dt(t,x) + b Y(t,x), kept in separable form.
Forcing effective_forcing(const Forcing& f, const LiftFunction& lift, double b);

/// Max absolute boundary-condition residual of the lift at x = 0 and x = 1.
double verify_boundary(const LiftFunction& lift, const BoundaryCase& bc,
                       std::span<const double> t_samples);

}  // namespace spde
