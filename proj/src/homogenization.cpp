#include "spde/homogenization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spde {

BoundaryCase BoundaryCase::main(TimeFunction g, TimeFunction h) {
    BoundaryCase bc;
    bc.row = 0;
    bc.g = std::move(g);
    bc.h = std::move(h);
    return bc;
}

BoundaryCase BoundaryCase::table(int row, TimeFunction g, TimeFunction h, double gamma,
                                 double gamma1, double gamma2) {
    BoundaryCase bc;
    bc.row = row;
    bc.g = std::move(g);
    bc.h = std::move(h);
    bc.gamma = gamma;
    bc.gamma1 = gamma1;
    bc.gamma2 = gamma2;
    return bc;
}

std::string BoundaryCase::describe() const {
    std::ostringstream os;
    if (row == 0) {
        os << "main (Neumann at 0, Dirichlet at 1)";
    } else {
        os << "table row " << row;
    }
    return os.str();
}

namespace {

double robin_denominator(const BoundaryCase& bc) {
    switch (bc.row) {
        case 4:
        case 6:
            return 1.0 + bc.gamma;
        case 5:
        case 7:
            return bc.gamma;
        case 8:
            return bc.gamma1 + bc.gamma2 + bc.gamma1 * bc.gamma2;
        default:
            return 1.0;
    }
}

}  // namespace

std::vector<Violation> check_boundary(const BoundaryCase& bc) {
    std::vector<Violation> out;
    if (bc.row < 0 || bc.row > 8) {
        out.push_back({"boundary.row", "must be 0 (main case) or a catalogue row 1..8"});
        return out;
    }
    const double denom = robin_denominator(bc);
    if (denom == 0.0 || !std::isfinite(denom)) {
        const char* field = bc.row == 8 ? "boundary.gamma1/gamma2" : "boundary.gamma";
        out.push_back({field, "Robin denominator of row " + std::to_string(bc.row) + " vanishes"});
    }
    return out;
}

double LiftFunction::operator()(double t, double x) const {
    return g_(t) * g_profile_.value(x) + h_(t) * h_profile_.value(x);
}

double LiftFunction::dt(double t, double x) const {
    return g_.derivative(t) * g_profile_.value(x) + h_.derivative(t) * h_profile_.value(x);
}

double LiftFunction::dx(double t, double x) const {
    return g_(t) * g_profile_.slope(x) + h_(t) * h_profile_.slope(x);
}

double LiftFunction::dxx(double t) const {
    return g_(t) * g_profile_.curvature() + h_(t) * h_profile_.curvature();
}

LiftFunction build_lift(const BoundaryCase& bc) {
    if (auto problems = check_boundary(bc); !problems.empty()) {
        throw DegenerateRobin(problems.front().field + ": " + problems.front().reason);
    }
    Quadratic pg;
    Quadratic ph;
    const double gm = bc.gamma;
    switch (bc.row) {
        case 0:  // h (x - 1) + g
            pg = {1.0, 0.0, 0.0};
            ph = {-1.0, 1.0, 0.0};
            break;
        case 1:  // (h - g) x + g
            pg = {1.0, -1.0, 0.0};
            ph = {0.0, 1.0, 0.0};
            break;
        case 2:  // h x + g
            pg = {1.0, 0.0, 0.0};
            ph = {0.0, 1.0, 0.0};
            break;
        case 3:  // (h - g)/2 x^2 + g x
            pg = {0.0, 1.0, -0.5};
            ph = {0.0, 0.0, 0.5};
            break;
        case 4: {  // (h - gamma g)/(1 + gamma) x + g
            const double d = 1.0 + gm;
            pg = {1.0, -gm / d, 0.0};
            ph = {0.0, 1.0 / d, 0.0};
            break;
        }
        case 5:  // g x + (h - (1 + gamma) g)/gamma
            pg = {-(1.0 + gm) / gm, 1.0, 0.0};
            ph = {1.0 / gm, 0.0, 0.0};
            break;
        case 6: {  // (g + gamma h)/(1 + gamma) x + (h - g)/(1 + gamma)
            const double d = 1.0 + gm;
            pg = {-1.0 / d, 1.0 / d, 0.0};
            ph = {1.0 / d, gm / d, 0.0};
            break;
        }
        case 7:  // h x + (h - g)/gamma
            pg = {-1.0 / gm, 0.0, 0.0};
            ph = {1.0 / gm, 1.0, 0.0};
            break;
        case 8: {  // (gamma1 h + gamma2 g)/D x + (h - (1 + gamma2) g)/D
            const double d = bc.gamma1 + bc.gamma2 + bc.gamma1 * bc.gamma2;
            pg = {-(1.0 + bc.gamma2) / d, bc.gamma2 / d, 0.0};
            ph = {1.0 / d, bc.gamma1 / d, 0.0};
            break;
        }
        default:
            break;
    }
    return LiftFunction(bc.g, bc.h, pg, ph);
}

Forcing effective_forcing(const Forcing& f, const LiftFunction& lift, double b) {
    Forcing out = f;
    // -dY/dt + b Y = (b g - g') P_g + (b h - h') P_h
    if (!lift.g().is_zero()) {
        const Quadratic p = lift.g_profile();
        out.add(lift.g().value_plus_derivative(b, -1.0), [p](double x) { return p.value(x); },
                "lift_g");
    }
    if (!lift.h().is_zero()) {
        const Quadratic p = lift.h_profile();
        out.add(lift.h().value_plus_derivative(b, -1.0), [p](double x) { return p.value(x); },
                "lift_h");
    }
    return out;
}

double verify_boundary(const LiftFunction& lift, const BoundaryCase& bc,
                       std::span<const double> t_samples) {
    if (auto problems = check_boundary(bc); !problems.empty()) {
        throw DegenerateRobin(problems.front().field + ": " + problems.front().reason);
    }
    double worst = 0.0;
    for (const double t : t_samples) {
        const double y0 = lift(t, 0.0);
        const double y1 = lift(t, 1.0);
        const double d0 = lift.dx(t, 0.0);
        const double d1 = lift.dx(t, 1.0);
        const double g = bc.g(t);
        const double h = bc.h(t);
        double left = 0.0;
        double right = 0.0;
        switch (bc.row) {
            case 0: left = d0 - h; right = y1 - g; break;
            case 1: left = y0 - g; right = y1 - h; break;
            case 2: left = y0 - g; right = d1 - h; break;
            case 3: left = d0 - g; right = d1 - h; break;
            case 4: left = y0 - g; right = d1 + bc.gamma * y1 - h; break;
            case 5: left = d0 - g; right = d1 + bc.gamma * y1 - h; break;
            case 6: left = d0 - bc.gamma * y0 - g; right = y1 - h; break;
            case 7: left = d0 - bc.gamma * y0 - g; right = d1 - h; break;
            case 8: left = d0 - bc.gamma1 * y0 - g; right = d1 + bc.gamma2 * y1 - h; break;
            default: break;
        }
        worst = std::max({worst, std::abs(left), std::abs(right)});
    }
    return worst;
}

}  // namespace spde
