#include "spde/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spde/errors.hpp"
#include "spde/quadrature.hpp"
#include "spde/random.hpp"

namespace spde {

namespace {

int intervals(double lo, double hi, double step) {
    return std::max(3, static_cast<int>(std::lround((hi - lo) / step)));
}

// Second-order first derivative at index i of a uniformly sampled row.
template <typename At>
double first_derivative(At at, int i, int last, double h) {
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (i == last) return (3.0 * at(last) - 4.0 * at(last - 1) + at(last - 2)) / (2.0 * h);
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

template <typename At>
double second_derivative(At at, int i, int last, double h) {
    if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
    if (i == last) {
        return (2.0 * at(last) - 5.0 * at(last - 1) + 4.0 * at(last - 2) - at(last - 3)) / (h * h);
    }
    return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
}

}  // namespace

ResidualGrid ResidualGrid::halved() const {
    ResidualGrid g = *this;
    g.du *= 0.5;
    g.dt *= 0.5;
    return g;
}

double gaussian_fp_max_residual(const GaussianEvolution& law, const ResidualGrid& grid) {
    const int nu = intervals(grid.u_lo, grid.u_hi, grid.du);
    const int nt = intervals(grid.t_lo, grid.t_hi, grid.dt);
    const double du = (grid.u_hi - grid.u_lo) / nu;
    const double dt = (grid.t_hi - grid.t_lo) / nt;

    std::vector<double> mean(nt + 1), var(nt + 1), drift(nt + 1), diff(nt + 1);
    for (int j = 0; j <= nt; ++j) {
        const double t = grid.t_lo + j * dt;
        mean[j] = law.mean(t);
        var[j] = law.variance(t);
        if (!(var[j] > 0.0)) {
            throw DegenerateVariance("variance " + std::to_string(var[j]) + " at t = " +
                                     std::to_string(t) + " on the residual grid");
        }
        drift[j] = law.drift(t);
        diff[j] = law.diffusion(t);
    }
    const auto p = [&](int i, int j) {
        const double z = grid.u_lo + i * du - mean[j];
        return std::exp(-0.5 * z * z / var[j]) / std::sqrt(2.0 * std::numbers::pi * var[j]);
    };
    std::vector<double> values((nt + 1) * (nu + 1));
    for (int j = 0; j <= nt; ++j) {
        for (int i = 0; i <= nu; ++i) values[j * (nu + 1) + i] = p(i, j);
    }
    const auto at = [&](int i, int j) { return values[j * (nu + 1) + i]; };

    double worst = 0.0;
    for (int j = 0; j <= nt; ++j) {
        for (int i = 0; i <= nu; ++i) {
            const double pt = first_derivative([&](int k) { return at(i, k); }, j, nt, dt);
            const double pu = first_derivative([&](int k) { return at(k, j); }, i, nu, du);
            const double puu = second_derivative([&](int k) { return at(k, j); }, i, nu, du);
            worst = std::max(worst, std::abs(pt - drift[j] * pu - 0.5 * diff[j] * puu));
        }
    }
    return worst;
}

ResidualReport fp_residual_gaussian(const GaussianEvolution& law, const ResidualGrid& grid) {
    ResidualReport report;
    report.grid = grid;
    report.max_abs_residual = gaussian_fp_max_residual(law, grid);
    report.refined_residual = gaussian_fp_max_residual(law, grid.halved());
    report.refinement_order = std::log2(report.max_abs_residual / report.refined_residual);
    return report;
}

GaussianEvolution additive_evolution(const AdditiveSystem& system, double x, int modes) {
    GaussianEvolution law;
    law.mean = [&system, x, modes](double t) {
        return sum_series_truncated(system, t, x, modes, false).mu;
    };
    law.variance = [&system, x, modes](double t) {
        return sum_series_truncated(system, t, x, modes, false).nu;
    };
    law.drift = [&system, x, modes](double t) { return drift_diffusion(system, t, x, modes).M; };
    law.diffusion = [&system, x, modes](double t) { return drift_diffusion(system, t, x, modes).G; };
    return law;
}

ResidualReport fp_residual_additive(const AdditiveSystem& system, double x, int modes,
                                    const ResidualGrid& grid) {
    return fp_residual_gaussian(additive_evolution(system, x, modes), grid);
}

GaussianEvolution kpz_evolution(const KpzModel& model, double x) {
    if (!model.in_window(x)) {
        throw WindowViolation("x = " + std::to_string(x) + " is outside the model window");
    }
    const double drift = -model.scale() * model.b_tilde();
    const double diffusion = std::pow(model.scale() * model.eps_m(), 2);
    GaussianEvolution law;
    law.mean = [model, x](double t) { return kpz_mean(t, x, model); };
    law.variance = [model](double t) { return kpz_variance(t, model); };
    law.drift = [drift](double) { return drift; };
    law.diffusion = [diffusion](double) { return diffusion; };
    return law;
}

ResidualReport fp_residual_kpz(const KpzModel& model, double x, const ResidualGrid& grid) {
    return fp_residual_gaussian(kpz_evolution(model, x), grid);
}

MultiplicativeFpCoefficients multiplicative_fp_coefficients(const MultiplicativeModel& model,
                                                            bool uncorrected) {
    const double e2 = model.eps_m() * model.eps_m();
    const double b = model.b_m();
    MultiplicativeFpCoefficients c;
    c.A = 0.5 * e2;
    if (uncorrected) {
        c.B = 0.5 * (3.0 * e2 - b);
        c.C = 0.5 * (e2 - b);
    } else {
        c.B = 1.5 * e2 - b;
        c.C = 0.5 * e2 - b;
    }
    return c;
}

double fp_identity_multiplicative(double u, double t, double x, const MultiplicativeModel& model,
                                  const MultiplicativeFpCoefficients& c) {
    const LogNormalPartials d = lognormal_partials(u, t, x, model);
    return d.dt - (c.A * u * u * d.duu + c.B * u * d.du + c.C * d.p);
}

double fp_identity_multiplicative(double u, double t, double x, const MultiplicativeModel& model) {
    return fp_identity_multiplicative(u, t, x, model, multiplicative_fp_coefficients(model));
}

IdentitySweep fp_identity_sweep(const MultiplicativeModel& model, int points, std::uint64_t seed,
                                bool uncorrected) {
    if (points < 1) throw InvalidParameter("points", "must be >= 1");
    const auto coefficients = multiplicative_fp_coefficients(model, uncorrected);
    const CounterNormal normal(seed);
    IdentitySweep sweep;
    sweep.points = static_cast<std::size_t>(points);
    for (int i = 0; i < points; ++i) {
        // t in [0.05, 1], x away from the nodal set, ln|u| within 3 sd of its mean
        const double t = 0.05 + 0.95 * normal_cdf(normal(i, 0));
        double x = 0.0;
        for (std::uint64_t k = 1;; ++k) {
            x = normal_cdf(normal(i, 2 * k));
            if (std::abs(std::sin(model.m * std::numbers::pi * x)) > 0.05) break;
        }
        const double z = std::clamp(normal(i, 1), -3.0, 3.0);
        const double sign = std::sin(model.m * std::numbers::pi * x) > 0.0 ? 1.0 : -1.0;
        const double u = sign * std::exp(multiplicative_log_mean(t, x, model) +
                                         std::sqrt(multiplicative_log_variance(t, model)) * z);
        const double r = std::abs(fp_identity_multiplicative(u, t, x, model, coefficients));
        if (r > sweep.max_abs_residual) {
            sweep.max_abs_residual = r;
            sweep.worst = {u, t, x};
        }
    }
    return sweep;
}

namespace {

constexpr int kCkPanels = 64;
constexpr double kCkPanelTolerance = 1e-13;
constexpr int kCkHermiteOrder = 128;

double compose(const TransitionKernel& kernel, double u, const DensityLaw& middle, double r,
               double t) {
    if (const auto* l = std::get_if<SignedLogNormal>(&middle.variant())) {
        const QuadratureRule& rule = gauss_hermite(kCkHermiteOrder);
        const double sd = std::sqrt(l->log_variance);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = l->sign * std::exp(l->log_mean + sd * rule.nodes[i]);
            sum += rule.weights[i] * kernel.proper_law(v, r, t).pdf(u);
        }
        return sum;
    }
    const auto& g = std::get<Gaussian>(middle.variant());
    const double sd = std::sqrt(g.variance);
    const double lo = g.mean - 12.0 * sd;
    const double width = 24.0 * sd / kCkPanels;
    SimpsonOptions options;
    options.tolerance = kCkPanelTolerance;
    const auto integrand = [&](double v) { return kernel.proper_law(v, r, t).pdf(u) * middle.pdf(v); };
    double sum = 0.0;
    for (int k = 0; k < kCkPanels; ++k) {
        sum += adaptive_simpson(integrand, lo + k * width, lo + (k + 1) * width, options);
    }
    return sum;
}

}  // namespace

CkReport ck_check(const TransitionKernel& kernel, double w, double s, double r, double t,
                  std::span<const double> u_grid) {
    if (!(s <= r && r <= t && s < t)) {
        throw InvalidParameter("(s, r, t)", "must satisfy s <= r <= t with s < t");
    }
    CkReport report{s, r, t, 0.0, u_grid.size()};
    const DensityLaw direct = kernel.proper_law(w, s, t);
    // A zero-length leg is an atom and the integral collapses onto the other leg.
    if (r == s || r == t) {
        const DensityLaw collapsed = kernel.proper_law(w, s, t);
        for (const double u : u_grid) {
            report.max_error = std::max(report.max_error, std::abs(collapsed.pdf(u) - direct.pdf(u)));
        }
        return report;
    }
    const DensityLaw middle = kernel.proper_law(w, s, r);
    for (const double u : u_grid) {
        const double err = std::abs(compose(kernel, u, middle, r, t) - direct.pdf(u));
        report.max_error = std::max(report.max_error, err);
    }
    return report;
}

std::vector<double> default_ck_grid(const TransitionKernel& kernel, double w, double s, double t,
                                    int points) {
    const DensityLaw direct = kernel.proper_law(w, s, t);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = direct.quantile(0.001 + 0.998 * i / (points - 1));
    }
    return grid;
}

}  // namespace spde
