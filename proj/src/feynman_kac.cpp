#include "spde/feynman_kac.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spde/errors.hpp"
#include "spde/fokker_planck.hpp"
#include "spde/parallel.hpp"

namespace spde {

namespace {

McEstimate summarize(const std::vector<double>& values, double scale, const McOptions& options) {
    const SampleMoments m = sample_moments(values);
    McEstimate e;
    e.value = scale * m.mean;
    e.std_error = scale * std::sqrt(m.variance / static_cast<double>(values.size()));
    e.n_paths = values.size();
    e.seed = options.seed;
    e.dt = options.dt;
    return e;
}

McEstimate exact(double value, const McOptions& options) {
    McEstimate e;
    e.value = value;
    e.n_paths = options.n_paths;
    e.seed = options.seed;
    e.dt = options.dt;
    return e;
}

void check_options(const McOptions& options) {
    if (!(options.dt > 0.0)) throw InvalidParameter("dt", "must be > 0");
    if (options.n_paths < 2) throw InvalidParameter("n_paths", "must be at least 2");
}

void check_time(double t, double T) {
    if (!(t >= 0.0 && t <= T)) throw InvalidParameter("t", "must lie in [0, T]");
}

}  // namespace

std::vector<double> step_times(double s0, double T, double dt) {
    std::vector<double> times{s0};
    const auto steps = static_cast<long>(std::ceil((T - s0) / dt - 1e-9));
    for (long k = 1; k < steps; ++k) times.push_back(s0 + k * dt);
    if (T > s0) times.push_back(T);
    return times;
}

double euler_maruyama(const SdeCoefficients& coeffs, double init, double dt,
                      const CounterNormal& normal, std::uint64_t path) {
    const std::vector<double> times = step_times(coeffs.s0, coeffs.T, dt);
    double x = init;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double s = times[k];
        const double h = times[k + 1] - s;
        const double diffusion = coeffs.diffusion(s, x);
        if (diffusion < 0.0) {
            throw NegativeDiffusion("diffusion " + std::to_string(diffusion) + " at s = " +
                                    std::to_string(s));
        }
        x += coeffs.drift(s, x) * h;
        if (diffusion != 0.0) x += diffusion * std::sqrt(h) * normal(path, k);
    }
    return x;
}

double euler_maruyama(const SdeCoefficients& coeffs, double init, double dt, std::uint64_t seed,
                      std::uint64_t path) {
    return euler_maruyama(coeffs, init, dt, CounterNormal(seed), path);
}

McEstimate estimate_additive_pdf(double u, double t, double x, double T, const AdditiveSystem& system,
                                 int modes, const McOptions& options) {
    check_options(options);
    check_time(t, T);
    const MomentField initial = sum_series_truncated(system, 0.0, x, modes, false);
    if (!(initial.nu > 0.0)) {
        throw DegenerateInitialLaw("nu(0, " + std::to_string(x) +
                                   ") = 0, so p(., 0, x) is not a proper density");
    }
    const Gaussian start{initial.mu, initial.nu};
    if (t == 0.0) return exact(DensityLaw(start).pdf(u), options);

    // The coefficients do not depend on the state, so they are tabulated once.
    const std::vector<double> times = step_times(T - t, T, options.dt);
    const std::size_t steps = times.size() - 1;
    std::vector<double> drift_step(steps);
    std::vector<double> noise_scale(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double h = times[k + 1] - times[k];
        const DriftDiffusion dd = time_reversed_drift_diffusion(system, times[k], x, T, modes);
        require_positive_diffusion(dd);
        drift_step[k] = dd.M * h;
        noise_scale[k] = std::sqrt(dd.G * h);
    }
    const CounterNormal normal(options.seed);
    const DensityLaw terminal(start);
    const auto values = parallel_map(options.n_paths, options.threads, [&](std::size_t path) {
        double v = u;
        for (std::size_t k = 0; k < steps; ++k) v += drift_step[k] + noise_scale[k] * normal(path, k);
        return terminal.pdf(v);
    });
    return summarize(values, 1.0, options);
}

McEstimate estimate_multiplicative_pdf(double u, double t, double x, const MultiplicativeModel& model,
                                       const McOptions& options, GbmScheme scheme) {
    check_options(options);
    if (t < 0.0) throw InvalidParameter("t", "must be >= 0");
    const Region region = classify_region(u, x, model.m);
    if (!region.supported()) {
        throw RegionViolation("(u, x) = (" + std::to_string(u) + ", " + std::to_string(x) + ") is in " +
                              region_name(region.kind) + ", not D1 or D2");
    }
    const DensityLaw start = multiplicative_law(0.0, x, model);
    if (start.is_atom()) {
        throw DegenerateInitialLaw("Var ln U_m(0) = 0, so p(., 0, x) is not a proper density");
    }
    if (t == 0.0) return exact(start.pdf(u), options);

    const MultiplicativeFpCoefficients c = multiplicative_fp_coefficients(model);
    const double eps = model.eps_m();
    const CounterNormal normal(options.seed);
    std::vector<double> values;
    if (scheme == GbmScheme::Exact) {
        const double log_drift = (c.B - 0.5 * eps * eps) * t;
        const double log_sd = eps * std::sqrt(t);
        values = parallel_map(options.n_paths, options.threads, [&](std::size_t path) {
            return start.pdf(u * std::exp(log_drift + log_sd * normal(path, 0)));
        });
    } else {
        const SdeCoefficients sde{[b = c.B](double, double v) { return b * v; },
                                  [eps](double, double v) { return eps * std::abs(v); }, 0.0, t};
        values = parallel_map(options.n_paths, options.threads, [&](std::size_t path) {
            return start.pdf(euler_maruyama(sde, u, options.dt, normal, path));
        });
    }
    return summarize(values, std::exp(c.C * t), options);
}

ConstantSde kpz_fk_coefficients(const KpzModel& model) {
    return {-model.scale() * model.b_tilde(), model.scale() * model.eps_m()};
}

McEstimate estimate_kpz_pdf(double kappa, double t, double x, double T, const KpzModel& model,
                            const McOptions& options, KpzScheme scheme) {
    check_options(options);
    check_time(t, T);
    const DensityLaw start = kpz_law(0.0, x, model);
    if (start.is_atom()) {
        throw DegenerateInitialLaw("Var ln U_m(0) = 0, so p(., 0, x) is not a proper density");
    }
    if (t == 0.0) return exact(start.pdf(kappa), options);

    const auto [drift, diffusion] = kpz_fk_coefficients(model);
    const CounterNormal normal(options.seed);
    std::vector<double> values;
    if (scheme == KpzScheme::Exact) {
        values = parallel_map(options.n_paths, options.threads, [&](std::size_t path) {
            return start.pdf(kappa + drift * t + diffusion * std::sqrt(t) * normal(path, 0));
        });
    } else {
        const SdeCoefficients sde{[drift](double, double) { return drift; },
                                  [diffusion](double, double) { return diffusion; }, T - t, T};
        values = parallel_map(options.n_paths, options.threads, [&](std::size_t path) {
            return start.pdf(euler_maruyama(sde, kappa, options.dt, normal, path));
        });
    }
    return summarize(values, 1.0, options);
}

}  // namespace spde
