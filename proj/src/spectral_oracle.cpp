#include "spde/spectral_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spde/basis.hpp"
#include "spde/errors.hpp"
#include "spde/parallel.hpp"

namespace spde {

double ks_critical_value(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double ks_statistic(std::span<const double> samples, const DensityLaw& law) {
    if (law.is_atom()) throw DegenerateLaw("KS against an atom is undefined; compare interval masses");
    if (samples.empty()) throw InvalidParameter("samples", "must be non-empty");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = law.cdf(sorted[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

EnsembleStats summarize_samples(std::vector<double> samples, const DensityLaw& law, std::uint64_t seed) {
    EnsembleStats stats;
    const SampleMoments m = sample_moments(samples);
    stats.mean = m.mean;
    stats.variance = m.variance;
    stats.ks = law.is_atom() ? std::numeric_limits<double>::quiet_NaN() : ks_statistic(samples, law);
    stats.n = samples.size();
    stats.seed = seed;
    stats.samples = std::move(samples);
    return stats;
}

namespace {

struct ModeDraw {
    double e = 0.0;
    double initial_mean = 0.0;  // mu_n(0)
    double lift_start = 0.0;    // <Y(0,.), e_n>
    double lift_end = 0.0;      // <Y(t,.), e_n>
    double initial_sd = 0.0;
    double growth = 1.0;
    double convolution = 0.0;
    double noise_sd = 0.0;
};

std::vector<ModeDraw> mode_draws(double t, double x, int modes, const AdditiveSystem& system) {
    std::vector<ModeDraw> out(modes);
    for (int n = 1; n <= modes; ++n) {
        ModeDraw& d = out[n - 1];
        const double lam = system.lambda(n);
        const ModeLaw law = system.initial_law(n);
        d.e = basis_eval(Basis::Cosine, n, x);
        d.initial_mean = law.mean;
        d.lift_start = system.lift_coefficient(n, 0.0);
        d.lift_end = system.lift_coefficient(n, t);
        d.initial_sd = std::sqrt(law.variance);
        d.growth = std::exp(lam * t);
        d.convolution = system.forcing_convolution(n, t);
        d.noise_sd = system.model().sigma * system.q(n) * std::sqrt(exprel2(lam, t));
    }
    return out;
}

void check_time(double t) {
    if (!(t >= 0.0)) throw InvalidParameter("t", "must be >= 0");
}

}  // namespace

EnsembleStats sample_additive(double t, double x, int modes, const AdditiveSystem& system,
                              const OracleOptions& options) {
    check_time(t);
    const auto draws = mode_draws(t, x, modes, system);
    const double lift = system.lift()(t, x);
    const CounterNormal normal(options.seed);
    auto samples = parallel_map(options.n_samples, options.threads, [&](std::size_t path) {
        double u = lift;
        for (std::size_t k = 0; k < draws.size(); ++k) {
            const ModeDraw& d = draws[k];
            const double v0 = d.initial_mean - d.lift_start + d.initial_sd * normal(path, 2 * k);
            u += d.e * (v0 * d.growth + d.convolution + d.noise_sd * normal(path, 2 * k + 1));
        }
        return u;
    });
    const DensityLaw law = additive_law(sum_series_truncated(system, t, x, modes, false));
    return summarize_samples(std::move(samples), law, options.seed);
}

EnsembleStats sample_additive_composed(double t, double x, int modes, const AdditiveSystem& system,
                                       const OracleOptions& options) {
    check_time(t);
    const auto draws = mode_draws(t, x, modes, system);
    double remainder = system.lift()(t, x);
    for (const ModeDraw& d : draws) remainder -= d.e * d.lift_end;
    const CounterNormal normal(options.seed);
    auto samples = parallel_map(options.n_samples, options.threads, [&](std::size_t path) {
        double u = remainder;
        for (std::size_t k = 0; k < draws.size(); ++k) {
            const ModeDraw& d = draws[k];
            const double u0 = d.initial_mean + d.initial_sd * normal(path, 2 * k);
            const double ut = (u0 - d.lift_start) * d.growth + d.convolution + d.lift_end +
                              d.noise_sd * normal(path, 2 * k + 1);
            u += d.e * ut;
        }
        return u;
    });
    const DensityLaw law = additive_law(sum_series_truncated(system, t, x, modes, false));
    return summarize_samples(std::move(samples), law, options.seed);
}

EnsembleStats sample_multiplicative(double t, double x, const MultiplicativeModel& model,
                                    const OracleOptions& options) {
    check_time(t);
    const double e = on_gamma(x, model.m) ? 0.0 : basis_eval(Basis::Sine, model.m, x);
    const double mu0 = model.initial.log_mean;
    const double sd0 = std::sqrt(model.initial.log_variance);
    const double drift = model.b_m() * t;
    const double noise = model.eps_m() * std::sqrt(t);
    const CounterNormal normal(options.seed);
    auto samples = parallel_map(options.n_samples, options.threads, [&](std::size_t path) {
        const double log_u0 = mu0 + sd0 * normal(path, 0);
        return std::exp(log_u0 + drift + noise * normal(path, 1)) * e;
    });
    return summarize_samples(std::move(samples), multiplicative_law(t, x, model), options.seed);
}

EnsembleStats sample_kpz(double t, double x, const KpzModel& model, const OracleOptions& options) {
    check_time(t);
    const DensityLaw law = kpz_law(t, x, model);
    const double log_e = std::log(std::abs(basis_eval(Basis::Sine, model.m, x)));
    const double mu0 = model.initial.log_mean;
    const double sd0 = std::sqrt(model.initial.log_variance);
    const double drift = model.b_tilde() * t;
    const double noise = model.eps_m() * std::sqrt(t);
    const double scale = model.scale();
    const CounterNormal normal(options.seed);
    auto samples = parallel_map(options.n_samples, options.threads, [&](std::size_t path) {
        const double log_u0 = mu0 + sd0 * normal(path, 0);
        return scale * (log_u0 + drift + noise * normal(path, 1) + log_e);
    });
    return summarize_samples(std::move(samples), law, options.seed);
}

MultiplicativeModel kpz_source_model(const KpzModel& model) {
    MultiplicativeModel m;
    m.a = std::sqrt(model.theta);
    m.b = 0.0;
    m.c = 0.0;
    m.alpha = 1.0;
    m.epsilon = model.epsilon;
    m.m = model.m;
    m.q_m = model.q_m;
    m.initial = model.initial;
    return m;
}

double draw(const DensityLaw& law, double z) {
    if (const auto* g = std::get_if<Gaussian>(&law.variant())) return g->mean + std::sqrt(g->variance) * z;
    if (const auto* l = std::get_if<SignedLogNormal>(&law.variant())) {
        return l->sign * std::exp(l->log_mean + std::sqrt(l->log_variance) * z);
    }
    return std::get<DegenerateAtom>(law.variant()).value;
}

std::vector<double> sample_kernel_chain(const TransitionKernel& kernel, double w,
                                        std::span<const double> times, const OracleOptions& options) {
    if (times.size() < 2) throw InvalidParameter("times", "needs at least two entries");
    const CounterNormal normal(options.seed);
    return parallel_map(options.n_samples, options.threads, [&](std::size_t path) {
        double v = w;
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            v = draw(kernel.law(v, times[k], times[k + 1]), normal(path, k));
        }
        return v;
    });
}

}  // namespace spde
