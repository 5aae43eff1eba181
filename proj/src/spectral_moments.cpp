#include "spde/spectral_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spde/errors.hpp"

namespace spde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int panels_for(int n) { return 1 + n / 16; }

double sup_quadratic(const Quadratic& q) {
    double best = std::max(std::abs(q.value(0.0)), std::abs(q.value(1.0)));
    if (q.c2 != 0.0) {
        const double vertex = -q.c1 / (2.0 * q.c2);
        if (vertex > 0.0 && vertex < 1.0) best = std::max(best, std::abs(q.value(vertex)));
    }
    return best;
}

// sum_{n > after} exp(lambda_n t) for lambda_n = b - (a beta_n)^2. The ratio of
// consecutive terms decreases in n, so once it drops below 1 the remainder is
// bounded by a geometric series.
double exponential_tail(double a, double b, double t, int after) {
    if (t <= 0.0 || a == 0.0) return kInf;
    double sum = 0.0;
    for (int n = after + 1; n < after + 50'000'000; ++n) {
        const double term = std::exp(lambda_additive(n, a, b) * t);
        const double ratio = std::exp((lambda_additive(n + 1, a, b) - lambda_additive(n, a, b)) * t);
        sum += term;
        if (ratio < 0.5 && term * ratio / (1.0 - ratio) <= 1e-17 * std::max(sum, 1e-300)) {
            return sum + term * ratio / (1.0 - ratio);
        }
        if (term == 0.0) return sum;
    }
    return kInf;
}

// sum_{n > after} int_0^t exp(lambda_n s) ds. Terms past K are bounded by
// 1/|lambda_n| <= 2/(c y^2) with c = (a pi)^2, and the sum by an integral.
double exprel_tail(double a, double b, double t, int after) {
    if (t <= 0.0) return 0.0;
    if (a == 0.0) return kInf;
    const double c = a * a * std::numbers::pi * std::numbers::pi;
    int k = std::max(after + 1, 2);
    while (c * (k - 1.0) * (k - 1.0) < 2.0 * std::abs(b) || lambda_additive(k, a, b) >= 0.0) ++k;
    double sum = 0.0;
    for (int n = after + 1; n < k; ++n) sum += exprel1(lambda_additive(n, a, b), t);
    return sum + 2.0 / (c * (k - 1.0));
}

}  // namespace

double quadratic_cosine_coefficient(const Quadratic& q, int n) {
    // int_0^1 x^k cos(beta x) dx with cos(beta) = 0, sin(beta) = (-1)^(n+1)
    const double beta = cosine_frequency(n);
    const double s = n % 2 == 1 ? 1.0 : -1.0;
    const double i0 = s / beta;
    const double i1 = s / beta - 1.0 / (beta * beta);
    const double i2 = s / beta - 2.0 * s / (beta * beta * beta);
    return std::numbers::sqrt2 * (q.c0 * i0 + q.c1 * i1 + q.c2 * i2);
}

double fourier_coefficient(const std::function<double(double)>& func, Basis basis, int n,
                           int quadrature_order) {
    return integrate_gauss_legendre([&](double x) { return func(x) * basis_eval(basis, n, x); },
                                    0.0, 1.0, quadrature_order, panels_for(n));
}

double mode_variance(Basis basis, int n, double t, double x, double sigma, double q_n,
                     double nu_n0, double lambda_n) {
    const double e = basis_eval(basis, n, x);
    const double e2 = e * e;
    const double s = sigma * q_n;
    return nu_n0 * e2 * std::exp(2.0 * lambda_n * t) + s * s * e2 * exprel2(lambda_n, t);
}

AdditiveSystem::AdditiveSystem(AdditiveModel model, int quadrature_order)
    : model_(std::move(model)), quadrature_order_(quadrature_order) {
    lift_ = build_lift(model_.boundary);
    forcing_ = spde::effective_forcing(model_.forcing, lift_, model_.b);
    term_cache_.resize(forcing_.terms().size());
    // The lift's own terms have quadratic profiles with exact projections.
    for (const auto& term : forcing_.terms()) {
        if (term.profile_name == "lift_g") {
            term_quadratic_.push_back(lift_.g_profile());
        } else if (term.profile_name == "lift_h") {
            term_quadratic_.push_back(lift_.h_profile());
        } else {
            term_quadratic_.push_back(std::nullopt);
        }
    }
    closed_form_ = !forcing_.has_general_part();
    for (const auto& term : forcing_.terms()) {
        closed_form_ = closed_form_ && term.time.harmonic_tag().has_value();
    }
}

double AdditiveSystem::cached_projection(std::vector<double>& cache,
                                         const std::function<double(double)>& f, int n) const {
    std::lock_guard lock(cache_mutex_);
    while (static_cast<int>(cache.size()) < n) {
        const int k = static_cast<int>(cache.size()) + 1;
        cache.push_back(fourier_coefficient(f, Basis::Cosine, k, quadrature_order_));
    }
    return cache[n - 1];
}

double AdditiveSystem::term_coefficient(std::size_t term, int n) const {
    if (term_quadratic_[term]) return quadratic_cosine_coefficient(*term_quadratic_[term], n);
    return cached_projection(term_cache_[term], forcing_.terms()[term].profile, n);
}

double AdditiveSystem::general_coefficient(int n, double s) const {
    const auto& general = forcing_.general_part();
    return fourier_coefficient([&](double x) { return general(s, x); }, Basis::Cosine, n,
                               quadrature_order_);
}

double AdditiveSystem::lift_coefficient(int n, double t) const {
    if (lift_.is_zero()) return 0.0;
    return lift_.g()(t) * quadratic_cosine_coefficient(lift_.g_profile(), n) +
           lift_.h()(t) * quadratic_cosine_coefficient(lift_.h_profile(), n);
}

double AdditiveSystem::lift_coefficient_dt(int n, double t) const {
    if (lift_.is_zero()) return 0.0;
    return lift_.g().derivative(t) * quadratic_cosine_coefficient(lift_.g_profile(), n) +
           lift_.h().derivative(t) * quadratic_cosine_coefficient(lift_.h_profile(), n);
}

double AdditiveSystem::forcing_coefficient(int n, double s) const {
    double value = forcing_.has_general_part() ? general_coefficient(n, s) : 0.0;
    const auto& terms = forcing_.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        value += terms[i].time(s) * term_coefficient(i, n);
    }
    return value;
}

double AdditiveSystem::forcing_convolution(int n, double t) const {
    if (t <= 0.0 || forcing_.is_zero()) return 0.0;
    const double lam = lambda(n);
    if (closed_form_ && closed_form_enabled_) {
        double total = 0.0;
        const auto& terms = forcing_.terms();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double coef = term_coefficient(i, n);
            if (coef != 0.0) total += coef * terms[i].time.harmonic_tag()->convolve_exponential(lam, t);
        }
        return total;
    }
    return adaptive_simpson(
        [&](double s) { return std::exp(lam * (t - s)) * forcing_coefficient(n, s); }, 0.0, t);
}

double AdditiveSystem::homogeneous_mode_mean(int n, double t, double x) const {
    const double e = basis_eval(Basis::Cosine, n, x);
    if (e == 0.0) return 0.0;
    const double lam = lambda(n);
    const double start = initial_law(n).mean - lift_coefficient(n, 0.0);
    return e * (start * std::exp(lam * t) + forcing_convolution(n, t));
}

double AdditiveSystem::homogeneous_mode_mean_dt(int n, double t, double x) const {
    const double e = basis_eval(Basis::Cosine, n, x);
    if (e == 0.0) return 0.0;
    const double lam = lambda(n);
    const double start = initial_law(n).mean - lift_coefficient(n, 0.0);
    // d/dt int_0^t e^{lam (t-s)} f_n(s) ds = f_n(t) + lam * (the integral)
    return e * (lam * start * std::exp(lam * t) + forcing_coefficient(n, t) +
                lam * forcing_convolution(n, t));
}

double AdditiveSystem::sup_initial_lift() const {
    return std::abs(lift_.g()(0.0)) * sup_quadratic(lift_.g_profile()) +
           std::abs(lift_.h()(0.0)) * sup_quadratic(lift_.h_profile());
}

double AdditiveSystem::sup_effective_forcing(double t) const {
    if (forcing_.is_zero()) return 0.0;
    constexpr int kTimes = 64;
    constexpr int kSpace = 128;
    double best = 0.0;
    for (int i = 0; i <= kTimes; ++i) {
        const double s = t * i / kTimes;
        for (int j = 0; j <= kSpace; ++j) {
            best = std::max(best, std::abs(forcing_(s, static_cast<double>(j) / kSpace)));
        }
    }
    return best;
}

double mode_mean(const AdditiveSystem& system, int n, double t, double x) {
    return system.homogeneous_mode_mean(n, t, x) +
           system.lift_coefficient(n, t) * basis_eval(Basis::Cosine, n, x);
}

double mean_tail_bound(const AdditiveSystem& system, double t, int modes) {
    const AdditiveModel& model = system.model();
    double initial = 0.0;
    for (std::size_t i = static_cast<std::size_t>(modes); i < model.initial_modes.size(); ++i) {
        initial += std::abs(model.initial_modes[i].mean);
    }
    double bound = std::numbers::sqrt2 * initial;
    const double y0 = system.sup_initial_lift();
    if (y0 > 0.0) bound += 2.0 * y0 * exponential_tail(model.a, model.b, t, modes);
    const double f = system.sup_effective_forcing(t);
    if (f > 0.0 && t > 0.0) bound += 2.0 * f * exprel_tail(model.a, model.b, t, modes);
    return bound;
}

double variance_tail_bound(const AdditiveSystem& system, double t, int modes) {
    const AdditiveModel& model = system.model();
    double initial = 0.0;
    for (std::size_t i = static_cast<std::size_t>(modes); i < model.initial_modes.size(); ++i) {
        initial += model.initial_modes[i].variance;
    }
    const double s2 = model.sigma * model.sigma;
    double bound = 2.0 * initial;
    if (s2 == 0.0 || t <= 0.0) return bound;
    if (model.a == 0.0) {
        const double factor = model.b <= -1.0 ? 1.0 : 2.0 * exprel2(model.b, t);
        return bound + s2 * factor * model.noise.tail_trace(modes);
    }
    // Modes with lambda_n > -1 are summed exactly; past them 2 exprel2 <= 1.
    int n = modes + 1;
    for (; system.lambda(n) > -1.0; ++n) {
        const double q = system.q(n);
        bound += 2.0 * s2 * q * q * exprel2(system.lambda(n), t);
    }
    return bound + s2 * model.noise.tail_trace(n - 1);
}

MomentField sum_series_truncated(const AdditiveSystem& system, double t, double x, int modes,
                                 bool with_tails) {
    const AdditiveModel& model = system.model();
    MomentField field;
    field.t = t;
    field.x = x;
    field.modes = modes;
    field.mu = system.lift()(t, x);
    for (int n = 1; n <= modes; ++n) {
        field.mu += system.homogeneous_mode_mean(n, t, x);
        field.nu += mode_variance(Basis::Cosine, n, t, x, model.sigma, system.q(n),
                                  system.initial_law(n).variance, system.lambda(n));
    }
    if (!with_tails) {
        field.certified = false;
        return field;
    }
    field.tail_bound_mu = mean_tail_bound(system, t, modes);
    field.tail_bound_nu = variance_tail_bound(system, t, modes);
    field.certified = std::isfinite(field.tail_bound_mu) && std::isfinite(field.tail_bound_nu);
    return field;
}

MomentField sum_series(const AdditiveSystem& system, double t, double x,
                       const SeriesOptions& options) {
    const auto met = [&](int n) {
        return mean_tail_bound(system, t, n) <= options.tolerance &&
               variance_tail_bound(system, t, n) <= options.tolerance;
    };
    // Both bounds are non-increasing in N: double, then bisect.
    int hi = 1;
    while (hi < options.cap && !met(hi)) hi = std::min(2 * hi, options.cap);
    if (!met(hi)) {
        MomentField field = sum_series_truncated(system, t, x, options.cap);
        field.certified = false;
        if (options.strict) {
            throw TailNotCertified("tail bounds (" + std::to_string(field.tail_bound_mu) + ", " +
                                   std::to_string(field.tail_bound_nu) + ") exceed tolerance at N = " +
                                   std::to_string(options.cap));
        }
        return field;
    }
    int lo = hi / 2;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (met(mid) ? hi : lo) = mid;
    }
    return sum_series_truncated(system, t, x, hi);
}

DriftDiffusion drift_diffusion(const AdditiveSystem& system, double t, double x, int modes) {
    const AdditiveModel& model = system.model();
    DriftDiffusion dd;
    dd.t = t;
    dd.x = x;
    double dmu = system.lift().dt(t, x);
    for (int n = 1; n <= modes; ++n) {
        dmu += system.homogeneous_mode_mean_dt(n, t, x);
        const double lam = system.lambda(n);
        const double s = model.sigma * system.q(n);
        const double e = basis_eval(Basis::Cosine, n, x);
        dd.G += (2.0 * lam * system.initial_law(n).variance + s * s) * e * e * std::exp(2.0 * lam * t);
    }
    dd.M = -dmu;
    return dd;
}

DriftDiffusion time_reversed_drift_diffusion(const AdditiveSystem& system, double s, double x,
                                             double horizon, int modes) {
    DriftDiffusion dd = drift_diffusion(system, horizon - s, x, modes);
    dd.t = s;
    return dd;
}

void require_positive_diffusion(const DriftDiffusion& dd) {
    if (!(dd.G > 0.0)) {
        throw NonPositiveDiffusion("G(" + std::to_string(dd.t) + ", " + std::to_string(dd.x) +
                                   ") = " + std::to_string(dd.G) + " is not positive");
    }
}

}  // namespace spde
