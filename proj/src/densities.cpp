#include "spde/densities.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spde/basis.hpp"
#include "spde/errors.hpp"

namespace spde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double gaussian_pdf(double u, double mean, double variance) {
    const double z = u - mean;
    return kInvSqrt2Pi / std::sqrt(variance) * std::exp(-0.5 * z * z / variance);
}

double standard_quantile(double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_ccdf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double DensityLaw::pdf(double u) const {
    if (const auto* g = std::get_if<Gaussian>(&law_)) return gaussian_pdf(u, g->mean, g->variance);
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        if (u == 0.0 || (u > 0.0) != (l->sign > 0)) return 0.0;
        const double a = std::abs(u);
        return gaussian_pdf(std::log(a), l->log_mean, l->log_variance) / a;
    }
    throw DegenerateLaw("an atom has no pointwise density; use interval masses");
}

double DensityLaw::cdf(double u) const {
    if (const auto* g = std::get_if<Gaussian>(&law_)) {
        return normal_cdf((u - g->mean) / std::sqrt(g->variance));
    }
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        const double sd = std::sqrt(l->log_variance);
        if (l->sign > 0) return u <= 0.0 ? 0.0 : normal_cdf((std::log(u) - l->log_mean) / sd);
        return u >= 0.0 ? 1.0 : normal_ccdf((std::log(-u) - l->log_mean) / sd);
    }
    return u >= std::get<DegenerateAtom>(law_).value ? 1.0 : 0.0;
}

double DensityLaw::interval_mass(double lo, double hi) const {
    if (hi < lo) return 0.0;
    if (const auto* a = std::get_if<DegenerateAtom>(&law_)) {
        return lo <= a->value && a->value <= hi ? 1.0 : 0.0;
    }
    if (const auto* g = std::get_if<Gaussian>(&law_)) {
        // Difference of complements on the right tail keeps precision there.
        const double sd = std::sqrt(g->variance);
        const double zl = (lo - g->mean) / sd;
        const double zh = (hi - g->mean) / sd;
        if (zl > 0.0) return normal_ccdf(zl) - normal_ccdf(zh);
        return normal_cdf(zh) - normal_cdf(zl);
    }
    return cdf(hi) - cdf(lo);
}

double DensityLaw::quantile(double p) const {
    if (const auto* g = std::get_if<Gaussian>(&law_)) {
        return g->mean + std::sqrt(g->variance) * standard_quantile(p);
    }
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        const double sd = std::sqrt(l->log_variance);
        if (l->sign > 0) return std::exp(l->log_mean + sd * standard_quantile(p));
        return -std::exp(l->log_mean + sd * standard_quantile(1.0 - p));
    }
    return std::get<DegenerateAtom>(law_).value;
}

double DensityLaw::mean() const {
    if (const auto* g = std::get_if<Gaussian>(&law_)) return g->mean;
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        return l->sign * std::exp(l->log_mean + 0.5 * l->log_variance);
    }
    return std::get<DegenerateAtom>(law_).value;
}

double DensityLaw::variance() const {
    if (const auto* g = std::get_if<Gaussian>(&law_)) return g->variance;
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        return std::expm1(l->log_variance) * std::exp(2.0 * l->log_mean + l->log_variance);
    }
    return 0.0;
}

std::pair<double, double> DensityLaw::support() const {
    if (std::holds_alternative<Gaussian>(law_)) return {-kInf, kInf};
    if (const auto* l = std::get_if<SignedLogNormal>(&law_)) {
        return l->sign > 0 ? std::pair{0.0, kInf} : std::pair{-kInf, 0.0};
    }
    const double v = std::get<DegenerateAtom>(law_).value;
    return {v, v};
}

DensityLaw additive_law(const MomentField& field) {
    if (field.nu > 0.0) return Gaussian{field.mu, field.nu};
    return DegenerateAtom{field.mu};
}

double additive_pdf(double u, const MomentField& field) {
    if (!(field.nu > 0.0)) {
        throw DegenerateVariance("nu(" + std::to_string(field.t) + ", " + std::to_string(field.x) +
                                 ") = " + std::to_string(field.nu) + "; the law is an atom at mu");
    }
    return gaussian_pdf(u, field.mu, field.nu);
}

bool on_gamma(double x, int m) {
    const double k = std::round(x * m);
    return std::abs(x - k / m) <= kGammaTolerance;
}

Region classify_region(double u, double x, int m) {
    Region region;
    region.m = m;
    if (on_gamma(x, m)) {
        region.kind = Region::Kind::Gamma;
        return region;
    }
    const double y = m * x;
    if (u > 0.0) {
        const int k = static_cast<int>(std::floor(y / 2.0));
        if (2.0 * k < y && y < 2.0 * k + 1.0) {
            region.kind = Region::Kind::D1;
            region.k = k;
        }
    } else if (u < 0.0) {
        const int k = static_cast<int>(std::floor((y - 1.0) / 2.0));
        if (2.0 * k + 1.0 < y && y < 2.0 * k + 2.0 && x < 1.0) {
            region.kind = Region::Kind::D2;
            region.k = k;
        }
    }
    return region;
}

const char* region_name(Region::Kind kind) {
    switch (kind) {
        case Region::Kind::Gamma: return "Gamma";
        case Region::Kind::D1: return "D1";
        case Region::Kind::D2: return "D2";
        default: return "OffSupport";
    }
}

double multiplicative_log_mean(double t, double x, const MultiplicativeModel& model) {
    return model.initial.log_mean + model.b_m() * t +
           std::log(std::abs(basis_eval(Basis::Sine, model.m, x)));
}

double multiplicative_log_variance(double t, const MultiplicativeModel& model) {
    const double e = model.eps_m();
    return model.initial.log_variance + e * e * t;
}

DensityLaw multiplicative_law(double t, double x, const MultiplicativeModel& model) {
    if (on_gamma(x, model.m)) return DegenerateAtom{0.0};
    const int sign = basis_eval(Basis::Sine, model.m, x) > 0.0 ? 1 : -1;
    const double mu = multiplicative_log_mean(t, x, model);
    const double nu = multiplicative_log_variance(t, model);
    if (!(nu > 0.0)) return DegenerateAtom{sign * std::exp(mu)};
    return SignedLogNormal{sign, mu, nu};
}

double multiplicative_pdf(double u, double t, double x, const MultiplicativeModel& model) {
    const Region region = classify_region(u, x, model.m);
    if (region.kind == Region::Kind::Gamma) {
        throw DegenerateLaw("x = " + std::to_string(x) +
                            " is a zero of the excited mode; the law is an atom at 0");
    }
    if (!region.supported()) return 0.0;
    return multiplicative_law(t, x, model).pdf(u);
}

LogNormalPartials lognormal_partials(double u, double t, double x, const MultiplicativeModel& model) {
    if (!classify_region(u, x, model.m).supported()) {
        throw RegionViolation("(u, x) = (" + std::to_string(u) + ", " + std::to_string(x) +
                              ") is not in D1 or D2");
    }
    const double mu = multiplicative_log_mean(t, x, model);
    const double nu = multiplicative_log_variance(t, model);
    const double dmu = model.b_m();
    const double e = model.eps_m();
    const double dnu = e * e;
    const double z = std::log(std::abs(u)) - mu;
    LogNormalPartials out;
    out.p = gaussian_pdf(z, 0.0, nu) / std::abs(u);
    const double a = 1.0 + z / nu;
    out.du = -a / u * out.p;
    out.duu = (a - 1.0 / nu + a * a) / (u * u) * out.p;
    out.dt = (-0.5 * dnu / nu + z * dmu / nu + 0.5 * z * z * dnu / (nu * nu)) * out.p;
    return out;
}

double dirac_limit_mass(double t, double x, double delta, const MultiplicativeModel& model) {
    if (on_gamma(x, model.m)) return 1.0;
    const double nu = multiplicative_log_variance(t, model);
    return normal_cdf((std::log(delta) - multiplicative_log_mean(t, x, model)) / std::sqrt(nu));
}

double dirac_escape_mass(double t, double x, double delta, const MultiplicativeModel& model) {
    if (on_gamma(x, model.m)) return 0.0;
    const double nu = multiplicative_log_variance(t, model);
    return normal_ccdf((std::log(delta) - multiplicative_log_mean(t, x, model)) / std::sqrt(nu));
}

double kpz_mean(double t, double x, const KpzModel& model) {
    return model.scale() * (model.initial.log_mean + model.b_tilde() * t +
                            std::log(std::abs(basis_eval(Basis::Sine, model.m, x))));
}

double kpz_variance(double t, const KpzModel& model) {
    const double s = model.scale();
    const double e = model.eps_m();
    return s * s * (model.initial.log_variance + e * e * t);
}

DensityLaw kpz_law(double t, double x, const KpzModel& model) {
    if (!model.in_window(x)) {
        throw WindowViolation("x = " + std::to_string(x) + " is outside the window (" +
                              std::to_string(model.window.lo) + ", " +
                              std::to_string(model.window.hi) + ")");
    }
    const double nu = kpz_variance(t, model);
    if (!(nu > 0.0)) return DegenerateAtom{kpz_mean(t, x, model)};
    return Gaussian{kpz_mean(t, x, model), nu};
}

double kpz_pdf(double kappa, double t, double x, const KpzModel& model) {
    return kpz_law(t, x, model).pdf(kappa);
}

TransitionKernel TransitionKernel::additive_mode(std::shared_ptr<const AdditiveSystem> system, int n,
                                                 double x) {
    TransitionKernel k;
    k.family_ = Family::AdditiveMode;
    k.system_ = std::move(system);
    k.n_ = n;
    k.x_ = x;
    return k;
}

TransitionKernel TransitionKernel::multiplicative_gbm(const MultiplicativeModel& model) {
    TransitionKernel k;
    k.family_ = Family::MultiplicativeGbm;
    k.drift_ = model.b_m();
    k.diffusion_ = model.eps_m();
    return k;
}

TransitionKernel TransitionKernel::kpz_brownian(const KpzModel& model) {
    TransitionKernel k;
    k.family_ = Family::KpzBrownian;
    k.drift_ = model.scale() * model.b_tilde();
    k.diffusion_ = model.scale() * model.eps_m();
    return k;
}

DensityLaw TransitionKernel::law(double w, double s, double t) const {
    if (t == s) return DegenerateAtom{w};
    const double tau = t - s;
    switch (family_) {
        case Family::AdditiveMode: {
            const AdditiveSystem& sys = *system_;
            const double e = basis_eval(Basis::Cosine, n_, x_);
            const double lam = sys.lambda(n_);
            const double growth = std::exp(lam * tau);
            // int_s^t e^{lam (t-r)} f_n(r) dr = I(t) - e^{lam (t-s)} I(s)
            const double conv = sys.forcing_convolution(n_, t) - growth * sys.forcing_convolution(n_, s);
            const double mean = (w - sys.lift_coefficient(n_, s) * e) * growth + e * conv +
                                sys.lift_coefficient(n_, t) * e;
            const double amp = sys.model().sigma * sys.q(n_) * e;
            const double var = amp * amp * exprel2(lam, tau);
            if (!(var > 0.0)) return DegenerateAtom{mean};
            return Gaussian{mean, var};
        }
        case Family::MultiplicativeGbm: {
            const double var = diffusion_ * diffusion_ * tau;
            if (w == 0.0) return DegenerateAtom{0.0};
            const double log_mean = std::log(std::abs(w)) + drift_ * tau;
            if (!(var > 0.0)) return DegenerateAtom{(w > 0.0 ? 1.0 : -1.0) * std::exp(log_mean)};
            return SignedLogNormal{w > 0.0 ? 1 : -1, log_mean, var};
        }
        case Family::KpzBrownian:
        default: {
            const double mean = w + drift_ * tau;
            const double var = diffusion_ * diffusion_ * tau;
            if (!(var > 0.0)) return DegenerateAtom{mean};
            return Gaussian{mean, var};
        }
    }
}

DensityLaw TransitionKernel::proper_law(double w, double s, double t) const {
    DensityLaw out = law(w, s, t);
    if (t != s && out.is_atom()) {
        throw DegenerateKernel(std::string(family_name(family_)) +
                               " kernel has zero variance on (" + std::to_string(s) + ", " +
                               std::to_string(t) + ")");
    }
    return out;
}

const char* family_name(TransitionKernel::Family family) {
    switch (family) {
        case TransitionKernel::Family::AdditiveMode: return "additive-mode";
        case TransitionKernel::Family::MultiplicativeGbm: return "multiplicative-gbm";
        default: return "kpz-brownian";
    }
}

}  // namespace spde
