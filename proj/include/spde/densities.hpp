#pragma once

#include <memory>
#include <utility>
#include <variant>

#include "spde/model.hpp"
#include "spde/spectral_moments.hpp"

namespace spde {

struct Gaussian {
    double mean = 0.0;
    double variance = 1.0;
};

/// sign * exp(Z) with Z ~ N(log_mean, log_variance)
struct SignedLogNormal {
    int sign = 1;
    double log_mean = 0.0;
    double log_variance = 1.0;
};

struct DegenerateAtom {
    double value = 0.0;
};

/// One of the three laws the densities take. Atoms have no pointwise density:
/// pdf() throws DegenerateLaw and callers use interval_mass() instead.
class DensityLaw {
public:
    using Variant = std::variant<Gaussian, SignedLogNormal, DegenerateAtom>;

    DensityLaw() = default;
    DensityLaw(Gaussian g) : law_(g) {}
    DensityLaw(SignedLogNormal l) : law_(l) {}
    DensityLaw(DegenerateAtom a) : law_(a) {}

    const Variant& variant() const { return law_; }
    bool is_atom() const { return std::holds_alternative<DegenerateAtom>(law_); }

    double pdf(double u) const;
    double cdf(double u) const;
    /// P(lo < X <= hi); an atom counts when lo <= value <= hi.
    double interval_mass(double lo, double hi) const;
    double quantile(double p) const;
    double mean() const;
    double variance() const;
    /// Closure of the support.
    std::pair<double, double> support() const;

private:
    Variant law_ = Gaussian{};
};

/// Standard normal cdf and its complement, accurate in the far tails.
double normal_cdf(double z);
double normal_ccdf(double z);

// --- additive -------------------------------------------------------------

/// Gaussian law of U(t,x), or an atom at mu when nu = 0.
DensityLaw additive_law(const MomentField& field);

/// Throws DegenerateVariance when nu(t,x) <= 0.
double additive_pdf(double u, const MomentField& field);

// --- multiplicative -------------------------------------------------------

struct Region {
    enum class Kind { Gamma, D1, D2, OffSupport };
    Kind kind = Kind::OffSupport;
    int k = 0;
    int m = 1;

    bool supported() const { return kind == Kind::D1 || kind == Kind::D2; }
};

inline constexpr double kGammaTolerance = 1e-12;

bool on_gamma(double x, int m);
Region classify_region(double u, double x, int m);
const char* region_name(Region::Kind kind);

/// mu(t,x) = E ln U_m(0) + b_m t + ln|e~_m(x)|
double multiplicative_log_mean(double t, double x, const MultiplicativeModel& model);
/// nu(t) = Var ln U_m(0) + eps_m^2 t
double multiplicative_log_variance(double t, const MultiplicativeModel& model);

/// Atom at 0 on Gamma, signed log-normal elsewhere (atom at the deterministic
/// value when nu(t) = 0).
DensityLaw multiplicative_law(double t, double x, const MultiplicativeModel& model);

/// 0 off the support; throws DegenerateLaw on Gamma, where the law is an atom.
double multiplicative_pdf(double u, double t, double x, const MultiplicativeModel& model);

struct LogNormalPartials {
    double p = 0.0;
    double dt = 0.0;
    double du = 0.0;
    double duu = 0.0;
};

/// Analytic partials of the log-normal density; (u,x) must lie in D1 or D2.
LogNormalPartials lognormal_partials(double u, double t, double x, const MultiplicativeModel& model);

/// P(|U(t,x)| <= delta) and its complement P(|U(t,x)| > delta).
double dirac_limit_mass(double t, double x, double delta, const MultiplicativeModel& model);
double dirac_escape_mass(double t, double x, double delta, const MultiplicativeModel& model);

// --- KPZ ------------------------------------------------------------------

double kpz_mean(double t, double x, const KpzModel& model);
double kpz_variance(double t, const KpzModel& model);
/// Throws WindowViolation outside the model window.
DensityLaw kpz_law(double t, double x, const KpzModel& model);
double kpz_pdf(double kappa, double t, double x, const KpzModel& model);

// --- transition kernels ---------------------------------------------------

/// p(., t | w, s) at a fixed x.
class TransitionKernel {
public:
    enum class Family { AdditiveMode, MultiplicativeGbm, KpzBrownian };

    static TransitionKernel additive_mode(std::shared_ptr<const AdditiveSystem> system, int n, double x);
    static TransitionKernel multiplicative_gbm(const MultiplicativeModel& model);
    static TransitionKernel kpz_brownian(const KpzModel& model);

    Family family() const { return family_; }

    /// DegenerateAtom(w) when t == s and an atom at the drifted mean when the
    /// variance vanishes.
    DensityLaw law(double w, double s, double t) const;

    /// Same, but throws DegenerateKernel instead of returning an atom for t > s.
    DensityLaw proper_law(double w, double s, double t) const;

private:
    Family family_ = Family::KpzBrownian;
    std::shared_ptr<const AdditiveSystem> system_;
    int n_ = 1;
    double x_ = 0.5;
    double drift_ = 0.0;
    double diffusion_ = 0.0;
};

const char* family_name(TransitionKernel::Family family);

}  // namespace spde
