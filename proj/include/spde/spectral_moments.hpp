#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "spde/basis.hpp"
#include "spde/model.hpp"
#include "spde/quadrature.hpp"

namespace spde {

/// Nodes per panel for spatial inner products; the panel count grows with the
/// mode index so that every panel sees at most a few oscillations.
inline constexpr int kDefaultQuadratureOrder = 64;
inline constexpr int kDefaultTruncation = 10;
inline constexpr int kMaxTruncation = 10'000;

/// int_0^1 func(x) basis_n(x) dx by composite Gauss-Legendre.
double fourier_coefficient(const std::function<double(double)>& func, Basis basis, int n,
                           int quadrature_order = kDefaultQuadratureOrder);

/// <q, e_n> for a quadratic profile, exact.
double quadratic_cosine_coefficient(const Quadratic& q, int n);

/// Per-mode variance  nu_n(0) e_n^2 e^{2 lambda t} + (sigma q_n e_n)^2 exprel2(lambda, t).
double mode_variance(Basis basis, int n, double t, double x, double sigma, double q_n,
                     double nu_n0, double lambda_n);

/// Truncated mean and variance of U(t,x) with certificates for the neglected tail.
struct MomentField {
    double t = 0.0;
    double x = 0.0;
    int modes = 0;
    double mu = 0.0;
    double nu = 0.0;
    double tail_bound_mu = 0.0;
    double tail_bound_nu = 0.0;
    bool certified = true;
};

/// M = -d mu/dt and G = d nu/dt of the truncated series.
struct DriftDiffusion {
    double t = 0.0;
    double x = 0.0;
    double M = 0.0;
    double G = 0.0;
};

struct SeriesOptions {
    double tolerance = 1e-8;
    int cap = kMaxTruncation;
    /// Throw TailNotCertified instead of returning a flagged field.
    bool strict = false;
};

/// Model-derived data for the additive equation: lift, effective forcing,
/// eigenvalues and cached Fourier coefficients of the separable forcing terms.
///
/// mu(t,x) is assembled as Y(t,x) + sum_n [V-mode means], i.e. the lift is
/// added exactly rather than through its own truncated expansion. This keeps
/// mu(t,1) = g(t) and nu(t,1) = 0 for every truncation.
class AdditiveSystem {
public:
    explicit AdditiveSystem(AdditiveModel model, int quadrature_order = kDefaultQuadratureOrder);

    const AdditiveModel& model() const { return model_; }
    const LiftFunction& lift() const { return lift_; }
    const Forcing& effective_forcing() const { return forcing_; }
    int truncation() const { return model_.noise.truncation_order(); }
    int quadrature_order() const { return quadrature_order_; }

    double lambda(int n) const { return lambda_additive(n, model_.a, model_.b); }
    double q(int n) const { return model_.noise.amplitude(n); }
    ModeLaw initial_law(int n) const { return model_.initial_mode(n); }

    /// True when every time dependence is harmonic, so the convolution in the
    /// mode mean has a closed form.
    bool closed_form() const { return closed_form_; }
    /// Forces the generic quadrature route even when a closed form exists.
    void set_closed_form_enabled(bool enabled) { closed_form_enabled_ = enabled; }

    /// <Y(t,.), e_n>
    double lift_coefficient(int n, double t) const;
    double lift_coefficient_dt(int n, double t) const;
    /// f~_n(s) = <f~(s,.), e_n>
    double forcing_coefficient(int n, double s) const;
    /// int_0^t exp(lambda_n (t - s)) f~_n(s) ds
    double forcing_convolution(int n, double t) const;

    /// mean of the homogeneous mode V_n(t) e_n(x)
    double homogeneous_mode_mean(int n, double t, double x) const;
    double homogeneous_mode_mean_dt(int n, double t, double x) const;

    /// sup_x |Y(0,x)| and sup_{s<=t, x} |f~(s,x)| on sampling grids.
    double sup_initial_lift() const;
    double sup_effective_forcing(double t) const;

private:
    double cached_projection(std::vector<double>& cache, const std::function<double(double)>& f,
                             int n) const;
    double term_coefficient(std::size_t term, int n) const;
    double general_coefficient(int n, double s) const;

    AdditiveModel model_;
    LiftFunction lift_;
    Forcing forcing_;
    int quadrature_order_;
    bool closed_form_ = false;
    bool closed_form_enabled_ = true;

    mutable std::mutex cache_mutex_;
    std::vector<std::optional<Quadratic>> term_quadratic_;
    mutable std::vector<std::vector<double>> term_cache_;
};

/// The full mean of mode n, including Y_n(t,x) = <Y(t,.), e_n> e_n(x).
double mode_mean(const AdditiveSystem& system, int n, double t, double x);

/// Series summed to a fixed truncation, with tail bounds for that truncation.
/// Without tails the bounds are left at 0 and `certified` is false.
MomentField sum_series_truncated(const AdditiveSystem& system, double t, double x, int modes,
                                 bool with_tails = true);

/// Adds modes until both tail bounds fall below tol or the cap is reached.
MomentField sum_series(const AdditiveSystem& system, double t, double x,
                       const SeriesOptions& options = {});

/// Term-wise analytic time derivatives at the given truncation.
DriftDiffusion drift_diffusion(const AdditiveSystem& system, double t, double x, int modes);

/// M~(s,x) = M(T - s, x), G~(s,x) = G(T - s, x).
DriftDiffusion time_reversed_drift_diffusion(const AdditiveSystem& system, double s, double x,
                                             double horizon, int modes);

/// Throws NonPositiveDiffusion when G <= 0.
void require_positive_diffusion(const DriftDiffusion& dd);

/// Rigorous bounds on the neglected modes n > modes.
double mean_tail_bound(const AdditiveSystem& system, double t, int modes);
double variance_tail_bound(const AdditiveSystem& system, double t, int modes);

}  // namespace spde
