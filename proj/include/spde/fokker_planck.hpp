#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spde/densities.hpp"
#include "spde/model.hpp"
#include "spde/spectral_moments.hpp"

namespace spde {

/// Rectangular (u, t) grid. The step sizes are rounded so that the ranges
/// split into whole intervals.
struct ResidualGrid {
    double u_lo = -1.0;
    double u_hi = 1.0;
    double t_lo = 0.5;
    double t_hi = 1.5;
    double du = 0.1;
    double dt = 0.1;

    ResidualGrid halved() const;
};

struct ResidualReport {
    ResidualGrid grid;
    double max_abs_residual = 0.0;
    /// Same residual on the halved grid.
    double refined_residual = 0.0;
    /// log2(max_abs_residual / refined_residual)
    double refinement_order = 0.0;
};

/// Gaussian law N(mean(t), variance(t)) driven by p_t = M p_u + G/2 p_uu.
struct GaussianEvolution {
    std::function<double(double)> mean;
    std::function<double(double)> variance;
    std::function<double(double)> drift;      // M(t)
    std::function<double(double)> diffusion;  // G(t)
};

/// max |p_t - M p_u - G/2 p_uu| over the grid with second-order finite
/// differences: central in the interior, one-sided on the edges.
double gaussian_fp_max_residual(const GaussianEvolution& law, const ResidualGrid& grid);

/// Residual on the grid and on one halving of it.
ResidualReport fp_residual_gaussian(const GaussianEvolution& law, const ResidualGrid& grid);

/// Additive density at fixed x with `modes` terms; throws DegenerateVariance
/// if nu <= 0 anywhere on the time range.
GaussianEvolution additive_evolution(const AdditiveSystem& system, double x, int modes);
ResidualReport fp_residual_additive(const AdditiveSystem& system, double x, int modes,
                                    const ResidualGrid& grid);

GaussianEvolution kpz_evolution(const KpzModel& model, double x);
ResidualReport fp_residual_kpz(const KpzModel& model, double x, const ResidualGrid& grid);

/// p_t = A u^2 p_uu + B u p_u + C p
struct MultiplicativeFpCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// A = eps_m^2/2, B = 3 eps_m^2/2 - b_m, C = eps_m^2/2 - b_m. With
/// `uncorrected` the variant B = (3 eps_m^2 - b_m)/2, C = (eps_m^2 - b_m)/2,
/// kept only to show that it does not solve the equation.
MultiplicativeFpCoefficients multiplicative_fp_coefficients(const MultiplicativeModel& model,
                                                            bool uncorrected = false);

/// p_t - [A u^2 p_uu + B u p_u + C p] from the analytic partials.
double fp_identity_multiplicative(double u, double t, double x, const MultiplicativeModel& model,
                                  const MultiplicativeFpCoefficients& coefficients);
double fp_identity_multiplicative(double u, double t, double x, const MultiplicativeModel& model);

struct IdentitySweep {
    double max_abs_residual = 0.0;
    std::size_t points = 0;
    /// (u, t, x) where the largest residual occurred
    std::array<double, 3> worst{};
};

/// Largest |identity residual| over `points` pseudo-random (u, t, x) in D1 u D2,
/// drawn deterministically from `seed`.
IdentitySweep fp_identity_sweep(const MultiplicativeModel& model, int points, std::uint64_t seed,
                                bool uncorrected = false);

struct CkReport {
    double s = 0.0;
    double r = 0.0;
    double t = 0.0;
    double max_error = 0.0;
    std::size_t points = 0;
};

/// Compares int p(u,t|v,r) p(v,r|w,s) dv with p(u,t|w,s) at every u.
/// Gaussian kernels integrate by adaptive Simpson over panels covering the
/// middle law; the GBM kernel integrates in log space by Gauss-Hermite.
CkReport ck_check(const TransitionKernel& kernel, double w, double s, double r, double t,
                  std::span<const double> u_grid);

/// 20 points spread over the central 99.8% of the direct s -> t law.
std::vector<double> default_ck_grid(const TransitionKernel& kernel, double w, double s, double t,
                                    int points = 20);

}  // namespace spde
