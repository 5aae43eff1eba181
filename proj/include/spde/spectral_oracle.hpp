#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spde/densities.hpp"
#include "spde/model.hpp"
#include "spde/random.hpp"
#include "spde/spectral_moments.hpp"

namespace spde {

struct EnsembleStats {
    std::vector<double> samples;
    double mean = 0.0;
    double variance = 0.0;
    /// NaN when the reference law is an atom.
    double ks = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

/// Asymptotic two-sided KS critical value at the 1% level.
double ks_critical_value(std::size_t n);

/// Exact sup |F_n - F| on sorted samples. Throws DegenerateLaw for atoms.
double ks_statistic(std::span<const double> samples, const DensityLaw& law);

/// Fills mean, variance and the KS statistic against `law` (NaN for atoms).
EnsembleStats summarize_samples(std::vector<double> samples, const DensityLaw& law, std::uint64_t seed);

struct OracleOptions {
    std::uint64_t n_samples = 10'000;
    std::uint64_t seed = 0;
    int threads = 0;
};

/// Exact draws of U(t,x): each homogeneous mode V_n is Gaussian with
/// V_n(0) ~ N(mu_n(0) - <Y(0,.), e_n>, nu_n(0)) and OU transition noise, and
/// Y(t,x) is added at the end. Compared with the `modes`-term Gaussian law.
EnsembleStats sample_additive(double t, double x, int modes, const AdditiveSystem& system,
                              const OracleOptions& options);

/// Same draws routed through the modes of U itself: U_n(0) ~ N(mu_n(0), nu_n(0)),
/// U_n(t) = (U_n(0) - Y_n(0)) e^{lambda t} + ... + Y_n(t), plus the part of
/// Y(t,x) the truncated expansion leaves out. Equal to sample_additive up to
/// rounding when the seeds match.
EnsembleStats sample_additive_composed(double t, double x, int modes, const AdditiveSystem& system,
                                       const OracleOptions& options);

/// U = U_m(0) exp(b_m t + eps_m W_m(t)) e~_m(x); exact zeros on Gamma.
EnsembleStats sample_multiplicative(double t, double x, const MultiplicativeModel& model,
                                    const OracleOptions& options);

/// K = (2 theta / xi) [ln U_m(t) + ln|e~_m(x)|]; throws WindowViolation.
EnsembleStats sample_kpz(double t, double x, const KpzModel& model, const OracleOptions& options);

/// The multiplicative model whose Cole-Hopf image is `model`: a^2 = theta, b = c = 0.
MultiplicativeModel kpz_source_model(const KpzModel& model);

/// A draw from `law` driven by the standard normal z.
double draw(const DensityLaw& law, double z);

/// Path-wise exact recursion through the kernel: w at times[0], then one exact
/// transition per interval. Returns the values at times.back().
std::vector<double> sample_kernel_chain(const TransitionKernel& kernel, double w,
                                        std::span<const double> times, const OracleOptions& options);

}  // namespace spde
