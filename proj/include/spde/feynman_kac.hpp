#pragma once

#include <cstdint>
#include <functional>

#include "spde/densities.hpp"
#include "spde/model.hpp"
#include "spde/random.hpp"
#include "spde/spectral_moments.hpp"

namespace spde {

inline constexpr double kDefaultAdditiveDt = 1e-2;
inline constexpr double kDefaultKpzDt = 1e-2;
inline constexpr double kDefaultMultiplicativeDt = 1e-4;

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
};

/// dX = drift(s, X) ds + diffusion(s, X) dB on [s0, T].
struct SdeCoefficients {
    std::function<double(double, double)> drift;
    std::function<double(double, double)> diffusion;
    double s0 = 0.0;
    double T = 1.0;
};

/// Step times s0, s0 + dt, ..., T; the last step is shortened to land on T.
std::vector<double> step_times(double s0, double T, double dt);

/// One Euler-Maruyama path; the k-th increment uses normal(path, k).
/// Throws NegativeDiffusion when the diffusion goes negative.
double euler_maruyama(const SdeCoefficients& coeffs, double init, double dt,
                      const CounterNormal& normal, std::uint64_t path = 0);
double euler_maruyama(const SdeCoefficients& coeffs, double init, double dt, std::uint64_t seed,
                      std::uint64_t path = 0);

struct McOptions {
    double dt = kDefaultAdditiveDt;
    std::uint64_t n_paths = 10'000;
    std::uint64_t seed = 0;
    int threads = 0;
};

/// p(u,t,x) = E[p(U^(T), 0, x) | U^(T - t) = u] with drift M(T - s, x) and
/// diffusion sqrt(G(T - s, x)) from the `modes`-term series.
McEstimate estimate_additive_pdf(double u, double t, double x, double T, const AdditiveSystem& system,
                                 int modes, const McOptions& options);

enum class GbmScheme { Exact, Euler };

/// p(u,t,x) = exp(C t) E[p(U^(t), 0, x) | U^(0) = u] for dU^ = B U^ ds + eps_m U^ dB.
McEstimate estimate_multiplicative_pdf(double u, double t, double x, const MultiplicativeModel& model,
                                       const McOptions& options, GbmScheme scheme = GbmScheme::Exact);

enum class KpzScheme { Euler, Exact };

/// p(k,t,x) = E[p(K^(T), 0, x) | K^(T - t) = k] with constant coefficients.
struct ConstantSde {
    double drift = 0.0;
    double diffusion = 0.0;
};

/// dK = -(2 theta/xi) b~ ds + (2 theta/xi) eps_m dB
ConstantSde kpz_fk_coefficients(const KpzModel& model);

McEstimate estimate_kpz_pdf(double kappa, double t, double x, double T, const KpzModel& model,
                            const McOptions& options, KpzScheme scheme = KpzScheme::Euler);

}  // namespace spde
