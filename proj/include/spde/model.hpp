#pragma once

#include <string>
#include <variant>
#include <vector>

#include "spde/errors.hpp"
#include "spde/functions.hpp"
#include "spde/homogenization.hpp"

namespace spde {

/// Amplitudes q_n of the Q-Wiener noise W(t,x) = sum_n q_n W_n(t) e_n(x).
class NoiseSpec {
public:
    enum class Rule { Explicit, Reciprocal, SingleMode };

    NoiseSpec() = default;

    /// q_n = values[n-1]; modes past the list are silent.
    static NoiseSpec explicit_list(std::vector<double> values, int truncation = 0);
    /// q_n = 1/n
    static NoiseSpec reciprocal(int truncation);
    /// q_m only
    static NoiseSpec single_mode(int m, double q_m, int truncation);

    double amplitude(int n) const;
    int truncation_order() const { return truncation_; }
    Rule rule() const { return rule_; }
    int mode() const { return mode_; }
    const std::vector<double>& values() const { return values_; }

    /// sum_{n <= N} q_n^2
    double truncated_trace() const { return partial_trace(truncation_); }
    double partial_trace(int upto) const;
    /// sum_{n > N} q_n^2 over the whole rule (finite for every supported rule).
    double tail_trace(int after) const;

    NoiseSpec with_truncation(int truncation) const;

private:
    Rule rule_ = Rule::Explicit;
    std::vector<double> values_;
    int mode_ = 1;
    double mode_amplitude_ = 0.0;
    int truncation_ = 1;
};

/// Normal law of a Fourier mode at t = 0.
struct ModeLaw {
    double mean = 0.0;
    double variance = 0.0;
};

/// Law of ln U_m(0).
struct LogNormalLaw {
    double log_mean = 0.0;
    double log_variance = 0.0;
};

/// dU = (a^2 U_xx + b U + f) dt + sigma dW  with non-homogeneous boundary data.
struct AdditiveModel {
    double a = 1.0;
    double b = 0.0;
    double sigma = 1.0;
    Forcing forcing;
    BoundaryCase boundary;
    NoiseSpec noise;
    /// initial_modes[n-1] is the law of <U(0,.), e_n>; missing modes are zero.
    std::vector<ModeLaw> initial_modes;

    ModeLaw initial_mode(int n) const;
};

/// dU = (a^2 U_xx - b (-d_xx)^{alpha/2} U + c U) dt + eps U dW,  U(0,x) = U_m(0) e~_m(x).
struct MultiplicativeModel {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double alpha = 1.0;
    double epsilon = 1.0;
    int m = 1;
    double q_m = 1.0;
    LogNormalLaw initial;
    /// U_m(0) deterministic, so log_variance must be 0.
    bool deterministic_initial = false;

    double eps_m() const { return epsilon * q_m; }
    double lambda_m() const;
    /// lambda_m - eps_m^2 / 2
    double b_m() const;
};

struct Window {
    double lo = 0.0;
    double hi = 1.0;
};

/// K = (2 theta / xi) ln|U| for the multiplicative problem with a^2 = theta, b = c = 0.
struct KpzModel {
    double theta = 1.0;
    double xi = 1.0;
    double epsilon = 1.0;
    int m = 1;
    double q_m = 1.0;
    LogNormalLaw initial;
    Window window;

    double eps_m() const { return epsilon * q_m; }
    /// -theta (m pi)^2 - eps_m^2 / 2
    double b_tilde() const;
    double scale() const { return 2.0 * theta / xi; }
    bool in_window(double x) const { return x > window.lo && x < window.hi; }
};

using Model = std::variant<AdditiveModel, MultiplicativeModel, KpzModel>;

/// Every violated invariant, with a field path. `horizon` bounds the times at
/// which the forcing and boundary handles are probed.
std::vector<Violation> check(const AdditiveModel& model, double horizon = 1.0);
std::vector<Violation> check(const MultiplicativeModel& model);
std::vector<Violation> check(const KpzModel& model);
std::vector<Violation> check(const Model& model);

/// Returns the model unchanged, or throws InvalidParameter listing every violation.
AdditiveModel validate(const AdditiveModel& model);
MultiplicativeModel validate(const MultiplicativeModel& model);
KpzModel validate(const KpzModel& model);
Model validate(const Model& model);

/// Stratonovich reaction coefficient -> Ito coefficient: d + (eps q_m)^2 / 2.
double stratonovich_to_ito(double drift_constant, double epsilon, double q_m);
double ito_to_stratonovich(double c, double epsilon, double q_m);

}  // namespace spde
