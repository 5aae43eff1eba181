#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spde {

/// offset + cos_coef*cos(omega t) + sin_coef*sin(omega t)
struct Harmonic {
    double offset = 0.0;
    double cos_coef = 0.0;
    double sin_coef = 0.0;
    double omega = 1.0;

    double value(double t) const;
    Harmonic derivative() const;
    Harmonic scaled(double factor) const;

    /// Closed form of the convolution  int_0^t exp(lambda (t - s)) value(s) ds.
    double convolve_exponential(double lambda, double t) const;
};

/// Harmonic sum; only valid when both share the same frequency (or one is constant).
std::optional<Harmonic> combine(const Harmonic& lhs, double lhs_weight,
                                const Harmonic& rhs, double rhs_weight);

/// A scalar function of time with an optional analytic derivative and an
/// optional closed-form tag. Without an analytic derivative, derivative()
/// falls back to a central difference with step 1e-6.
class TimeFunction {
public:
    using Fn = std::function<double(double)>;

    static constexpr double kFiniteDifferenceStep = 1e-6;

    TimeFunction();  // identically zero

    static TimeFunction zero();
    static TimeFunction constant(double c);
    static TimeFunction sine();
    static TimeFunction cosine();
    static TimeFunction harmonic(Harmonic h);
    static TimeFunction custom(Fn value, Fn derivative = {}, std::string name = "custom");

    double operator()(double t) const { return value_(t); }
    double derivative(double t) const;

    bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
    const std::optional<Harmonic>& harmonic_tag() const { return harmonic_; }
    bool is_zero() const;
    const std::string& name() const { return name_; }

    /// alpha*f(t) + beta*f'(t), keeping the harmonic tag when there is one.
    TimeFunction value_plus_derivative(double alpha, double beta) const;

private:
    TimeFunction(Fn value, Fn derivative, std::string name)
        : value_(std::move(value)), derivative_(std::move(derivative)), name_(std::move(name)) {}

    Fn value_;
    Fn derivative_;
    std::optional<Harmonic> harmonic_;
    std::string name_;
};

/// One separable piece T(t) * phi(x) of a forcing term.
struct SeparableTerm {
    TimeFunction time;
    std::function<double(double)> profile;
    std::string profile_name = "custom";
};

/// f(t, x) = sum_i T_i(t) phi_i(x) + general(t, x).
/// The separable part is what the spectral pipeline can project once and
/// convolve in closed form; `general` is projected by quadrature at every time.
class Forcing {
public:
    using Fn2 = std::function<double(double, double)>;

    Forcing() = default;

    static Forcing zero() { return Forcing{}; }
    static Forcing separable(TimeFunction time, std::function<double(double)> profile,
                             std::string profile_name = "custom");
    static Forcing general(Fn2 f);

    Forcing& add(TimeFunction time, std::function<double(double)> profile,
                 std::string profile_name = "custom");

    double operator()(double t, double x) const;

    const std::vector<SeparableTerm>& terms() const { return terms_; }
    const Fn2& general_part() const { return general_; }
    bool has_general_part() const { return static_cast<bool>(general_); }
    bool is_zero() const { return terms_.empty() && !general_; }

private:
    std::vector<SeparableTerm> terms_;
    Fn2 general_;
};

}  // namespace spde
