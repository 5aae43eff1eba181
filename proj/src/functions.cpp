#include "spde/functions.hpp"

#include <cmath>
#include <utility>

namespace spde {

double Harmonic::value(double t) const {
    return offset + cos_coef * std::cos(omega * t) + sin_coef * std::sin(omega * t);
}

Harmonic Harmonic::derivative() const {
    return Harmonic{0.0, omega * sin_coef, -omega * cos_coef, omega};
}

Harmonic Harmonic::scaled(double factor) const {
    return Harmonic{factor * offset, factor * cos_coef, factor * sin_coef, omega};
}

double Harmonic::convolve_exponential(double lambda, double t) const {
    const double growth = std::exp(lambda * t);
    // int_0^t exp(lambda (t - s)) ds
    const double constant_part = lambda == 0.0 ? t : std::expm1(lambda * t) / lambda;
    double result = offset * constant_part;
    if (cos_coef != 0.0 || sin_coef != 0.0) {
        if (omega == 0.0) {
            result += cos_coef * constant_part;
        } else {
            const double denom = lambda * lambda + omega * omega;
            const double c = std::cos(omega * t);
            const double s = std::sin(omega * t);
            const double cos_part = (omega * s - lambda * c + lambda * growth) / denom;
            const double sin_part = (omega * growth - omega * c - lambda * s) / denom;
            result += cos_coef * cos_part + sin_coef * sin_part;
        }
    }
    return result;
}

std::optional<Harmonic> combine(const Harmonic& lhs, double lhs_weight, const Harmonic& rhs,
                                double rhs_weight) {
    const bool lhs_const = lhs.cos_coef == 0.0 && lhs.sin_coef == 0.0;
    const bool rhs_const = rhs.cos_coef == 0.0 && rhs.sin_coef == 0.0;
    if (!lhs_const && !rhs_const && lhs.omega != rhs.omega) return std::nullopt;
    const double omega = lhs_const ? rhs.omega : lhs.omega;
    return Harmonic{lhs_weight * lhs.offset + rhs_weight * rhs.offset,
                    lhs_weight * lhs.cos_coef + rhs_weight * rhs.cos_coef,
                    lhs_weight * lhs.sin_coef + rhs_weight * rhs.sin_coef, omega};
}

TimeFunction::TimeFunction() : TimeFunction(harmonic(Harmonic{})) { name_ = "zero"; }

TimeFunction TimeFunction::zero() { return TimeFunction{}; }

TimeFunction TimeFunction::constant(double c) {
    auto f = harmonic(Harmonic{c, 0.0, 0.0, 1.0});
    f.name_ = "const";
    return f;
}

TimeFunction TimeFunction::sine() {
    auto f = harmonic(Harmonic{0.0, 0.0, 1.0, 1.0});
    f.name_ = "sin";
    return f;
}

TimeFunction TimeFunction::cosine() {
    auto f = harmonic(Harmonic{0.0, 1.0, 0.0, 1.0});
    f.name_ = "cos";
    return f;
}

TimeFunction TimeFunction::harmonic(Harmonic h) {
    if (h.omega == 0.0) {
        h.offset += h.cos_coef;
        h.cos_coef = 0.0;
        h.sin_coef = 0.0;
        h.omega = 1.0;
    }
    TimeFunction f = custom([h](double t) { return h.value(t); },
                            [d = h.derivative()](double t) { return d.value(t); }, "harmonic");
    f.harmonic_ = h;
    return f;
}

TimeFunction TimeFunction::custom(Fn value, Fn derivative, std::string name) {
    TimeFunction f(std::move(value), std::move(derivative), std::move(name));
    return f;
}

double TimeFunction::derivative(double t) const {
    if (derivative_) return derivative_(t);
    const double h = kFiniteDifferenceStep;
    return (value_(t + h) - value_(t - h)) / (2.0 * h);
}

bool TimeFunction::is_zero() const {
    return harmonic_ && harmonic_->offset == 0.0 && harmonic_->cos_coef == 0.0 &&
           harmonic_->sin_coef == 0.0;
}

TimeFunction TimeFunction::value_plus_derivative(double alpha, double beta) const {
    if (harmonic_) {
        auto combined = combine(*harmonic_, alpha, harmonic_->derivative(), beta);
        return harmonic(*combined);
    }
    TimeFunction self = *this;
    return custom([self, alpha, beta](double t) { return alpha * self(t) + beta * self.derivative(t); },
                  {}, "derived");
}

Forcing Forcing::separable(TimeFunction time, std::function<double(double)> profile,
                           std::string profile_name) {
    Forcing f;
    f.add(std::move(time), std::move(profile), std::move(profile_name));
    return f;
}

Forcing Forcing::general(Fn2 fn) {
    Forcing f;
    f.general_ = std::move(fn);
    return f;
}

Forcing& Forcing::add(TimeFunction time, std::function<double(double)> profile,
                      std::string profile_name) {
    terms_.push_back(SeparableTerm{std::move(time), std::move(profile), std::move(profile_name)});
    return *this;
}

double Forcing::operator()(double t, double x) const {
    double value = general_ ? general_(t, x) : 0.0;
    for (const auto& term : terms_) value += term.time(t) * term.profile(x);
    return value;
}

}  // namespace spde
