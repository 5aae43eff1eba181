#include "spde/model.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "spde/basis.hpp"

namespace spde {

InvalidParameter::InvalidParameter(std::vector<Violation> violations)
    : Error("InvalidParameter", ErrorCategory::Validation,
            [&] {
                std::ostringstream os;
                for (std::size_t i = 0; i < violations.size(); ++i) {
                    if (i) os << "; ";
                    os << violations[i].field << ": " << violations[i].reason;
                }
                return os.str();
            }()),
      violations_(std::move(violations)) {}

NoiseSpec NoiseSpec::explicit_list(std::vector<double> values, int truncation) {
    NoiseSpec spec;
    spec.rule_ = Rule::Explicit;
    spec.truncation_ = truncation > 0 ? truncation : static_cast<int>(values.size());
    spec.values_ = std::move(values);
    return spec;
}

NoiseSpec NoiseSpec::reciprocal(int truncation) {
    NoiseSpec spec;
    spec.rule_ = Rule::Reciprocal;
    spec.truncation_ = truncation;
    return spec;
}

NoiseSpec NoiseSpec::single_mode(int m, double q_m, int truncation) {
    NoiseSpec spec;
    spec.rule_ = Rule::SingleMode;
    spec.mode_ = m;
    spec.mode_amplitude_ = q_m;
    spec.truncation_ = truncation;
    return spec;
}

double NoiseSpec::amplitude(int n) const {
    if (n < 1) return 0.0;
    switch (rule_) {
        case Rule::Reciprocal:
            return 1.0 / n;
        case Rule::SingleMode:
            return n == mode_ ? mode_amplitude_ : 0.0;
        case Rule::Explicit:
        default:
            return n <= static_cast<int>(values_.size()) ? values_[n - 1] : 0.0;
    }
}

double NoiseSpec::partial_trace(int upto) const {
    double sum = 0.0;
    for (int n = 1; n <= upto; ++n) {
        const double q = amplitude(n);
        sum += q * q;
    }
    return sum;
}

double NoiseSpec::tail_trace(int after) const {
    switch (rule_) {
        case Rule::Reciprocal:
            // sum_{n > N} 1/n^2 = psi'(N + 1)
            return boost::math::trigamma(static_cast<double>(after) + 1.0);
        case Rule::SingleMode:
            return mode_ > after ? mode_amplitude_ * mode_amplitude_ : 0.0;
        case Rule::Explicit:
        default: {
            double sum = 0.0;
            for (std::size_t i = static_cast<std::size_t>(std::max(after, 0)); i < values_.size(); ++i) {
                sum += values_[i] * values_[i];
            }
            return sum;
        }
    }
}

NoiseSpec NoiseSpec::with_truncation(int truncation) const {
    NoiseSpec copy = *this;
    copy.truncation_ = truncation;
    return copy;
}

ModeLaw AdditiveModel::initial_mode(int n) const {
    if (n < 1 || n > static_cast<int>(initial_modes.size())) return {};
    return initial_modes[n - 1];
}

double MultiplicativeModel::lambda_m() const { return lambda_nonlocal(m, a, b, c, alpha); }

double MultiplicativeModel::b_m() const {
    const double e = eps_m();
    return lambda_m() - 0.5 * e * e;
}

double KpzModel::b_tilde() const {
    const double k = m * std::numbers::pi;
    const double e = eps_m();
    return -theta * k * k - 0.5 * e * e;
}

namespace {

void require_finite(std::vector<Violation>& out, const std::string& field, double v) {
    if (!std::isfinite(v)) out.push_back({field, "must be finite"});
}

bool near_grid_point(double x, int m) {
    const double scaled = x * m;
    return std::abs(scaled - std::round(scaled)) <= 1e-12 * m;
}

void check_log_law(std::vector<Violation>& out, const LogNormalLaw& law, bool deterministic) {
    require_finite(out, "initial.log_mean", law.log_mean);
    if (!std::isfinite(law.log_variance)) {
        out.push_back({"initial.log_variance", "must be finite"});
    } else if (deterministic) {
        if (law.log_variance != 0.0) {
            out.push_back({"initial.log_variance", "must be 0 for a deterministic initial amplitude"});
        }
    } else if (!(law.log_variance > 0.0)) {
        out.push_back({"initial.log_variance", "must be > 0 for a log-normal initial amplitude"});
    }
}

}  // namespace

std::vector<Violation> check(const AdditiveModel& model, double horizon) {
    std::vector<Violation> out;
    require_finite(out, "a", model.a);
    require_finite(out, "b", model.b);
    require_finite(out, "sigma", model.sigma);

    const NoiseSpec& noise = model.noise;
    if (noise.truncation_order() < 1) out.push_back({"noise.truncation", "must be a positive integer"});
    for (std::size_t i = 0; i < noise.values().size(); ++i) {
        const double q = noise.values()[i];
        if (!std::isfinite(q) || q < 0.0) {
            out.push_back({"noise.q[" + std::to_string(i + 1) + "]", "must be finite and >= 0"});
        }
    }
    if (noise.rule() == NoiseSpec::Rule::SingleMode) {
        if (noise.mode() < 1) out.push_back({"noise.mode", "must be >= 1"});
        const double q = noise.amplitude(noise.mode());
        if (!std::isfinite(q) || q < 0.0) out.push_back({"noise.q_m", "must be finite and >= 0"});
    }
    if (!std::isfinite(noise.truncated_trace())) {
        out.push_back({"noise", "truncated trace sum q_n^2 is not finite"});
    }

    for (std::size_t i = 0; i < model.initial_modes.size(); ++i) {
        const auto& law = model.initial_modes[i];
        const std::string base = "initial_modes[" + std::to_string(i + 1) + "]";
        require_finite(out, base + ".mean", law.mean);
        if (!std::isfinite(law.variance) || law.variance < 0.0) {
            out.push_back({base + ".variance", "must be finite and >= 0"});
        }
    }

    for (const auto& v : check_boundary(model.boundary)) out.push_back(v);
    if (model.boundary.row != 0) {
        out.push_back({"boundary.row",
                       "the spectral pipeline needs the cosine eigenbasis of the main case (row 0)"});
    }

    const double probe_times[] = {0.0, 0.5 * horizon, horizon};
    const double probe_x[] = {0.0, 0.5, 1.0};
    bool g_ok = true;
    bool h_ok = true;
    bool f_ok = true;
    for (const double t : probe_times) {
        g_ok = g_ok && std::isfinite(model.boundary.g(t));
        h_ok = h_ok && std::isfinite(model.boundary.h(t));
        for (const double x : probe_x) f_ok = f_ok && std::isfinite(model.forcing(t, x));
    }
    if (!g_ok) out.push_back({"boundary.g", "not finite on the horizon"});
    if (!h_ok) out.push_back({"boundary.h", "not finite on the horizon"});
    if (!f_ok) out.push_back({"forcing", "not finite on the horizon"});
    return out;
}

std::vector<Violation> check(const MultiplicativeModel& model) {
    std::vector<Violation> out;
    require_finite(out, "a", model.a);
    require_finite(out, "b", model.b);
    require_finite(out, "c", model.c);
    if (!(model.alpha > 0.0 && model.alpha < 2.0)) out.push_back({"alpha", "must lie in (0, 2)"});
    if (!(model.epsilon > 0.0) || !std::isfinite(model.epsilon)) {
        out.push_back({"epsilon", "must be a positive real"});
    }
    if (model.m < 1) out.push_back({"m", "must be a positive integer"});
    if (!std::isfinite(model.q_m) || model.q_m < 0.0) out.push_back({"q_m", "must be finite and >= 0"});
    check_log_law(out, model.initial, model.deterministic_initial);
    if (out.empty() && !std::isfinite(model.b_m())) {
        out.push_back({"b_m", "derived drift lambda_m - eps_m^2/2 is not finite"});
    }
    return out;
}

std::vector<Violation> check(const KpzModel& model) {
    std::vector<Violation> out;
    if (!(model.theta > 0.0) || !std::isfinite(model.theta)) out.push_back({"theta", "must be > 0"});
    if (model.xi == 0.0 || !std::isfinite(model.xi)) out.push_back({"xi", "must be finite and nonzero"});
    if (!(model.epsilon > 0.0) || !std::isfinite(model.epsilon)) {
        out.push_back({"epsilon", "must be a positive real"});
    }
    if (model.m < 1) out.push_back({"m", "must be a positive integer"});
    if (!std::isfinite(model.q_m) || model.q_m < 0.0) out.push_back({"q_m", "must be finite and >= 0"});
    check_log_law(out, model.initial, false);

    const Window& w = model.window;
    if (!(w.lo >= 0.0 && w.hi <= 1.0 && w.lo < w.hi)) {
        out.push_back({"window", "must be an open interval inside [0, 1] with lo < hi"});
    } else if (model.m >= 1) {
        if (near_grid_point(w.lo, model.m) || near_grid_point(w.hi, model.m)) {
            out.push_back({"window", "endpoints must avoid the zeros k/m of sin(m pi x)"});
        } else if (std::floor(model.m * w.lo) != std::floor(model.m * w.hi)) {
            out.push_back({"window", "straddles a zero k/m of sin(m pi x)"});
        }
    }
    if (out.empty() && !std::isfinite(model.b_tilde())) {
        out.push_back({"b_tilde", "derived drift is not finite"});
    }
    return out;
}

std::vector<Violation> check(const Model& model) {
    return std::visit([](const auto& m) { return check(m); }, model);
}

AdditiveModel validate(const AdditiveModel& model) {
    if (auto v = check(model); !v.empty()) throw InvalidParameter(std::move(v));
    return model;
}

MultiplicativeModel validate(const MultiplicativeModel& model) {
    if (auto v = check(model); !v.empty()) throw InvalidParameter(std::move(v));
    return model;
}

KpzModel validate(const KpzModel& model) {
    if (auto v = check(model); !v.empty()) throw InvalidParameter(std::move(v));
    return model;
}

Model validate(const Model& model) {
    return std::visit([](const auto& m) -> Model { return validate(m); }, model);
}

double stratonovich_to_ito(double drift_constant, double epsilon, double q_m) {
    const double e = epsilon * q_m;
    return drift_constant + 0.5 * e * e;
}

double ito_to_stratonovich(double c, double epsilon, double q_m) {
    const double e = epsilon * q_m;
    return c - 0.5 * e * e;
}

}  // namespace spde
