#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spde {

/// Two broad failure classes. The CLI maps them to exit codes 1 and 2.
enum class ErrorCategory { Validation, Numerical };

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorCategory category, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string kind_;
    ErrorCategory category_;
};

struct Violation {
    std::string field;
    std::string reason;
};

/// Raised by validate() with every violated invariant, not just the first.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(std::vector<Violation> violations);
    InvalidParameter(std::string field, std::string reason)
        : InvalidParameter(std::vector<Violation>{{std::move(field), std::move(reason)}}) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

#define SPDE_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what)                              \
            : Error(#Name, ErrorCategory::Category, what) {}                \
    };

SPDE_DEFINE_ERROR(DegenerateRobin, Validation)
SPDE_DEFINE_ERROR(WindowViolation, Validation)
SPDE_DEFINE_ERROR(RegionViolation, Validation)
SPDE_DEFINE_ERROR(ParseError, Validation)
SPDE_DEFINE_ERROR(UnknownKey, Validation)

SPDE_DEFINE_ERROR(DegenerateVariance, Numerical)
SPDE_DEFINE_ERROR(DegenerateLaw, Numerical)
SPDE_DEFINE_ERROR(DegenerateKernel, Numerical)
SPDE_DEFINE_ERROR(DegenerateInitialLaw, Numerical)
SPDE_DEFINE_ERROR(NonPositiveDiffusion, Numerical)
SPDE_DEFINE_ERROR(NegativeDiffusion, Numerical)
SPDE_DEFINE_ERROR(QuadratureFailure, Numerical)
SPDE_DEFINE_ERROR(TailNotCertified, Numerical)

#undef SPDE_DEFINE_ERROR

}  // namespace spde
