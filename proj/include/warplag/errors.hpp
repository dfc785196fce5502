#pragma once

#include <stdexcept>
#include <string>

namespace warplag {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or a broken caller contract.
struct ContractViolation : Error {
    using Error::Error;
};

/// Input too close to a degenerate configuration (near-zero vector, vanishing norm).
struct DegenerateInput : Error {
    using Error::Error;
};

/// Jet arithmetic hit a domain violation. Carries the offending operation.
struct SingularEvaluation : Error {
    explicit SingularEvaluation(const std::string& op, const std::string& detail = {})
        : Error("singular evaluation in '" + op + "'" + (detail.empty() ? "" : ": " + detail)),
          operation(op) {}
    std::string operation;
};

/// Parameter point lies outside a chart's domain box.
struct OutOfDomain : Error {
    using Error::Error;
};

/// Induced metric is numerically rank-deficient.
struct RankDeficient : Error {
    using Error::Error;
};

/// Chart fails the Lagrangian / horizontality precondition.
struct NotLagrangian : Error {
    using Error::Error;
};

/// Invalid construction parameters (radius constraints, factor dimensions, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Incompatible signatures or factors in a product construction.
struct ConstructionError : Error {
    using Error::Error;
};

/// Profile is inadmissible, or used with the wrong sign of the conserved quantity u.
struct ProfileCaseError : Error {
    using Error::Error;
};

/// Bad CLI or configuration input.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace warplag
