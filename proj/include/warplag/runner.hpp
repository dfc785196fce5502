#pragma once

#include <optional>
#include <string>
#include <utility>

#include "warplag/config.hpp"
#include "warplag/products.hpp"
#include "warplag/profile.hpp"
#include "warplag/report.hpp"

namespace warplag {

/// Chart materialized from a RunConfig plus the pieces the commands consume.
struct BuiltChart {
    /// Chart under test (the phase-perturbed wrapper when requested).
    ChartPtr chart;
    /// Underlying product chart; null for null_warp constructions.
    WarpedPtr product;
    /// Profile driving ode-check: the admissible constants matching a Calabi
    /// construction, or the integrated profile of a warped / null_warp one.
    std::optional<Profile> profile;
};

/// Materialize the configured construction.  Invalid parameters surface as
/// ConfigError / ParameterError / ConstructionError / ProfileCaseError.
BuiltChart build_chart(const RunConfig& cfg);

/// Execute one command (build, verify, classify, ode-check).  Returns the
/// report document and the exit code: 0 when every recorded check passes,
/// 1 otherwise.  Construction and config failures are thrown, not encoded.
std::pair<Json, int> run_command(const std::string& command, const RunConfig& cfg);

} // namespace warplag
