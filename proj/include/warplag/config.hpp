#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "warplag/expr.hpp"

namespace warplag {

/// Named factor builtin with its parameters.
struct FactorSpec {
    std::string type; // point | great_circle | totally_geodesic_sphere |
                      // totally_geodesic_hyperbolic | flat_torus
    std::size_t dim = 0;
    std::vector<double> frequencies;
};

/// Tagged construction union.  Numeric fields in the JSON may be plain
/// numbers or constant expression strings ("sqrt(2/3)").
struct ConstructionSpec {
    std::string type; // calabi_cp | calabi_ch | warped | minimal_cp |
                      // minimal_two | null_warp
    double r1 = 0.0, r2 = 0.0, a = 1.0;
    int ch_case = 0; // calabi_ch: 1 (spherical factor) or 2 (Lorentz factor)
    std::string lambda1_text;
    ExprPtr lambda1;
    double lambda2_0 = 0.0, k0 = 0.0, c = 1.0;
    double t_min = -1.0, t_max = 1.0;
    std::size_t n = 0; // minimal_cp total dimension
    std::vector<FactorSpec> factors;
    std::size_t psi3_dim = 0;
    std::vector<std::complex<double>> psi3_offsets;
    double phase_eps = 0.0; // nonzero: wrap the chart in a phase perturbation
};

/// Every gate the runner applies; config key "tolerances" overrides by name.
struct Tolerances {
    double space = 1e-10;
    double lagrangian = 1e-8;
    double gauss = 1e-6;
    double codazzi = 1e-7;
    double classifier = 1e-6;
    double parallel = 1e-7;
    double riccati = 1e-8;
    double u_constancy = 1e-7;
    double ode = 1e-8;
    double f2_identity = 1e-9;
    double antiderivative = 1e-8;
    double independence = 1e-7;
};

struct RunConfig {
    ConstructionSpec construction;
    std::size_t samples = 40;
    std::uint64_t seed = 1;
    Tolerances tol;
    std::string report_path;
    nlohmann::ordered_json echo; // raw document, echoed into reports
};

/// Parse a config document; throws ConfigError on malformed or inconsistent
/// input (unknown keys are tolerated, unknown enum values are not).
RunConfig parse_config_json(const nlohmann::ordered_json& doc);

/// Read and parse a config file.
RunConfig parse_config(const std::string& path);

} // namespace warplag
