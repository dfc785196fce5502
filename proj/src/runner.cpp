#include "warplag/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "warplag/classifier.hpp"
#include "warplag/errors.hpp"
#include "warplag/factors.hpp"
#include "warplag/geometry.hpp"
#include "warplag/legendre.hpp"
#include "warplag/odecheck.hpp"
#include "warplag/sampling.hpp"

namespace warplag {

namespace {

constexpr const char* kArtifactName = "warplag";
constexpr const char* kArtifactVersion = "1.0.0";

FactorLift make_factor(const FactorSpec& f, Signature point_sig) {
    if (f.type == "point") return point_factor(point_sig);
    if (f.type == "great_circle") return great_circle_factor();
    if (f.type == "totally_geodesic_sphere") return totally_geodesic_sphere_factor(f.dim);
    if (f.type == "totally_geodesic_hyperbolic") return totally_geodesic_hyperbolic_factor(f.dim);
    if (f.type == "flat_torus") return flat_torus_factor(f.frequencies);
    throw ConfigError("unknown factor builtin '" + f.type + "'");
}

bool is_lorentz_builtin(const FactorSpec& f) { return f.type == "totally_geodesic_hyperbolic"; }

/// Factor pair for a curved-slot-first product in a definite ambient: one
/// configured factor rides the first curve coordinate, a point fills the
/// second; two configured factors keep their order.
std::pair<FactorLift, FactorLift> definite_pair(const std::vector<FactorSpec>& fs) {
    for (const auto& f : fs)
        if (is_lorentz_builtin(f))
            throw ConfigError("factor '" + f.type + "' needs a Lorentz ambient");
    if (fs.size() == 1) return {make_factor(fs[0], Signature::Definite), point_factor()};
    return {make_factor(fs[0], Signature::Definite), make_factor(fs[1], Signature::Definite)};
}

/// Factor pair for a Lorentz ambient: the first slot carries the timelike
/// coordinate, so it takes either a Lorentz lift or a timelike point.
std::pair<FactorLift, FactorLift> lorentz_pair(const FactorSpec& first,
                                               const FactorSpec& second) {
    if (!is_lorentz_builtin(first) && first.type != "point")
        throw ConfigError("factor '" + first.type +
                          "' cannot occupy the timelike slot; use "
                          "totally_geodesic_hyperbolic or point there");
    if (is_lorentz_builtin(second))
        throw ConfigError("the spacelike slot cannot hold a Lorentz factor");
    return {make_factor(first, Signature::Lorentz), make_factor(second, Signature::Definite)};
}

BuiltChart build_calabi_cp(const ConstructionSpec& s) {
    auto [f1, f2] = definite_pair(s.factors);
    const bool first_active = f1.dim() > 0;
    CalabiParams params{s.r1, s.r2, s.a, CalabiTarget::CP};
    BuiltChart out;
    out.product = calabi_product(std::move(f1), std::move(f2), params);
    out.chart = out.product;
    const double q = s.r2 / s.r1, sq = s.r1 / s.r2;
    out.profile = Profile::constants(q - sq, first_active ? q : -sq, 1.0);
    return out;
}

BuiltChart build_calabi_ch(const ConstructionSpec& s) {
    CalabiParams params{s.r1, s.r2, s.a, CalabiTarget::CH};
    const double q = s.r2 / s.r1, sq = s.r1 / s.r2;
    BuiltChart out;
    if (s.ch_case == 1) {
        // spacelike factor, timelike point
        auto [f1, f2] = lorentz_pair(FactorSpec{"point", 0, {}}, s.factors[0]);
        out.product = calabi_product(std::move(f1), std::move(f2), params);
        out.profile = Profile::constants(q + sq, sq, -1.0);
    } else {
        // Lorentz factor, spacelike point
        auto [f1, f2] = lorentz_pair(s.factors[0], FactorSpec{"point", 0, {}});
        out.product = calabi_product(std::move(f1), std::move(f2), params);
        out.profile = Profile::constants(q + sq, q, -1.0);
    }
    out.chart = out.product;
    return out;
}

BuiltChart build_warped(const ConstructionSpec& s) {
    Profile prof =
        Profile::integrated(s.lambda1, s.lambda2_0, s.k0, s.c, s.t_min, s.t_max);
    BuiltChart out;
    if (s.c == 1.0) {
        auto [f1, f2] = definite_pair(s.factors);
        out.product = warped_product(std::move(f1), std::move(f2), profile_curve_cp(prof));
    } else {
        const double u0 = prof.conserved_u();
        if (std::abs(u0) <= 1e-10)
            throw ProfileCaseError("the profile has u = 0; use the null_warp construction");
        const UCase ucase = u0 > 0.0 ? UCase::Positive : UCase::Negative;
        ChartPtr curve = profile_curve_ch(prof, ucase);
        FactorSpec point{"point", 0, {}};
        std::pair<FactorLift, FactorLift> fpair =
            s.factors.size() == 2 ? lorentz_pair(s.factors[0], s.factors[1])
            : u0 > 0.0            ? lorentz_pair(point, s.factors[0])
                                  : lorentz_pair(s.factors[0], point);
        out.product =
            warped_product(std::move(fpair.first), std::move(fpair.second), std::move(curve));
    }
    out.chart = out.product;
    out.profile = std::move(prof);
    return out;
}

BuiltChart build_minimal_cp(const ConstructionSpec& s) {
    BuiltChart out;
    out.product = minimal_calabi_cp(make_factor(s.factors[0], Signature::Definite), s.n);
    out.chart = out.product;
    const double rq = 1.0 / std::sqrt(double(s.n)); // r2/r1 for the minimal radii
    out.profile = Profile::constants(rq - 1.0 / rq, rq, 1.0);
    return out;
}

BuiltChart build_minimal_two(const ConstructionSpec& s) {
    BuiltChart out;
    FactorLift f1 = make_factor(s.factors[0], Signature::Definite);
    FactorLift f2 = make_factor(s.factors[1], Signature::Definite);
    const double n1 = double(f1.dim()), n2 = double(f2.dim());
    out.product = minimal_calabi_two_factor(std::move(f1), std::move(f2));
    out.chart = out.product;
    const double q = std::sqrt((n2 + 1.0) / (n1 + 1.0));
    out.profile = Profile::constants(q - 1.0 / q, q, 1.0);
    return out;
}

BuiltChart build_null_warp(const ConstructionSpec& s) {
    Profile prof =
        Profile::integrated(s.lambda1, s.lambda2_0, s.k0, s.c, s.t_min, s.t_max);
    BuiltChart out;
    out.chart = null_warp_ch(flat_plane(s.psi3_dim, s.psi3_offsets), prof);
    out.profile = std::move(prof);
    return out;
}

struct CheckList {
    Json records = Json::array();
    bool all_pass = true;

    void add(const std::string& name, double max_residual, double tolerance) {
        const bool pass = std::isfinite(max_residual) && max_residual <= tolerance;
        records.push_back(check_record(name, pass, max_residual, tolerance));
        all_pass = all_pass && pass;
    }

    /// Run `body` (returning a max residual); an exception becomes a failed
    /// record carrying the message.
    void run(const std::string& name, double tolerance, const std::function<double()>& body) {
        try {
            add(name, body(), tolerance);
        } catch (const std::exception& e) {
            Json rec = check_record(name, false,
                                    std::numeric_limits<double>::quiet_NaN(), tolerance);
            rec["error"] = e.what();
            records.push_back(rec);
            all_pass = false;
        }
    }
};

using Samples = std::vector<std::vector<double>>;

double max_over(const Samples& samples,
                const std::function<double(std::span<const double>)>& f) {
    double m = 0.0;
    for (const auto& u : samples) m = std::max(m, f(u));
    return m;
}

Json complex_pair(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

void cmd_build(const BuiltChart& built, const RunConfig& cfg, const Samples& samples,
               CheckList& checks, Json& report) {
    Json pts = Json::array();
    for (const auto& u : samples) {
        Json rec;
        rec["u"] = u;
        Json psi = Json::array();
        for (const auto& z : built.chart->eval(u)) psi.push_back(complex_pair(z));
        rec["psi"] = psi;
        pts.push_back(rec);
    }
    report["points"] = pts;
    const HermitianSpace space = built.chart->space();
    checks.run("space_residual", cfg.tol.space, [&] {
        return max_over(samples, [&](std::span<const double> u) {
            return space_residual(built.chart->eval(u), space);
        });
    });
}

void cmd_verify(const BuiltChart& built, const RunConfig& cfg, const Samples& samples,
                CheckList& checks) {
    const HermitianSpace space = built.chart->space();
    checks.run("space_residual", cfg.tol.space, [&] {
        return max_over(samples, [&](std::span<const double> u) {
            return space_residual(built.chart->eval(u), space);
        });
    });
    checks.run("lagrangian_residual", cfg.tol.lagrangian, [&] {
        return max_over(samples, [&](std::span<const double> u) {
            return lagrangian_residual(*built.chart, u);
        });
    });
    checks.run("gauss_residual", cfg.tol.gauss, [&] {
        return max_over(samples, [&](std::span<const double> u) {
            return gauss_residual(*built.chart, u);
        });
    });
    checks.run("codazzi_residual", cfg.tol.codazzi, [&] {
        return max_over(samples, [&](std::span<const double> u) {
            return codazzi_residual(*built.chart, u);
        });
    });
    // Constant-eigenvalue products have parallel mean curvature.
    if (built.product && built.product->expectation() && built.chart == built.product)
        checks.run("parallel_mean_curvature", cfg.tol.parallel,
                   [&] { return parallel_residual(*built.chart, samples); });
}

void cmd_classify(const BuiltChart& built, const RunConfig& cfg, const Samples& samples,
                  CheckList& checks, Json& report) {
    const ClassifierVerdict v = classify(*built.chart, samples, cfg.tol.classifier);

    Json block;
    block["kind"] = verdict_name(v.kind);
    block["lambdas"] = v.lambdas;
    block["spreads"] = v.spreads;
    block["block_dims"] = v.block_dims;
    block["constancy"] = v.constancy;
    block["minimal"] = v.minimal;
    block["parallel_h_residual"] = v.parallel_h_residual;
    Json e1 = Json::array();
    for (const auto& z : v.e1_ambient) e1.push_back(complex_pair(z));
    block["e1_ambient"] = e1;
    Json diag;
    for (const auto& [key, value] : v.diagnostics) diag[key] = value;
    block["diagnostics"] = diag;
    report["classifier"] = block;

    checks.run("lagrangian_precheck", cfg.tol.lagrangian, [&] {
        const auto it = v.diagnostics.find("max_lagrangian_residual");
        return it == v.diagnostics.end() ? std::numeric_limits<double>::quiet_NaN()
                                         : it->second;
    });

    const bool pristine = built.product && built.chart == built.product;
    std::optional<ProductExpectation> expect;
    if (pristine) expect = built.product->expectation();
    if (expect) {
        const VerdictKind want = expect->lambda3 ? VerdictKind::CalabiTwoFactor
                                                 : VerdictKind::CalabiWithPoint;
        checks.add("verdict_kind", v.kind == want ? 0.0 : 1.0, 0.5);
        if (v.kind == want) {
            double dev = std::abs(v.lambdas[0] - expect->lambda1);
            dev = std::max(dev, std::abs(v.lambdas[1] - expect->lambda2));
            if (expect->lambda3) dev = std::max(dev, std::abs(v.lambdas[2] - *expect->lambda3));
            checks.add("lambda_error", dev, cfg.tol.classifier);
        }
    }
    // Theorem-level eigenvalue relations, curvature-signed.
    if (v.kind == VerdictKind::CalabiWithPoint) {
        const double c = built.chart->curvature();
        checks.add("lambda_relation",
                   std::abs(v.lambdas[0] * v.lambdas[1] - v.lambdas[1] * v.lambdas[1] + c),
                   1e-8);
    } else if (v.kind == VerdictKind::CalabiTwoFactor) {
        const double c = built.chart->curvature();
        checks.add("lambda_relation", std::abs(v.lambdas[1] * v.lambdas[2] + c), 1e-8);
    }
}

void cmd_ode_check(const BuiltChart& built, const RunConfig& cfg, CheckList& checks,
                   Json& report) {
    if (!built.profile)
        throw ConfigError("ode-check needs a construction with a profile");
    const Profile& prof = *built.profile;
    const SolutionBundle bundle = build_solutions(prof);

    // 100-point grid over the admissible span, 5% margin on each side.
    const auto span = prof.tspan();
    const std::size_t grid_n = 100;
    std::vector<double> grid(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i)
        grid[i] = span[0] + (span[1] - span[0]) *
                                (0.05 + 0.9 * double(i) / double(grid_n - 1));

    const auto grid_max = [&](const std::function<double(double)>& f) {
        double m = 0.0;
        for (double t : grid) m = std::max(m, f(t));
        return m;
    };

    checks.run("riccati_residual", cfg.tol.riccati,
               [&] { return grid_max([&](double t) { return riccati_residual(prof, t); }); });

    const auto [u_mean, u_maxdev] = u_constancy(prof, grid_n);
    checks.add("u_constancy", u_maxdev / std::max(std::abs(u_mean), 1.0), cfg.tol.u_constancy);

    checks.run("ode_residual", cfg.tol.ode, [&] {
        return grid_max([&](double t) {
            const double r1 = ode_residual(bundle.g1(t), prof, t);
            const double r2 = ode_residual(bundle.g2(t), prof, t);
            const double r3 = ode_residual(bundle.g1tilde(t), prof, t);
            return std::max({r1, r2, r3});
        });
    });

    checks.run("f2_identity", cfg.tol.f2_identity, [&] {
        return grid_max([&](double t) {
            const std::complex<double> i(0.0, 1.0);
            const std::complex<double> lhs = bundle.f2(t).v;
            const std::complex<double> rhs =
                -bundle.g2(t).v * (prof.k_at(t) + i * prof.lambda2_at(t));
            return std::abs(lhs - rhs);
        });
    });

    checks.run("antiderivatives", cfg.tol.antiderivative, [&] {
        return grid_max([&](double t) {
            const double c = prof.c();
            const double r1 = std::abs(bundle.f1(t).d1 - c * bundle.g1(t).v);
            const double r2 = std::abs(bundle.f2(t).d1 - c * bundle.g2(t).v);
            const double r3 = std::abs(bundle.f1tilde(t).d1 - c * bundle.g1tilde(t).v);
            return std::max({r1, r2, r3});
        });
    });

    const bool u_zero = std::abs(prof.conserved_u()) <= 1e-10;
    checks.run("independence", u_zero ? 1e-9 : cfg.tol.independence, [&] {
        return grid_max([&](double t) {
            const IndependenceResult r = independence_check(bundle, t);
            if (r.u_class == UClass::Zero) return std::abs(r.fprime);
            return std::abs(std::abs(r.fprime) - r.expected_modulus) /
                   (1.0 + r.expected_modulus);
        });
    });

    Json block;
    block["profile"] = prof.is_constant() ? "constants" : "integrated";
    block["tspan"] = Json::array({span[0], span[1]});
    block["grid_points"] = grid_n;
    block["u_mean"] = u_mean;
    block["u_maxdev"] = u_maxdev;
    block["u_class"] = u_zero ? "zero" : "nonzero";
    try {
        const IndependenceResult r0 = independence_check(bundle, 0.0);
        block["fprime_at_0"] = complex_pair(r0.fprime);
        block["ftilde_prime_at_0"] = complex_pair(r0.ftilde_prime);
        block["expected_fprime_modulus_at_0"] = r0.expected_modulus;
    } catch (const Error& e) {
        block["independence_error_at_0"] = std::string(e.what());
    }
    report["odecheck"] = block;
}

} // namespace

BuiltChart build_chart(const RunConfig& cfg) {
    const ConstructionSpec& s = cfg.construction;
    BuiltChart out;
    if (s.type == "calabi_cp") out = build_calabi_cp(s);
    else if (s.type == "calabi_ch") out = build_calabi_ch(s);
    else if (s.type == "warped") out = build_warped(s);
    else if (s.type == "minimal_cp") out = build_minimal_cp(s);
    else if (s.type == "minimal_two") out = build_minimal_two(s);
    else if (s.type == "null_warp") out = build_null_warp(s);
    else throw ConfigError("unknown construction type '" + s.type + "'");
    if (s.phase_eps != 0.0) out.chart = phase_perturbation(out.chart, s.phase_eps);
    return out;
}

std::pair<Json, int> run_command(const std::string& command, const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const BuiltChart built = build_chart(cfg);

    Json report;
    Json artifact;
    artifact["name"] = kArtifactName;
    artifact["version"] = kArtifactVersion;
    report["artifact"] = artifact;
    report["command"] = command;
    report["config"] = cfg.echo;

    Json meta;
    meta["kind"] = built.chart->kind();
    meta["param_dim"] = built.chart->param_dim();
    meta["ambient_complex_dim"] = built.chart->ambient_complex_dim();
    meta["signature"] =
        built.chart->signature() == Signature::Lorentz ? "lorentz" : "definite";
    meta["curvature"] = built.chart->curvature();
    report["construction"] = meta;
    report["samples"] = cfg.samples;
    report["seed"] = cfg.seed;

    const Samples samples = sample_box(built.chart->domain(), cfg.samples, cfg.seed);

    CheckList checks;
    if (command == "build") cmd_build(built, cfg, samples, checks, report);
    else if (command == "verify") cmd_verify(built, cfg, samples, checks);
    else if (command == "classify") cmd_classify(built, cfg, samples, checks, report);
    else if (command == "ode-check") cmd_ode_check(built, cfg, checks, report);
    else throw ConfigError("unknown command '" + command + "'");

    report["checks"] = checks.records;
    report["pass"] = checks.all_pass;
    const auto t1 = std::chrono::steady_clock::now();
    report["timing_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
    return {report, checks.all_pass ? 0 : 1};
}

} // namespace warplag
