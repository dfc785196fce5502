#include "warplag/config.hpp"

#include <fstream>
#include <set>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

using Json = nlohmann::ordered_json;

double number_field(const Json& j, const std::string& key, bool required,
                    double fallback = 0.0) {
    if (!j.contains(key)) {
        if (required) throw ConfigError("missing field '" + key + "'");
        return fallback;
    }
    const Json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return eval_const_expr(v.get<std::string>());
        } catch (const ConfigError& e) {
            throw ConfigError("field '" + key + "': " + e.what());
        }
    }
    throw ConfigError("field '" + key + "' must be a number or an expression string");
}

FactorSpec parse_factor(const Json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("factor must be an object with a 'type'");
    FactorSpec f;
    f.type = j.at("type").get<std::string>();
    static const std::set<std::string> known{"point", "great_circle", "totally_geodesic_sphere",
                                             "totally_geodesic_hyperbolic", "flat_torus"};
    if (!known.count(f.type)) throw ConfigError("unknown factor builtin '" + f.type + "'");
    if (f.type == "totally_geodesic_sphere" || f.type == "totally_geodesic_hyperbolic") {
        if (!j.contains("dim")) throw ConfigError("factor '" + f.type + "' needs 'dim'");
        const auto d = j.at("dim").get<long long>();
        if (d < 1) throw ConfigError("factor dimension must be >= 1");
        f.dim = static_cast<std::size_t>(d);
    }
    if (f.type == "flat_torus") {
        if (!j.contains("frequencies") || !j.at("frequencies").is_array() ||
            j.at("frequencies").empty())
            throw ConfigError("factor 'flat_torus' needs a nonempty 'frequencies' array");
        for (const auto& x : j.at("frequencies")) {
            if (!x.is_number()) throw ConfigError("'frequencies' entries must be numbers");
            f.frequencies.push_back(x.get<double>());
        }
        f.dim = f.frequencies.size();
    }
    return f;
}

std::vector<FactorSpec> parse_factors(const Json& c) {
    std::vector<FactorSpec> out;
    if (c.contains("factor")) out.push_back(parse_factor(c.at("factor")));
    if (c.contains("factors")) {
        if (!c.at("factors").is_array()) throw ConfigError("'factors' must be an array");
        for (const auto& f : c.at("factors")) out.push_back(parse_factor(f));
    }
    return out;
}

void parse_calabi_radii(const Json& c, ConstructionSpec& spec, bool cp) {
    spec.r1 = number_field(c, "r1", true);
    spec.r2 = number_field(c, "r2", true);
    spec.a = number_field(c, "a", false, 1.0);
    if (spec.r1 <= 0.0 || spec.r2 <= 0.0 || spec.a <= 0.0)
        throw ConfigError("parameter constraint violated: r1, r2, a must be positive");
    const double q = cp ? spec.r1 * spec.r1 + spec.r2 * spec.r2 - 1.0
                        : -spec.r1 * spec.r1 + spec.r2 * spec.r2 + 1.0;
    if (std::abs(q) > 1e-12)
        throw ConfigError(cp ? "parameter constraint violated: r1^2 + r2^2 must equal 1"
                             : "parameter constraint violated: -r1^2 + r2^2 must equal -1");
}

void parse_profile_fields(const Json& c, ConstructionSpec& spec, double default_c) {
    if (!c.contains("lambda1") || !c.at("lambda1").is_string())
        throw ConfigError("profile constructions need 'lambda1' as an expression string");
    spec.lambda1_text = c.at("lambda1").get<std::string>();
    try {
        spec.lambda1 = parse_expr(spec.lambda1_text);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("field 'lambda1': ") + e.what());
    }
    spec.lambda2_0 = number_field(c, "lambda2_0", true);
    spec.k0 = number_field(c, "k0", false, 0.0);
    spec.c = number_field(c, "c", false, default_c);
    spec.t_min = number_field(c, "t_min", false, -1.0);
    spec.t_max = number_field(c, "t_max", false, 1.0);
    if (!(spec.t_min < 0.0 && spec.t_max > 0.0) && !(spec.t_min == 0.0 || spec.t_max == 0.0))
        if (spec.t_min > 0.0 || spec.t_max < 0.0)
            throw ConfigError("the profile interval [t_min, t_max] must contain 0");
    if (spec.t_min >= spec.t_max) throw ConfigError("t_min must be below t_max");
}

ConstructionSpec parse_construction(const Json& c) {
    if (!c.is_object() || !c.contains("type"))
        throw ConfigError("'construction' must be an object with a 'type'");
    ConstructionSpec spec;
    spec.type = c.at("type").get<std::string>();
    spec.factors = parse_factors(c);

    if (spec.type == "calabi_cp") {
        parse_calabi_radii(c, spec, true);
        if (spec.factors.empty()) throw ConfigError("calabi_cp needs a factor");
    } else if (spec.type == "calabi_ch") {
        parse_calabi_radii(c, spec, false);
        spec.ch_case = c.contains("case") ? c.at("case").get<int>() : 0;
        if (spec.ch_case != 1 && spec.ch_case != 2)
            throw ConfigError("calabi_ch needs 'case' 1 (spherical factor) or "
                              "2 (Lorentz factor)");
        if (spec.factors.size() != 1)
            throw ConfigError("calabi_ch takes exactly one factor; the other slot is a point");
    } else if (spec.type == "warped") {
        parse_profile_fields(c, spec, 1.0);
        if (spec.c != 1.0 && spec.c != -1.0)
            throw ConfigError("profile curvature c must be 1 or -1");
        if (spec.factors.empty() || spec.factors.size() > 2)
            throw ConfigError("warped takes one or two factors");
    } else if (spec.type == "minimal_cp") {
        if (!c.contains("n")) throw ConfigError("minimal_cp needs the total dimension 'n'");
        const auto n = c.at("n").get<long long>();
        if (n < 1) throw ConfigError("minimal_cp dimension must be >= 1");
        spec.n = static_cast<std::size_t>(n);
        if (spec.factors.size() != 1) throw ConfigError("minimal_cp takes exactly one factor");
    } else if (spec.type == "minimal_two") {
        if (spec.factors.size() != 2) throw ConfigError("minimal_two takes exactly two factors");
    } else if (spec.type == "null_warp") {
        parse_profile_fields(c, spec, -1.0);
        if (spec.c != -1.0) throw ConfigError("null_warp requires c = -1");
        if (!c.contains("psi3") || !c.at("psi3").is_object())
            throw ConfigError("null_warp needs a 'psi3' object");
        const Json& p = c.at("psi3");
        if (!p.contains("dim")) throw ConfigError("psi3 needs 'dim'");
        const auto d = p.at("dim").get<long long>();
        if (d < 1) throw ConfigError("psi3 dimension must be >= 1");
        spec.psi3_dim = static_cast<std::size_t>(d);
        if (p.contains("offsets")) {
            if (!p.at("offsets").is_array())
                throw ConfigError("psi3 'offsets' must be an array of [re, im] pairs");
            for (const auto& z : p.at("offsets")) {
                if (!z.is_array() || z.size() != 2)
                    throw ConfigError("psi3 'offsets' entries must be [re, im] pairs");
                spec.psi3_offsets.emplace_back(z[0].get<double>(), z[1].get<double>());
            }
            if (spec.psi3_offsets.size() != spec.psi3_dim)
                throw ConfigError("psi3 'offsets' length must match 'dim'");
        }
    } else {
        throw ConfigError("unknown construction type '" + spec.type + "'");
    }

    if (c.contains("perturbation")) {
        const Json& p = c.at("perturbation");
        if (!p.is_object() || !p.contains("phase_eps"))
            throw ConfigError("'perturbation' must be an object with 'phase_eps'");
        spec.phase_eps = number_field(p, "phase_eps", true);
    }
    return spec;
}

void parse_tolerances(const Json& t, Tolerances& tol) {
    if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
    const auto set = [&](const char* key, double& slot) {
        if (t.contains(key)) {
            slot = number_field(t, key, true);
            if (slot <= 0.0) throw ConfigError(std::string("tolerance '") + key +
                                               "' must be positive");
        }
    };
    set("space", tol.space);
    set("lagrangian", tol.lagrangian);
    set("gauss", tol.gauss);
    set("codazzi", tol.codazzi);
    set("classifier", tol.classifier);
    set("parallel", tol.parallel);
    set("riccati", tol.riccati);
    set("u_constancy", tol.u_constancy);
    set("ode", tol.ode);
    set("f2_identity", tol.f2_identity);
    set("antiderivative", tol.antiderivative);
    set("independence", tol.independence);
}

} // namespace

RunConfig parse_config_json(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    if (!doc.contains("construction")) throw ConfigError("config needs a 'construction' object");

    RunConfig cfg;
    cfg.echo = doc;
    cfg.construction = parse_construction(doc.at("construction"));

    if (doc.contains("samples")) {
        const auto s = doc.at("samples").get<long long>();
        if (s < 1) throw ConfigError("'samples' must be >= 1");
        cfg.samples = static_cast<std::size_t>(s);
    }
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("tolerances")) parse_tolerances(doc.at("tolerances"), cfg.tol);
    if (doc.contains("report_path")) cfg.report_path = doc.at("report_path").get<std::string>();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config_json(doc);
}

} // namespace warplag
