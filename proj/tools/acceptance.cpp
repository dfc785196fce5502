// Acceptance runner: one line of output per criterion, nonzero exit when any
// criterion fails.  Each criterion is self-contained and uses independent
// oracles where the checked value admits one.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "curve_fixture.hpp"
#include "fd_suite.hpp"
#include "warplag/ambient.hpp"
#include "warplag/classifier.hpp"
#include "warplag/expr.hpp"
#include "warplag/factors.hpp"
#include "warplag/geometry.hpp"
#include "warplag/legendre.hpp"
#include "warplag/odecheck.hpp"
#include "warplag/products.hpp"
#include "warplag/profile.hpp"
#include "warplag/sampling.hpp"

using namespace warplag;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
        o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += what;
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

WarpedPtr chart_cp2() {
    return calabi_product(great_circle_factor(), point_factor(),
                          {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0, CalabiTarget::CP});
}

WarpedPtr chart_ch_case1() {
    return calabi_product(point_factor(Signature::Lorentz), great_circle_factor(),
                          {std::sqrt(2.0), 1.0, 1.0, CalabiTarget::CH});
}

WarpedPtr chart_ch_case2() {
    return calabi_product(totally_geodesic_hyperbolic_factor(1), point_factor(),
                          {std::sqrt(2.0), 1.0, 1.0, CalabiTarget::CH});
}

// 1. residual suite over the product charts
Outcome criterion1() {
    Outcome o;
    const std::vector<std::pair<std::string, ChartPtr>> charts = {
        {"cp2_calabi", chart_cp2()},
        {"cp3_with_point", minimal_calabi_cp(totally_geodesic_sphere_factor(2), 3)},
        {"cp3_two_factor", minimal_calabi_two_factor(great_circle_factor(), great_circle_factor())},
        {"ch2_case1", chart_ch_case1()},
        {"ch2_case2", chart_ch_case2()},
    };
    for (const auto& [name, chart] : charts) {
        const HermitianSpace sp = chart->space();
        double ws = 0, wl = 0, wg = 0, wc = 0;
        for (const auto& u : sample_box(chart->domain(), 50, 101)) {
            ws = std::max(ws, space_residual(chart->eval(u), sp));
            wl = std::max(wl, lagrangian_residual(*chart, u));
            wg = std::max(wg, gauss_residual(*chart, u));
            wc = std::max(wc, codazzi_residual(*chart, u));
        }
        note(o, ws <= 1e-10, name + " space " + fmt(ws));
        note(o, wl <= 1e-8, name + " lagrangian " + fmt(wl));
        note(o, wg <= 1e-6, name + " gauss " + fmt(wg));
        note(o, wc <= 1e-7, name + " codazzi " + fmt(wc));
    }
    if (o.pass) o.detail = "5 charts x 50 points within the residual ladder";
    return o;
}

// 2. detected constants of the CP2 chart
Outcome criterion2() {
    Outcome o;
    const auto chart = chart_cp2();
    const auto v = classify(*chart, sample_box(chart->domain(), 20, 33), 1e-6);
    const double s2i = 1.0 / std::sqrt(2.0);
    note(o, v.kind == VerdictKind::CalabiWithPoint, "kind != CalabiWithPoint");
    if (v.lambdas.size() == 2) {
        note(o, std::abs(v.lambdas[0] + s2i) <= 1e-6, "lambda1 " + fmt(v.lambdas[0]));
        note(o, std::abs(v.lambdas[1] - s2i) <= 1e-6, "lambda2 " + fmt(v.lambdas[1]));
        const double rel = v.lambdas[0] * v.lambdas[1] - v.lambdas[1] * v.lambdas[1] + 1.0;
        note(o, std::abs(rel) <= 1e-8, "eigenvalue relation " + fmt(rel));
        if (o.pass)
            o.detail = "lambdas (" + fmt(v.lambdas[0]) + ", " + fmt(v.lambdas[1]) +
                       "), relation " + fmt(rel);
    } else {
        note(o, false, "no eigenvalue pair detected");
    }
    return o;
}

// 3. minimality of the distinguished radii, sensitivity to detuning
Outcome criterion3() {
    Outcome o;
    const std::vector<std::pair<std::string, WarpedPtr>> charts = {
        {"n=2", minimal_calabi_cp(great_circle_factor(), 2)},
        {"n=3", minimal_calabi_cp(totally_geodesic_sphere_factor(2), 3)},
    };
    double worst = 0.0;
    for (const auto& [name, chart] : charts) {
        double h = 0.0;
        for (const auto& u : sample_box(chart->domain(), 20, 51))
            h = std::max(h, mean_curvature(*chart, u).norm);
        worst = std::max(worst, h);
        note(o, h <= 1e-7, name + " |H| " + fmt(h));
    }
    const double r1 = std::sqrt(2.0 / 3.0) + 1e-2;
    const double r2 = std::sqrt(1.0 - r1 * r1);
    const auto detuned =
        calabi_product(great_circle_factor(), point_factor(), {r1, r2, 1.0, CalabiTarget::CP});
    double hd = 0.0;
    for (const auto& u : sample_box(detuned->domain(), 10, 52))
        hd = std::max(hd, mean_curvature(*detuned, u).norm);
    note(o, hd > 1e-3, "detuned |H| " + fmt(hd) + " not above 1e-3");
    if (o.pass) o.detail = "minimal |H| <= " + fmt(worst) + ", detuned |H| = " + fmt(hd);
    return o;
}

// 4. Lorentz cases: classification constants and absence of minimality
Outcome criterion4() {
    Outcome o;
    const double s2 = std::sqrt(2.0);
    const std::vector<std::tuple<std::string, WarpedPtr, double>> cases = {
        {"case1", chart_ch_case1(), s2},
        {"case2", chart_ch_case2(), 1.0 / s2},
    };
    for (const auto& [name, chart, l2_want] : cases) {
        const auto samples = sample_box(chart->domain(), 20, 77);
        const auto v = classify(*chart, samples, 1e-6);
        note(o, v.kind == VerdictKind::CalabiWithPoint, name + " kind");
        if (v.lambdas.size() == 2) {
            note(o, std::abs(v.lambdas[1] - l2_want) <= 1e-6,
                 name + " lambda2 " + fmt(v.lambdas[1]));
            const double rel = v.lambdas[0] * v.lambdas[1] - v.lambdas[1] * v.lambdas[1] - 1.0;
            note(o, std::abs(rel) <= 1e-8, name + " relation " + fmt(rel));
        } else {
            note(o, false, name + " no eigenvalue pair detected");
        }
        note(o, !v.minimal, name + " wrongly flagged minimal");
        double hmin = 1e300;
        for (const auto& u : samples) hmin = std::min(hmin, mean_curvature(*chart, u).norm);
        note(o, hmin > 0.1, name + " min |H| " + fmt(hmin));
    }
    if (o.pass) o.detail = "both Lorentz placements detected with the expected constants";
    return o;
}

// 5. two-factor minimal chart: eigenvalues, cross-block vanishing, minimality
Outcome criterion5() {
    Outcome o;
    const auto chart = minimal_calabi_two_factor(great_circle_factor(), great_circle_factor());
    const auto samples = sample_box(chart->domain(), 20, 88);
    const auto v = classify(*chart, samples, 1e-6);
    note(o, v.kind == VerdictKind::CalabiTwoFactor, "kind != CalabiTwoFactor");
    if (v.lambdas.size() == 3) {
        note(o, std::abs(v.lambdas[0]) <= 1e-6, "lambda1 " + fmt(v.lambdas[0]));
        note(o, std::abs(v.lambdas[1] - 1.0) <= 1e-6, "lambda2 " + fmt(v.lambdas[1]));
        note(o, std::abs(v.lambdas[2] + 1.0) <= 1e-6, "lambda3 " + fmt(v.lambdas[2]));
    } else {
        note(o, false, "no eigenvalue triple detected");
    }
    double cross = 0.0, h = 0.0;
    for (const auto& u : samples) {
        const CubicForm C = second_fundamental_form(*chart, u);
        for (std::size_t c = 0; c < 3; ++c) cross = std::max(cross, std::abs(C.at(1, 2, c)));
        h = std::max(h, mean_curvature(*chart, u).norm);
    }
    note(o, cross <= 1e-8, "cross-block " + fmt(cross));
    note(o, h <= 1e-7, "|H| " + fmt(h));
    if (o.pass) o.detail = "lambdas (0, 1, -1), cross-block " + fmt(cross) + ", |H| " + fmt(h);
    return o;
}

// 6. profile ODE machinery
Outcome criterion6() {
    Outcome o;
    struct Inst {
        std::string name;
        Profile prof;
        bool null_u;
    };
    const std::vector<Inst> insts = {
        {"cp_const", Profile::constants(-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0), false},
        {"ch_const_1", Profile::constants(3.0 / std::sqrt(2.0), std::sqrt(2.0), -1.0), false},
        {"ch_const_2", Profile::constants(3.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), -1.0),
         false},
        {"integrated", Profile::integrated(parse_expr("2+sin(t)"), 0.3, 0.0, 1.0, -1.0, 1.0),
         false},
        {"null_u", Profile::integrated(parse_expr("1"), 0.0, 1.0, -1.0, -1.0, 0.25), true},
    };
    for (const auto& inst : insts) {
        const auto span = inst.prof.tspan();
        const double lo = span[0] + 0.05 * (span[1] - span[0]);
        const double hi = span[1] - 0.05 * (span[1] - span[0]);
        const SolutionBundle b = build_solutions(inst.prof);

        double wr = 0, wode = 0, wf = 0, wtf = 1e300;
        for (int i = 0; i < 100; ++i) {
            const double t = lo + (hi - lo) * double(i) / 99.0;
            wr = std::max(wr, riccati_residual(inst.prof, t));
            wode = std::max({wode, ode_residual(b.g1(t), inst.prof, t),
                             ode_residual(b.g2(t), inst.prof, t),
                             ode_residual(b.g1tilde(t), inst.prof, t)});
            const auto ind = independence_check(b, t);
            if (inst.null_u) {
                note(o, ind.u_class == UClass::Zero, inst.name + " u-class");
                wf = std::max(wf, std::abs(ind.fprime));
                wtf = std::min(wtf, std::abs(ind.ftilde_prime));
            } else {
                note(o, ind.u_class == UClass::NonZero, inst.name + " u-class");
                wf = std::max(wf, std::abs(std::abs(ind.fprime) - ind.expected_modulus) /
                                      (1.0 + ind.expected_modulus));
            }
        }
        note(o, wr <= 1e-8, inst.name + " riccati " + fmt(wr));
        note(o, wode <= 1e-8, inst.name + " ode " + fmt(wode));

        const auto [mean, maxdev] = u_constancy(inst.prof, 100);
        if (inst.null_u) {
            note(o, maxdev <= 1e-7, inst.name + " u drift " + fmt(maxdev));
            note(o, wf <= 1e-9, inst.name + " |f'| " + fmt(wf));
            note(o, wtf >= 0.5, inst.name + " |ftilde'| " + fmt(wtf));
        } else {
            note(o, maxdev / std::abs(mean) <= 1e-7,
                 inst.name + " u drift " + fmt(maxdev / std::abs(mean)));
            note(o, wf <= 1e-7, inst.name + " |f'| identity " + fmt(wf));
        }
    }
    if (o.pass) o.detail = "5 profiles through the Riccati / solution / independence ladder";
    return o;
}

// 7. parallelism of nabla h and its block decomposition
Outcome criterion7() {
    Outcome o;
    const auto tg_prod = minimal_calabi_cp(totally_geodesic_sphere_factor(2), 3);
    const double par = parallel_residual(*tg_prod, sample_box(tg_prod->domain(), 12, 19));
    note(o, par <= 1e-7, "totally geodesic product nabla h " + fmt(par));

    const auto curved = calabi_product(
        curve_factor(testfix::wobbly_curve(1.0)), point_factor(),
        {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0, CalabiTarget::CP});
    const ParallelReport rep = parallel_report(*curved, sample_box(curved->domain(), 10, 20));
    note(o, rep.total_max > 1e-2, "factor not actually curved: " + fmt(rep.total_max));
    note(o, rep.factor_block_dev <= 1e-6, "factor block deviation " + fmt(rep.factor_block_dev));
    note(o, rep.off_block_max <= 1e-7, "off-block components " + fmt(rep.off_block_max));
    if (o.pass)
        o.detail = "parallel " + fmt(par) + "; curved-factor block dev " +
                   fmt(rep.factor_block_dev) + ", off-block " + fmt(rep.off_block_max);
    return o;
}

// 8. null-warp chart over a flat plane
Outcome criterion8() {
    Outcome o;
    const Profile prof = Profile::integrated(parse_expr("1"), 0.0, 1.0, -1.0, -2.0, 2.0);
    const std::vector<std::complex<double>> off{{0.3, -0.2}, {-0.1, 0.4}};
    const auto chart = null_warp_ch(flat_plane(2, off), prof);
    const HermitianSpace sp = chart->space();

    double ws = 0, wl = 0;
    for (const auto& u : sample_box(chart->domain(), 40, 5)) {
        ws = std::max(ws, space_residual(chart->eval(u), sp));
        wl = std::max(wl, lagrangian_residual(*chart, u));
    }
    note(o, ws <= 1e-8, "Lorentz norm residual " + fmt(ws));
    note(o, wl <= 1e-8, "lagrangian residual " + fmt(wl));

    double wa = 0;
    for (const auto& p : sample_unit(2, 12, 6)) {
        const std::vector<double> u{0.0, p[0] - 0.5, p[1] - 0.5};
        const auto z = chart->eval(u);
        const double n3 = std::norm(u[1] + off[0]) + std::norm(u[2] + off[1]);
        wa = std::max(wa, std::abs(z[0].real() - (1.0 + 0.5 * n3)));
    }
    note(o, wa <= 1e-10, "potential real part " + fmt(wa));
    if (o.pass) o.detail = "norm " + fmt(ws) + ", lagrangian " + fmt(wl) + ", Re A0 " + fmt(wa);
    return o;
}

// 9. negative controls for the classifier
Outcome criterion9() {
    Outcome o;
    const auto base = chart_cp2();
    const auto samples = sample_box(base->domain(), 12, 91);

    const auto broken = phase_perturbation(base, 1e-2);
    const auto vb = classify(*broken, samples, 1e-6);
    note(o, vb.kind == VerdictKind::NotCalabi, "perturbed chart not rejected");

    const Profile prof = Profile::integrated(parse_expr("2+sin(t)"), 0.3, 0.0, 1.0, -1.0, 1.0);
    const auto varying =
        warped_product(great_circle_factor(), point_factor(), profile_curve_cp(prof));
    const auto vv = classify(*varying, sample_box(varying->domain(), 14, 92), 1e-6);
    note(o, vv.kind == VerdictKind::NotCalabi, "varying-profile chart not rejected");

    const auto tg = totally_geodesic_sphere_factor(2).chart;
    bool any_detection = false;
    for (const auto& u : sample_box(tg->domain(), 8, 93))
        if (detect_e1(second_fundamental_form(*tg, u), 1e-6).has_value()) any_detection = true;
    note(o, !any_detection, "totally geodesic chart produced a detection");
    if (o.pass) o.detail = "perturbed and varying charts rejected, geodesic chart undetected";
    return o;
}

// 10. jet engine versus difference stencils
Outcome criterion10() {
    Outcome o;
    const auto r = fdsuite::run_all();
    note(o, r.max_consistency <= 1e-10, "direction consistency " + fmt(r.max_consistency));
    note(o, r.max_fd_err <= 1e-6, "stencil mismatch " + fmt(r.max_fd_err));
    if (o.pass)
        o.detail = "consistency " + fmt(r.max_consistency) + ", stencils " + fmt(r.max_fd_err);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"construction residual suite", criterion1},
        {"CP2 detected constants", criterion2},
        {"minimal radii", criterion3},
        {"CH case split", criterion4},
        {"two-factor constants", criterion5},
        {"profile ODE machinery", criterion6},
        {"nabla h decomposition", criterion7},
        {"null-warp chart", criterion8},
        {"classifier negative controls", criterion9},
        {"jets vs finite differences", criterion10},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2zu %-32s %s%s%s\n", i + 1, criteria[i].first.c_str(),
                    o.pass ? "PASS" : "FAIL", o.detail.empty() ? "" : " - ", o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
