#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "warplag/errors.hpp"
#include "warplag/expr.hpp"
#include "warplag/odecheck.hpp"
#include "warplag/profile.hpp"

using namespace warplag;
using cd = std::complex<double>;

namespace {

const cd I(0.0, 1.0);

std::vector<double> grid(const Profile& prof, int n) {
    const auto span = prof.tspan();
    const double lo = span[0] + 0.05 * (span[1] - span[0]);
    const double hi = span[1] - 0.05 * (span[1] - span[0]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    return out;
}

} // namespace

TEST_CASE("constant profile: closed-form solutions") {
    const double s2 = std::sqrt(2.0);
    const Profile prof = Profile::constants(-1.0 / s2, 1.0 / s2, 1.0);
    const SolutionBundle b = build_solutions(prof);

    CHECK(std::abs(b.g2(0.0).v - cd(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(b.g1(0.0).v - cd(0.0, -1.0 / s2)) < 1e-12); // k(0) - i lambda2(0)

    for (double t : {-1.7, -0.4, 0.0, 0.6, 2.3}) {
        // g2 = e^{i sqrt2 t}, g1 = (-i/sqrt2) e^{-i t / sqrt2}
        const cd g2_ref = std::exp(I * (s2 * t));
        const cd g1_ref = (-I / s2) * std::exp(-I * (t / s2));
        CHECK(std::abs(b.g2(t).v - g2_ref) < 1e-11);
        CHECK(std::abs(b.g1(t).v - g1_ref) < 1e-11);

        // f1 from the defining relation equals the closed form c e^{int(k - i lambda2)}
        const cd f1_ref = std::exp(-I * (t / s2));
        CHECK(std::abs(b.f1(t).v - f1_ref) < 1e-11);

        CHECK(ode_residual(b.g1(t), prof, t) < 1e-10);
        CHECK(ode_residual(b.g2(t), prof, t) < 1e-10);
        CHECK(ode_residual(b.g1tilde(t), prof, t) < 1e-10);
    }

    const auto ind = independence_check(b, 0.0);
    CHECK(ind.u_class == UClass::NonZero);
    CHECK(std::abs(ind.fprime - cd(-1.5, 0.0)) < 1e-10);
    CHECK(ind.expected_modulus == doctest::Approx(1.5).epsilon(1e-12));

    CHECK(riccati_residual(prof, 0.8) < 1e-12);
}

TEST_CASE("Wronskian identities tie the antiderivative functions to the solutions") {
    const double s2 = std::sqrt(2.0);

    SUBCASE("constant profile") {
        const Profile prof = Profile::constants(-1.0 / s2, 1.0 / s2, 1.0);
        const SolutionBundle b = build_solutions(prof);
        const double u0 = prof.conserved_u();
        for (double t : {-1.2, 0.0, 0.5, 1.9}) {
            const cd phase = std::exp(-I * (prof.lambda1_at(0.0) * t)); // e^{-i int lambda1}
            const cd w1 = b.f2(t).v * b.g1(t).v - b.f1(t).v * b.g2(t).v;
            CHECK(std::abs(w1 - (-u0) * phase) < 1e-9);
            const cd w2 = b.f2(t).v * b.g1tilde(t).v - b.f1tilde(t).v * b.g2(t).v;
            CHECK(std::abs(w2 - phase) < 1e-9);
        }
    }

    SUBCASE("integrated profile") {
        const Profile prof =
            Profile::integrated(parse_expr("2+sin(t)"), 0.3, 0.0, 1.0, -1.0, 1.0);
        const SolutionBundle b = build_solutions(prof);
        const double u0 = prof.conserved_u();
        for (double t : grid(prof, 7)) {
            // int lambda1 = 2t + 1 - cos(t) for lambda1 = 2 + sin(t)
            const cd phase = std::exp(-I * (2.0 * t + 1.0 - std::cos(t)));
            const cd w1 = b.f2(t).v * b.g1(t).v - b.f1(t).v * b.g2(t).v;
            CHECK(std::abs(w1 - (-u0) * phase) < 1e-8);
            const cd w2 = b.f2(t).v * b.g1tilde(t).v - b.f1tilde(t).v * b.g2(t).v;
            CHECK(std::abs(w2 - phase) < 1e-8);
        }
    }
}

TEST_CASE("integrated profile: residual ladder") {
    const Profile prof = Profile::integrated(parse_expr("2+sin(t)"), 0.3, 0.0, 1.0, -1.0, 1.0);
    const SolutionBundle b = build_solutions(prof);

    for (double t : grid(prof, 12)) {
        CHECK(riccati_residual(prof, t) < 1e-8);
        CHECK(ode_residual(b.g1(t), prof, t) < 1e-8);
        CHECK(ode_residual(b.g2(t), prof, t) < 1e-8);
        CHECK(ode_residual(b.g1tilde(t), prof, t) < 1e-8);

        // f2 = -g2 (k + i lambda2)
        const cd rhs = -b.g2(t).v * cd(prof.k_at(t), prof.lambda2_at(t));
        CHECK(std::abs(b.f2(t).v - rhs) < 1e-9);

        // f_i' = c g_i
        CHECK(std::abs(b.f1(t).d1 - b.g1(t).v) < 1e-8);
        CHECK(std::abs(b.f2(t).d1 - b.g2(t).v) < 1e-8);
        CHECK(std::abs(b.f1tilde(t).d1 - b.g1tilde(t).v) < 1e-8);

        // closed form of f1 via the profile integrals only
        const auto pj = prof.at(t);
        const double ek = std::exp(pj.int_k.value());
        const cd f1_ref = ek * cd(std::cos(pj.int_lambda2.value()),
                                  -std::sin(pj.int_lambda2.value()));
        CHECK(std::abs(b.f1(t).v - f1_ref) < 1e-9);

        const auto ind = independence_check(b, t);
        CHECK(ind.u_class == UClass::NonZero);
        CHECK(std::abs(std::abs(ind.fprime) - ind.expected_modulus) <
              1e-7 * (1.0 + ind.expected_modulus));
    }
}

TEST_CASE("solution jets agree with difference quotients") {
    const Profile prof = Profile::integrated(parse_expr("2+sin(t)"), 0.3, 0.0, 1.0, -1.0, 1.0);
    const SolutionBundle b = build_solutions(prof);
    const double h = 1e-3;
    for (double t : {-0.6, 0.0, 0.55}) {
        const auto gm2 = b.g2(t - 2 * h).v, gm1 = b.g2(t - h).v;
        const auto gp1 = b.g2(t + h).v, gp2 = b.g2(t + 2 * h).v;
        const cd fd1 = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h);
        const cd fd2 =
            (-gp2 + 16.0 * gp1 - 30.0 * b.g2(t).v + 16.0 * gm1 - gm2) / (12.0 * h * h);
        CHECK(std::abs(b.g2(t).d1 - fd1) < 1e-6);
        CHECK(std::abs(b.g2(t).d2 - fd2) < 1e-5);
    }
}

TEST_CASE("null conserved quantity: f freezes and ftilde takes over") {
    const Profile prof = Profile::integrated(parse_expr("1"), 0.0, 1.0, -1.0, -2.0, 2.0);
    REQUIRE(std::abs(prof.conserved_u()) < 1e-12);
    const SolutionBundle b = build_solutions(prof);

    const auto ind0 = independence_check(b, 0.0);
    CHECK(ind0.u_class == UClass::Zero);
    CHECK(std::abs(ind0.fprime) < 1e-9);
    CHECK(std::abs(std::abs(ind0.ftilde_prime) - 1.0) < 1e-8); // R'(0) = 1 exactly

    // f(t) stays pinned at k(0) - i lambda2(0) = 1
    for (double t : grid(prof, 9)) {
        CHECK(std::abs(b.f(t).v - cd(1.0, 0.0)) < 1e-7);
        const auto ind = independence_check(b, t);
        CHECK(ind.u_class == UClass::Zero);
        CHECK(std::abs(ind.fprime) < 1e-9);
        CHECK(std::abs(ind.ftilde_prime) > 1e-12);
    }
}

TEST_CASE("quotients are consistent with their numerators") {
    const double s2 = std::sqrt(2.0);
    const Profile prof = Profile::constants(3.0 / s2, s2, -1.0);
    const SolutionBundle b = build_solutions(prof);
    for (double t : {-0.9, 0.0, 1.3}) {
        CHECK(std::abs(b.f(t).v * b.g2(t).v - b.g1(t).v) < 1e-10);
        CHECK(std::abs(b.ftilde(t).v * b.g2(t).v - b.g1tilde(t).v) < 1e-10);
    }
    // Lorentz constants: u = 1, so |f'| = e^{-2 int k} = 1 (k = 0)
    const auto ind = independence_check(b, 0.7);
    CHECK(ind.expected_modulus == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(std::abs(ind.fprime) - 1.0) < 1e-9);
}

TEST_CASE("degenerate constant pairs are rejected") {
    CHECK_THROWS_AS(Profile::constants(2.0, 1.0, -1.0), ProfileCaseError);
}
