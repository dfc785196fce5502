#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "curve_fixture.hpp"
#include "warplag/ambient.hpp"
#include "warplag/errors.hpp"
#include "warplag/expr.hpp"
#include "warplag/factors.hpp"
#include "warplag/geometry.hpp"
#include "warplag/legendre.hpp"
#include "warplag/products.hpp"

using namespace warplag;
using cd = std::complex<double>;

TEST_CASE("two-eigenvalue gauge normalization") {
    auto [a1, a2] = normalize_two(3.0, -2.0);
    CHECK(a1 == doctest::Approx(-3.0));
    CHECK(a2 == doctest::Approx(2.0));
    auto [b1, b2] = normalize_two(-5.0, 0.0);
    CHECK(b1 == doctest::Approx(5.0));
    CHECK(b2 == doctest::Approx(0.0));
    auto [c1, c2] = normalize_two(-0.3, 0.7);
    CHECK(c1 == doctest::Approx(-0.3));
    CHECK(c2 == doctest::Approx(0.7));
}

TEST_CASE("three-eigenvalue gauge normalization carries block dimensions") {
    const ThreeLambdas kept = normalize_three(0.5, 2.0, -1.0, 1, 3);
    CHECK(kept.l1 == doctest::Approx(0.5));
    CHECK(kept.l2 == doctest::Approx(2.0));
    CHECK(kept.l3 == doctest::Approx(-1.0));
    CHECK(kept.n2 == 1);
    CHECK(kept.n3 == 3);

    // the flipped gauge wins here: (-l1, -l2, -l3) reordered has the larger l2
    const ThreeLambdas flipped = normalize_three(0.5, -2.0, 1.0, 4, 2);
    CHECK(flipped.l1 == doctest::Approx(-0.5));
    CHECK(flipped.l2 == doctest::Approx(2.0));
    CHECK(flipped.l3 == doctest::Approx(-1.0));
    CHECK(flipped.n2 == 4);
    CHECK(flipped.n3 == 2);

    // within one gauge the two factor blocks are sorted by eigenvalue
    const ThreeLambdas sorted = normalize_three(0.0, -1.0, 1.0, 2, 5);
    CHECK(sorted.l2 == doctest::Approx(1.0));
    CHECK(sorted.l3 == doctest::Approx(-1.0));
    CHECK(sorted.n2 == 5);
    CHECK(sorted.n3 == 2);
}

TEST_CASE("builtin factor lifts satisfy the C-totally-real conditions") {
    const std::vector<double> circle{0.7};
    CHECK(c_totally_real_residual(*great_circle_factor().chart, circle) < 1e-12);
    const std::vector<double> sphere{0.5, 0.8};
    CHECK(c_totally_real_residual(*totally_geodesic_sphere_factor(2).chart, sphere) < 1e-12);
    const std::vector<double> hyp{0.6};
    CHECK(c_totally_real_residual(*totally_geodesic_hyperbolic_factor(1).chart, hyp) < 1e-12);
    const std::vector<double> torus{0.4, -1.1};
    CHECK(c_totally_real_residual(*flat_torus_factor({0.8, 1.3}).chart, torus) < 1e-12);
    const std::vector<double> pt{};
    CHECK(c_totally_real_residual(*point_factor().chart, pt) < 1e-14);
    // the nonconstant-curvature test curve also qualifies as a factor lift
    const std::vector<double> s{0.9};
    CHECK(c_totally_real_residual(*testfix::wobbly_curve(1.0), s) < 1e-12);
}

TEST_CASE("expectation metadata satisfies the eigenvalue relations") {
    const auto with_point = calabi_product(
        great_circle_factor(), point_factor(),
        {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0, CalabiTarget::CP});
    REQUIRE(with_point->expectation().has_value());
    const auto& e = *with_point->expectation();
    CHECK_FALSE(e.lambda3.has_value());
    CHECK(std::abs(e.lambda1 * e.lambda2 - e.lambda2 * e.lambda2 + 1.0) < 1e-10);

    const auto two = minimal_calabi_two_factor(great_circle_factor(), great_circle_factor());
    REQUIRE(two->expectation().has_value());
    const auto& e2 = *two->expectation();
    REQUIRE(e2.lambda3.has_value());
    CHECK(e2.lambda2 * (*e2.lambda3) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(e2.dim2 == 1);
    CHECK(e2.dim3 == 1);
    // one-dimensional minimal two-factor product: lambda1 = 0, lambdas (1, -1)
    CHECK(e2.lambda1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e2.lambda2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("parameter and coordinate block bookkeeping") {
    const auto chart = calabi_product(
        great_circle_factor(), point_factor(),
        {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0, CalabiTarget::CP});
    CHECK(chart->param_dim() == 2);
    CHECK(chart->ambient_complex_dim() == 3);
    CHECK(chart->factor_params(0) == std::pair<std::size_t, std::size_t>{1, 2});
    CHECK(chart->factor_params(1) == std::pair<std::size_t, std::size_t>{2, 2});
    CHECK(chart->factor_coords(0) == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(chart->factor_coords(1) == std::pair<std::size_t, std::size_t>{2, 3});
    const auto m = chart->warp_moduli(0.9);
    CHECK(m[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(m[1] == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));

    const auto pp = calabi_product(point_factor(), point_factor(),
                                   {std::sqrt(0.5), std::sqrt(0.5), 1.0, CalabiTarget::CP});
    CHECK(pp->param_dim() == 1);
    CHECK(pp->ambient_complex_dim() == 2);
}

TEST_CASE("torus factor block of the cubic form scales by the warp modulus") {
    const std::vector<double> freqs{0.8, 1.3};
    const auto torus = flat_torus_factor(freqs);
    const auto prod = minimal_calabi_cp(flat_torus_factor(freqs), 3);
    const double r1 = std::sqrt(3.0) / 2.0;

    // own-frame cubic form of the bare torus from the closed-form lift data:
    // C^coord_abc = rho^2 sum_k A_ka A_kb A_kc with A_0a = -f_a, A_ja = f_j delta_ja
    const std::vector<double> up{0.4, -1.1};
    const std::size_t d = 2;
    const double rho2 = 1.0 / 3.0;
    std::vector<std::vector<double>> A(3, std::vector<double>(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
        A[0][a] = -freqs[a];
        A[a + 1][a] = freqs[a];
    }
    std::vector<double> gc(d * d, 0.0), Cc(d * d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t k = 0; k < 3; ++k) gc[a * d + b] += rho2 * A[k][a] * A[k][b];
            for (std::size_t c = 0; c < d; ++c)
                for (std::size_t k = 0; k < 3; ++k)
                    Cc[(a * d + b) * d + c] += rho2 * A[k][a] * A[k][b] * A[k][c];
        }
    // Gram-Schmidt in coordinate order, matching the library frame convention
    std::vector<double> B(d * d, 0.0);
    {
        // e_0 = T_0 / |T_0|
        B[0] = 1.0 / std::sqrt(gc[0]);
        // e_1 = (T_1 - <T_1,e_0> e_0) / |...|
        const double proj = gc[1 * d + 0] * B[0]; // <T_1, e_0>
        double w0 = -proj * B[0];
        double w1 = 1.0;
        const double nrm = std::sqrt(w0 * w0 * gc[0] + 2 * w0 * w1 * gc[1] + w1 * w1 * gc[3]);
        B[1 * d + 0] = w0 / nrm;
        B[1 * d + 1] = w1 / nrm;
    }
    std::vector<double> Cf(d * d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c) {
                double s = 0.0;
                for (std::size_t x = 0; x < d; ++x)
                    for (std::size_t y = 0; y < d; ++y)
                        for (std::size_t z = 0; z < d; ++z)
                            s += B[a * d + x] * B[b * d + y] * B[c * d + z] *
                                 Cc[(x * d + y) * d + z];
                Cf[(a * d + b) * d + c] = s;
            }

    const CubicForm own = second_fundamental_form(*torus.chart, up);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c)
                CHECK(own.at(a, b, c) ==
                      doctest::Approx(Cf[(a * d + b) * d + c]).epsilon(1e-9));

    // factor block of the product cubic form: C_total = C^factor / r1
    const std::vector<double> ut{0.6, 0.4, -1.1};
    const CubicForm total = second_fundamental_form(*prod, ut);
    REQUIRE(total.n == 3);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c)
                CHECK(total.at(a + 1, b + 1, c + 1) ==
                      doctest::Approx(own.at(a, b, c) / r1).epsilon(1e-9));

    // warp-direction entries carry the curve eigenvalues
    const double q = 1.0 / std::sqrt(3.0);
    CHECK(total.at(0, 0, 0) == doctest::Approx(-2.0 * q).epsilon(1e-9));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            CHECK(total.at(0, i + 1, j + 1) ==
                  doctest::Approx(i == j ? q : 0.0).epsilon(1e-9));

    CHECK(mean_curvature(*prod, ut).norm < 1e-9);
}

TEST_CASE("Lorentz Calabi products: norms and mean curvature") {
    const double s2 = std::sqrt(2.0);
    const CalabiParams params{s2, 1.0, 1.0, CalabiTarget::CH};

    // warp scalar in the Lorentz slot, spherical circle factor
    const auto case1 = calabi_product(point_factor(Signature::Lorentz),
                                      great_circle_factor(), params);
    CHECK(case1->signature() == Signature::Lorentz);
    CHECK(case1->curvature() == -1.0);
    const HermitianSpace sp1 = case1->space();
    for (const auto& u : std::vector<std::vector<double>>{{0.0, 0.0}, {0.8, -0.4}}) {
        const auto z = case1->eval(u);
        CHECK(herm_inner(z, z, sp1).real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(lagrangian_residual(*case1, u) < 1e-10);
        const CubicForm C = second_fundamental_form(*case1, u);
        CHECK(C.at(0, 0, 0) == doctest::Approx(3.0 / s2).epsilon(1e-9));
        CHECK(C.at(0, 1, 1) == doctest::Approx(s2).epsilon(1e-9));
        CHECK(mean_curvature(*case1, u).norm == doctest::Approx(5.0 / (2.0 * s2)).epsilon(1e-9));
    }

    // Lorentz factor in the first slot, point in the spherical slot
    const auto case2 = calabi_product(totally_geodesic_hyperbolic_factor(1),
                                      point_factor(), params);
    const HermitianSpace sp2 = case2->space();
    for (const auto& u : std::vector<std::vector<double>>{{0.0, 0.7}, {1.1, 0.5}}) {
        const auto z = case2->eval(u);
        CHECK(herm_inner(z, z, sp2).real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(lagrangian_residual(*case2, u) < 1e-10);
        const CubicForm C = second_fundamental_form(*case2, u);
        CHECK(C.at(0, 0, 0) == doctest::Approx(3.0 / s2).epsilon(1e-9));
        CHECK(C.at(0, 1, 1) == doctest::Approx(1.0 / s2).epsilon(1e-9));
        CHECK(mean_curvature(*case2, u).norm == doctest::Approx(s2).epsilon(1e-9));
    }

    const auto e1 = case1->expectation();
    REQUIRE(e1.has_value());
    CHECK(e1->lambda1 == doctest::Approx(3.0 / s2).epsilon(1e-12));
    CHECK(e1->lambda2 == doctest::Approx(s2).epsilon(1e-12));
    const auto e2 = case2->expectation();
    REQUIRE(e2.has_value());
    CHECK(e2->lambda2 == doctest::Approx(1.0 / s2).epsilon(1e-12));
}

TEST_CASE("null-warp chart: quadric, horizontality, and scalar block structure") {
    const Profile prof = Profile::integrated(parse_expr("1"), 0.0, 1.0, -1.0, -2.0, 2.0);
    REQUIRE(std::abs(prof.conserved_u()) < 1e-12);
    const std::vector<cd> off{cd(0.3, -0.2), cd(-0.1, 0.4)};
    const auto chart = null_warp_ch(flat_plane(2, off), prof);

    CHECK(chart->param_dim() == 3);
    CHECK(chart->ambient_complex_dim() == 4);
    CHECK(chart->signature() == Signature::Lorentz);
    const HermitianSpace sp = chart->space();
    for (const auto& u : std::vector<std::vector<double>>{
             {0.0, 0.0, 0.0}, {0.7, 0.2, -0.3}, {-1.2, -0.4, 0.45}, {1.6, 0.1, 0.1}}) {
        CHECK(space_residual(chart->eval(u), sp) < 1e-9);
        CHECK(lagrangian_residual(*chart, u) < 1e-8);
    }

    // at t = 0 the leading coordinate is the potential A0(p) with
    // Re A0 = 1 + |psi3|^2 / 2
    for (const auto& p : std::vector<std::vector<double>>{{0.0, 0.0}, {0.25, -0.4}, {-0.3, 0.1}}) {
        const std::vector<double> u{0.0, p[0], p[1]};
        const auto z = chart->eval(u);
        const double n3 = std::norm(p[0] + off[0]) + std::norm(p[1] + off[1]);
        CHECK(z[0].real() == doctest::Approx(1.0 + 0.5 * n3).epsilon(1e-10));
    }

    // construction guards
    const double s2 = std::sqrt(2.0);
    const Profile nonnull = Profile::constants(3.0 / s2, s2, -1.0);
    CHECK_THROWS_AS(null_warp_ch(flat_plane(2), nonnull), ProfileCaseError);
    CHECK_THROWS_AS(null_warp_ch(great_circle_factor().chart, prof), ParameterError);
}

TEST_CASE("construction guards of the product builders") {
    const auto circle = great_circle_factor();
    CHECK_THROWS_AS(calabi_product(circle, point_factor(), {0.8, 0.5, 1.0, CalabiTarget::CP}),
                    ParameterError);
    CHECK_THROWS_AS(calabi_product(circle, point_factor(), {1.0, 1.0, 1.0, CalabiTarget::CH}),
                    ParameterError);
    // curve must be one-parameter into C^2
    CHECK_THROWS_AS(warped_product(circle, point_factor(), flat_plane(2)), ConstructionError);
    // Lorentz curve needs a Lorentz first factor
    const auto lcurve = calabi_curve_ch(std::sqrt(2.0), 1.0, 1.0);
    CHECK_THROWS_AS(warped_product(circle, point_factor(), lcurve), ConstructionError);
    // a perturbed lift fails the factor gate
    const auto broken = curve_factor(phase_perturbation(great_circle_factor().chart, 0.05));
    CHECK_THROWS_AS(warped_product(broken, point_factor(), calabi_curve_cp(std::sqrt(0.5),
                                                                           std::sqrt(0.5), 1.0)),
                    ConstructionError);
    // minimal builders reject non-minimal factors and dimension mismatches
    CHECK_THROWS_AS(minimal_calabi_cp(great_circle_factor(), 3), ParameterError);
    CHECK_THROWS_AS(minimal_calabi_cp(curve_factor(testfix::wobbly_curve(1.0)), 2),
                    ParameterError);
}

TEST_CASE("slightly detuned radii produce a visible mean curvature") {
    const double r1 = std::sqrt(0.7), r2 = std::sqrt(0.3);
    const auto chart = calabi_product(great_circle_factor(), point_factor(),
                                      {r1, r2, 1.0, CalabiTarget::CP});
    const std::vector<double> u{0.3, 0.5};
    CHECK(mean_curvature(*chart, u).norm > 1e-3);
}

TEST_CASE("phase perturbation marks its kind and breaks horizontality") {
    const auto base = calabi_product(great_circle_factor(), point_factor(),
                                     {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0,
                                      CalabiTarget::CP});
    const auto broken = phase_perturbation(base, 0.1);
    CHECK(broken->kind() == "phase_perturbation");
    CHECK(broken->param_dim() == base->param_dim());
    const std::vector<double> u{0.4, 0.2};
    CHECK(lagrangian_residual(*broken, u) >= 0.05);
    CHECK_THROWS_AS(phase_perturbation(nullptr, 0.1), ConstructionError);
}
