#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "warplag/ambient.hpp"
#include "warplag/errors.hpp"
#include "warplag/factors.hpp"
#include "warplag/geometry.hpp"
#include "warplag/products.hpp"

using namespace warplag;

namespace {

WarpedPtr cp2_minimal_calabi() {
    const CalabiParams params{std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 1.0,
                              CalabiTarget::CP};
    return calabi_product(great_circle_factor(), point_factor(), params);
}

} // namespace

TEST_CASE("frame data: orthonormality, triangular change of basis, Christoffel symmetry") {
    const auto chart = cp2_minimal_calabi();
    const std::vector<double> u{0.4, -0.8};
    const FrameData fr = frame_at(*chart, u);
    const HermitianSpace sp = chart->space();

    REQUIRE(fr.n == 2);
    // orthonormal frame under the induced (real) inner product
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const double want = a == b ? 1.0 : 0.0;
            CHECK(real_inner(fr.tangent_frame[a], fr.tangent_frame[b], sp) ==
                  doctest::Approx(want).epsilon(1e-12));
        }
    // E_a = sum_d B(a,d) T_d with B lower triangular
    CHECK(fr.B(0, 1) == 0.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t k = 0; k < fr.point.size(); ++k) {
            std::complex<double> rebuilt = 0.0;
            for (std::size_t d = 0; d < 2; ++d) rebuilt += fr.B(a, d) * fr.coord_tangents[d][k];
            CHECK(std::abs(rebuilt - fr.tangent_frame[a][k]) < 1e-12);
        }
    // metric symmetry and block diagonality (t block vs factor block)
    CHECK(fr.g(0, 1) == doctest::Approx(fr.g(1, 0)).epsilon(1e-15));
    CHECK(std::abs(fr.g(0, 1)) < 1e-12);
    CHECK(fr.gram_det > 0.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                CHECK(fr.gamma(a, b, c) == doctest::Approx(fr.gamma(b, a, c)).epsilon(1e-10));
}

TEST_CASE("cubic form of the minimal Calabi chart matches the curve eigenvalues") {
    const auto chart = cp2_minimal_calabi();
    const double s2i = 1.0 / std::sqrt(2.0);
    for (const auto& u : std::vector<std::vector<double>>{{0.0, 0.0}, {0.7, -1.1}, {-1.3, 2.0}}) {
        CHECK(lagrangian_residual(*chart, u) < 1e-10);
        const CubicForm C = second_fundamental_form(*chart, u);
        REQUIRE(C.n == 2);
        CHECK(C.sym_dev < 1e-9);
        CHECK(C.tangent_crosscheck < 1e-8);
        CHECK(C.fiber_dev < 1e-9);
        CHECK(C.at(0, 0, 0) == doctest::Approx(-s2i).epsilon(1e-9));
        CHECK(C.at(0, 1, 1) == doctest::Approx(s2i).epsilon(1e-9));
        CHECK(C.at(1, 1, 1) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::abs(C.at(0, 0, 1)) < 1e-9);

        const MeanCurvature H = mean_curvature(*chart, u);
        CHECK(H.norm < 1e-9); // lambda1 + lambda2 = 0: minimal radii
    }
}

TEST_CASE("expectation metadata agrees with the measured cubic form") {
    const auto chart = cp2_minimal_calabi();
    REQUIRE(chart->expectation().has_value());
    const auto& e = *chart->expectation();
    const std::vector<double> u{0.5, 0.3};
    const CubicForm C = second_fundamental_form(*chart, u);
    CHECK(C.at(0, 0, 0) == doctest::Approx(e.lambda1).epsilon(1e-9));
    CHECK(C.at(0, 1, 1) == doctest::Approx(e.lambda2).epsilon(1e-9));
}

TEST_CASE("non-minimal radii leave a mean curvature of known size") {
    const double r = std::sqrt(0.5);
    const CalabiParams params{r, r, 1.0, CalabiTarget::CP};
    const auto chart = calabi_product(great_circle_factor(), point_factor(), params);
    const std::vector<double> u{0.2, 0.6};
    // lambda1 = 0, lambda2 = 1: |H| = |lambda1 + lambda2| / 2
    CHECK(mean_curvature(*chart, u).norm == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("totally geodesic chart: vanishing cubic form, Gauss and Codazzi hold") {
    const auto tg = totally_geodesic_sphere_factor(2).chart;
    for (const auto& u : std::vector<std::vector<double>>{{0.5, 0.7}, {1.0, 0.4}, {0.8, 1.1}}) {
        CHECK(lagrangian_residual(*tg, u) < 1e-10);
        const CubicForm C = second_fundamental_form(*tg, u);
        double cmax = 0.0;
        for (double v : C.C) cmax = std::max(cmax, std::abs(v));
        CHECK(cmax < 1e-9);
        CHECK(gauss_residual(*tg, u) < 1e-6);
        CHECK(codazzi_residual(*tg, u) < 1e-7);
        CHECK(nabla_h(*tg, u).max_abs() < 1e-7);
    }
}

TEST_CASE("Gauss and Codazzi hold on the curved Calabi chart") {
    const auto chart = cp2_minimal_calabi();
    for (const auto& u : std::vector<std::vector<double>>{{0.3, -0.5}, {1.2, 0.9}}) {
        CHECK(gauss_residual(*chart, u) < 1e-6);
        CHECK(codazzi_residual(*chart, u) < 1e-7);
        // Calabi products of totally geodesic factors have parallel h
        CHECK(nabla_h(*chart, u).max_abs() < 1e-7);
    }
}

TEST_CASE("phase perturbation is detected by the Lagrangian residual") {
    const auto base = cp2_minimal_calabi();
    const auto broken = phase_perturbation(base, 0.1);
    const std::vector<double> u{0.4, 0.2};
    CHECK(lagrangian_residual(*base, u) < 1e-10);
    CHECK(lagrangian_residual(*broken, u) >= 0.05);
    CHECK_THROWS_AS(second_fundamental_form(*broken, u), NotLagrangian);
}
