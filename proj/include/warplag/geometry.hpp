#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "warplag/chart.hpp"

namespace warplag {

/// Pointwise frame data of a chart: the coordinate tangents T_a, an
/// orthonormal tangent frame E_a obtained by Gram-Schmidt in coordinate order
/// (the warp parameter t comes first on product charts, so frames stay
/// block-aligned), the induced metric and its Christoffel symbols.
struct FrameData {
    std::size_t n = 0;
    CVector point;
    std::vector<CVector> coord_tangents;
    std::vector<CVector> tangent_frame;
    std::vector<double> metric;      // g_ab, row-major
    std::vector<double> frame_coeff; // B with E_a = sum_d B(a,d) T_d (lower triangular)
    std::vector<double> christoffel; // Gamma^c_ab at [(a n + b) n + c]
    double gram_det = 0.0;

    double g(std::size_t a, std::size_t b) const { return metric[a * n + b]; }
    double B(std::size_t a, std::size_t d) const { return frame_coeff[a * n + d]; }
    double gamma(std::size_t a, std::size_t b, std::size_t c) const {
        return christoffel[(a * n + b) * n + c];
    }
};

FrameData frame_at(const ImmersionChart& chart, std::span<const double> u);

/// Defect of the Lagrangian/horizontality conditions at u: the largest of
/// |<J E_a, E_b>| and |<E_a, J psi>| over the orthonormal frame.
double lagrangian_residual(const ImmersionChart& chart, std::span<const double> u);

/// Frame components C_abc = <h(E_a, E_b), J E_c> of the second fundamental
/// form of a Lagrangian chart (the cubic form).  Fully symmetric for genuine
/// Lagrangian immersions; the deviation actually measured is recorded in
/// sym_dev rather than symmetrized away.
struct CubicForm {
    std::size_t n = 0;
    std::vector<double> C; // n^3, index [(a n + b) n + c]
    double sym_dev = 0.0;
    /// Cross-check: tangential part of psi_ab must reproduce Gamma^c_ab.
    double tangent_crosscheck = 0.0;
    /// J psi component of h (zero exactly when the chart is horizontal).
    double fiber_dev = 0.0;

    double at(std::size_t a, std::size_t b, std::size_t c) const {
        return C[(a * n + b) * n + c];
    }
};

/// Throws NotLagrangian when lagrangian_residual exceeds 1e-8.
CubicForm second_fundamental_form(const ImmersionChart& chart, std::span<const double> u);

struct MeanCurvature {
    CVector vector; // ambient components of H = (1/n) trace h
    double norm;
};
MeanCurvature mean_curvature(const ImmersionChart& chart, std::span<const double> u);

/// Frame components D_{wabc} = <(nabla h)(E_w, E_a, E_b), J E_c> of the
/// covariant derivative of h, computed as the covariant derivative of the
/// coordinate cubic form (no symmetrization is applied).
struct NablaH {
    std::size_t n = 0;
    std::vector<double> D; // n^4

    double at(std::size_t w, std::size_t a, std::size_t b, std::size_t c) const {
        return D[((w * n + a) * n + b) * n + c];
    }
    double max_abs() const;
};
NablaH nabla_h(const ImmersionChart& chart, std::span<const double> u);

/// Max-norm defect of the Gauss equation: intrinsic curvature from the metric
/// two-jet versus the constant-curvature term plus the quadratic h term.
double gauss_residual(const ImmersionChart& chart, std::span<const double> u);

/// Max-norm defect of the Codazzi symmetries of nabla h: derivative-slot
/// exchange plus last-slot exchange.
double codazzi_residual(const ImmersionChart& chart, std::span<const double> u);

} // namespace warplag
