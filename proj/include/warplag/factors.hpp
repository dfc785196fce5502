#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "warplag/chart.hpp"

namespace warplag {

/// A factor of a warped product: a horizontal (C-totally-real) lift of a
/// Lagrangian immersion into the sphere S^{2n+1} or the anti-de-Sitter
/// quadric H_1^{2n+1}, with n = chart->param_dim().
struct FactorLift {
    ChartPtr chart;
    std::size_t dim() const { return chart->param_dim(); }
};

/// Zero-dimensional factor: the constant point [1] in C (or C_1).
FactorLift point_factor(Signature sig = Signature::Definite);

/// Unit-speed great circle (cos u, sin u) in S^3: the totally geodesic
/// one-dimensional factor.
FactorLift great_circle_factor();

/// Polar chart of the totally geodesic real S^dim inside S^{2 dim + 1}.
FactorLift totally_geodesic_sphere_factor(std::size_t dim);

/// Polar chart of the totally geodesic real hyperbolic H^dim inside
/// H_1^{2 dim + 1} (Lorentz factors of CH products).
FactorLift totally_geodesic_hyperbolic_factor(std::size_t dim);

/// Equal-radius torus lift (rho e^{i theta_0(u)}, ..., rho e^{i theta_d(u)})
/// with theta_j = a_j u_j for j >= 1 and theta_0 = -sum a_j u_j, which makes
/// the lift horizontal.  Minimal but not totally geodesic.
FactorLift flat_torus_factor(const std::vector<double>& frequencies);

/// Wrap a one-parameter Legendre curve chart as a factor.
FactorLift curve_factor(ChartPtr legendre_curve);

/// Flat Lagrangian plane u -> (u_1 + z_1, ..., u_d + z_d) in flat C^d; the
/// psi_3 block of null-warp charts.  Complex offsets shift the plane without
/// breaking the Lagrangian condition.
ChartPtr flat_plane(std::size_t dim, std::vector<std::complex<double>> offset = {});

} // namespace warplag
