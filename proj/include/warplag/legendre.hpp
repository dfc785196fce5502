#pragma once

#include <cstddef>
#include <utility>

#include "warplag/chart.hpp"
#include "warplag/profile.hpp"

namespace warplag {

/// Which sign of the conserved quantity u a Lorentz profile curve realizes.
enum class UCase { Positive, Negative };

/// Horizontal-lift curve of a Calabi product in the sphere S^3:
///   (r1 e^{i (r2/r1) a t}, r2 e^{-i (r1/r2) a t}),  r1^2 + r2^2 = 1.
/// The exponents make the curve Legendre (horizontal) and |gamma'| = a.
ChartPtr calabi_curve_cp(double r1, double r2, double a);

/// Lorentz counterpart in the anti-de-Sitter quadric H_1^3:
///   (r1 e^{i (r2/r1) a t}, r2 e^{i (r1/r2) a t}),  -r1^2 + r2^2 = -1.
ChartPtr calabi_curve_ch(double r1, double r2, double a);

/// Legendre curve synthesized from a profile with c = +1; requires u > 0.
/// Components: (factor slot, warp scalar) in that order.
ChartPtr profile_curve_cp(const Profile& profile);

/// Lorentz profile curve, c = -1.  For u > 0 the warp scalar sits in the
/// Lorentz slot and the factor lift is spherical; for u < 0 the placement is
/// swapped.  |u| <= 1e-10 is the null case and must go through null_warp_ch.
ChartPtr profile_curve_ch(const Profile& profile, UCase ucase);

/// |<gamma'(t), J gamma(t)>| for a one-parameter chart: the Legendre /
/// horizontality defect.
double horizontality_residual(const ImmersionChart& curve, double t);

/// Mean and maximum absolute deviation of u(t) over an equispaced grid.
std::pair<double, double> u_constancy(const Profile& profile, std::size_t grid_points);

} // namespace warplag
