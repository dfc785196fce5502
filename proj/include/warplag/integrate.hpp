#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "warplag/errors.hpp"

namespace warplag {

/// Right-hand side of an autonomous-in-form system y' = f(t, y).
using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

/// Integrate y' = f(t,y) from t0 to t1 (either direction) with the
/// Dormand-Prince 5(4) embedded pair and proportional step control at the
/// given per-step tolerance.  The monitor sees every accepted step and may
/// stop the integration early (returns false); the time reached is written
/// back to t1 in that case.  A null monitor is allowed.
std::vector<double> integrate_dp45(const OdeRhs& f, std::vector<double> y0, double t0, double& t1,
                                   double tol,
                                   const std::function<bool(double, const std::vector<double>&)>&
                                       monitor);

/// Convenience overload without early stopping.
std::vector<double> integrate_dp45(const OdeRhs& f, std::vector<double> y0, double t0, double t1,
                                   double tol);

/// Adaptive Simpson quadrature of a smooth scalar integrand.
double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol);

} // namespace warplag
