#pragma once

#include <array>
#include <cstddef>
#include <memory>

#include "warplag/expr.hpp"
#include "warplag/jet.hpp"

namespace warplag {

/// Curvature profile (lambda1, lambda2) of a Legendre curve together with the
/// auxiliary quantity k = lambda2' / (lambda1 - 2 lambda2), which satisfies
/// the Riccati equation k' + k^2 + lambda1 lambda2 - lambda2^2 + c = 0, and
/// the running integrals needed by the curve charts.
///
/// The quantity u = e^{2 int k} (c + k^2 + lambda2^2) is a first integral;
/// its sign at t = 0 selects the chart case downstream.
///
/// Construction either takes admissible constants (k = 0) in closed form, or
/// integrates the system for a user-supplied lambda1(t).  The working
/// interval is clipped where |lambda1 - 2 lambda2| < 1e-6.  After
/// construction, evaluation is pure: every call re-integrates from 0, so
/// distinct t may be evaluated concurrently.
class Profile {
public:
    /// Constant pair; requires |lambda1 lambda2 - lambda2^2 + c| <= 1e-6 and
    /// |lambda1 - 2 lambda2| >= 1e-6.
    static Profile constants(double lambda1, double lambda2, double c);

    /// Integrated profile with initial data lambda2(0), k(0).
    static Profile integrated(ExprPtr lambda1, double lambda2_0, double k0, double c,
                              double t_min, double t_max, double step_tol = 1e-10);

    double c() const { return c_; }
    /// First integral u evaluated at t = 0.
    double conserved_u() const { return u0_; }
    std::array<double, 2> tspan() const { return span_; }
    bool is_constant() const { return constant_; }

    /// One-direction jets (in t) of the profile data, exact through order 3.
    struct Jets {
        Jet lambda1, lambda2, k;
        Jet int_lambda1, int_lambda2, int_k; // int_0^t of each
        /// int_0^t (k + i lambda2) e^{-2 int_0^s k} ds  (null-warp chart integral)
        CJet warp_integral;
        /// int_0^t e^{int_0^s ((lambda1 - 2 lambda2) i - 2 k)} ds
        CJet ratio_integral;
    };
    Jets at(double t) const;

    double lambda1_at(double t) const;
    double lambda2_at(double t) const;
    double k_at(double t) const;
    /// u(t) = e^{2 int k} (c + k^2 + lambda2^2); constant along the profile.
    double u_at(double t) const;

private:
    Profile() = default;
    std::array<double, 9> state_at(double t) const;

    bool constant_ = true;
    double c_ = 1.0;
    double u0_ = 0.0;
    double l1c_ = 0.0, l2c_ = 0.0; // constants case
    ExprPtr l1_;                   // integrated case
    double l20_ = 0.0, k0_ = 0.0;
    double step_tol_ = 1e-10;
    std::array<double, 2> span_{-3.0, 3.0};
};

} // namespace warplag
