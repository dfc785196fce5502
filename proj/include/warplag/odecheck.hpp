#pragma once

#include <complex>

#include "warplag/profile.hpp"

namespace warplag {

/// A complex function value with its first two t-derivatives.
struct SolutionValue {
    std::complex<double> v, d1, d2;
};

enum class UClass { Zero, NonZero };

struct IndependenceResult {
    std::complex<double> fprime;
    std::complex<double> ftilde_prime;
    /// |u(t)| e^{-2 int k}: what |f'| must equal when u != 0.
    double expected_modulus;
    UClass u_class;
};

/// |k' + k^2 + lambda1 lambda2 - lambda2^2 + c| at t; the admissibility
/// residual of the profile pair.  Throws SingularEvaluation within 1e-6 of
/// the excluded locus lambda1 = 2 lambda2.
double riccati_residual(const Profile& prof, double t);

/// The solution pairs of g'' + i lambda1 g' + (i lambda1' + c) g = 0
/// attached to a profile:
///   g1 = (k - i lambda2) e^{int (k - i lambda2)},
///   g2 = e^{int ((lambda2 - lambda1) i + k)},
///   g1tilde = g2 int e^{int ((lambda1 - 2 lambda2) i - 2k)},
/// the antiderivative functions f1 = c e^{int (k - i lambda2)},
/// f2 = -g2 (k + i lambda2), f1tilde = -g1tilde' - i lambda1 g1tilde,
/// and the ratios f = g1/g2, ftilde = g1tilde/g2 (computed as quotients).
/// (g1, g2) are independent solutions when u != 0, (g1tilde, g2) when u = 0.
class SolutionBundle {
public:
    explicit SolutionBundle(Profile prof) : prof_(std::move(prof)) {}

    const Profile& profile() const { return prof_; }

    SolutionValue g1(double t) const;
    SolutionValue g2(double t) const;
    SolutionValue g1tilde(double t) const;
    SolutionValue f1(double t) const;
    SolutionValue f2(double t) const;
    SolutionValue f1tilde(double t) const;
    SolutionValue f(double t) const;
    SolutionValue ftilde(double t) const;

private:
    Profile prof_;
};

SolutionBundle build_solutions(const Profile& prof);

/// |g'' + i lambda1 g' + (i lambda1' + c) g| for a sampled solution value.
double ode_residual(const SolutionValue& g, const Profile& prof, double t);

/// The independence criterion: for u != 0, |f'| must equal |u| e^{-2 int k}
/// (nonzero); for u = 0, f is constant (|f'| <= 1e-9) and ftilde takes over
/// (|ftilde'| != 0).  Throws SingularEvaluation when |g2(t)| < 1e-12 and
/// ContractViolation when the defining identities fail numerically.
IndependenceResult independence_check(const SolutionBundle& bundle, double t);

} // namespace warplag
