#include "warplag/odecheck.hpp"

#include <cmath>
#include <string>

#include "warplag/errors.hpp"
#include "warplag/jet.hpp"

namespace warplag {

namespace {

/// d/dt as a jet operation: shifts each derivative order down by one.  The
/// third order of the result is not available and is left zero; SolutionValue
/// only consumes orders 0..2.
Jet shift_down(const Jet& j) {
    Jet r(1);
    r.value() = j.d1(0);
    r.d1(0) = j.d2(0, 0);
    r.d2(0, 0) = j.d3(0, 0, 0);
    return r;
}

CJet deriv(const CJet& z) { return {shift_down(z.re), shift_down(z.im)}; }

CJet quotient(const CJet& num, const CJet& den) {
    const Jet mod2 = den.re * den.re + den.im * den.im;
    return num * den.conj() * CJet::from_real(recip(mod2));
}

SolutionValue sample(const CJet& z) {
    return {{z.re.value(), z.im.value()},
            {z.re.d1(0), z.im.d1(0)},
            {z.re.d2(0, 0), z.im.d2(0, 0)}};
}

CJet g1_jet(const Profile::Jets& p) {
    return CJet(p.k, -p.lambda2) * cexp(CJet(p.int_k, -p.int_lambda2));
}

CJet g2_jet(const Profile::Jets& p) {
    return cexp(CJet(p.int_k, p.int_lambda2 - p.int_lambda1));
}

CJet g1tilde_jet(const Profile::Jets& p) { return g2_jet(p) * p.ratio_integral; }

} // namespace

double riccati_residual(const Profile& prof, double t) {
    const auto p = prof.at(t);
    const double l1 = p.lambda1.value();
    const double l2 = p.lambda2.value();
    if (std::abs(l1 - 2.0 * l2) < 1e-6)
        throw SingularEvaluation("profile evaluated on the excluded locus lambda1 = 2 lambda2");
    const double k = p.k.value();
    const double kprime = p.k.d1(0);
    return std::abs(kprime + k * k + l1 * l2 - l2 * l2 + prof.c());
}

SolutionValue SolutionBundle::g1(double t) const { return sample(g1_jet(prof_.at(t))); }

SolutionValue SolutionBundle::g2(double t) const { return sample(g2_jet(prof_.at(t))); }

SolutionValue SolutionBundle::g1tilde(double t) const { return sample(g1tilde_jet(prof_.at(t))); }

// f1, f2, f1tilde are assembled from their defining relation f = -g' - i l1 g
// rather than from the closed forms; the closed forms (f1 = c e^{int(k - i l2)},
// f2 = -g2 (k + i l2)) then stay available as independent cross-checks.
SolutionValue SolutionBundle::f1(double t) const {
    const auto p = prof_.at(t);
    const CJet g = g1_jet(p);
    return sample(-deriv(g) - g.times_i() * CJet::from_real(p.lambda1));
}

SolutionValue SolutionBundle::f2(double t) const {
    const auto p = prof_.at(t);
    const CJet g = g2_jet(p);
    return sample(-deriv(g) - g.times_i() * CJet::from_real(p.lambda1));
}

SolutionValue SolutionBundle::f1tilde(double t) const {
    const auto p = prof_.at(t);
    const CJet gt = g1tilde_jet(p);
    return sample(-deriv(gt) - gt.times_i() * CJet::from_real(p.lambda1));
}

SolutionValue SolutionBundle::f(double t) const {
    const auto p = prof_.at(t);
    return sample(quotient(g1_jet(p), g2_jet(p)));
}

SolutionValue SolutionBundle::ftilde(double t) const {
    const auto p = prof_.at(t);
    return sample(quotient(g1tilde_jet(p), g2_jet(p)));
}

SolutionBundle build_solutions(const Profile& prof) { return SolutionBundle(prof); }

double ode_residual(const SolutionValue& g, const Profile& prof, double t) {
    const auto p = prof.at(t);
    const std::complex<double> i(0.0, 1.0);
    return std::abs(g.d2 + i * p.lambda1.value() * g.d1 +
                    (i * p.lambda1.d1(0) + prof.c()) * g.v);
}

IndependenceResult independence_check(const SolutionBundle& bundle, double t) {
    const Profile& prof = bundle.profile();
    const auto g2v = bundle.g2(t);
    if (std::abs(g2v.v) < 1e-12)
        throw SingularEvaluation("g2 vanishes; the solution ratio is undefined at t = " +
                                 std::to_string(t));

    IndependenceResult result;
    result.fprime = bundle.f(t).d1;
    result.ftilde_prime = bundle.ftilde(t).d1;
    const auto p = prof.at(t);
    result.expected_modulus = std::abs(prof.u_at(t)) * std::exp(-2.0 * p.int_k.value());

    if (std::abs(prof.conserved_u()) <= 1e-10) {
        result.u_class = UClass::Zero;
        if (std::abs(result.fprime) > 1e-9)
            throw ContractViolation("u = 0 but the solution ratio is not constant (|f'| = " +
                                    std::to_string(std::abs(result.fprime)) + ")");
        if (std::abs(result.ftilde_prime) < 1e-12)
            throw ContractViolation("u = 0 but the second ratio is degenerate at t = " +
                                    std::to_string(t));
    } else {
        result.u_class = UClass::NonZero;
        const double defect = std::abs(std::abs(result.fprime) - result.expected_modulus);
        if (defect > 1e-7 * (1.0 + result.expected_modulus))
            throw ContractViolation("|f'| does not match |u| e^{-2 int k} (defect " +
                                    std::to_string(defect) + ")");
    }
    return result;
}

} // namespace warplag
