#include "warplag/profile.hpp"

#include <cmath>

#include "warplag/errors.hpp"
#include "warplag/integrate.hpp"

namespace warplag {

namespace {

constexpr double kAdmissibilityTol = 1e-6;
constexpr double kDistinctFloor = 1e-6;

// State layout: lambda2, k, int lambda1, int lambda2, int k,
//               Re/Im warp integral, Re/Im ratio integral.
enum { iL2 = 0, iK = 1, iIL1 = 2, iIL2 = 3, iIK = 4, iJr = 5, iJi = 6, iTr = 7, iTi = 8 };

} // namespace

Profile Profile::constants(double lambda1, double lambda2, double c) {
    const double riccati = lambda1 * lambda2 - lambda2 * lambda2 + c;
    if (std::abs(riccati) > kAdmissibilityTol)
        throw ProfileCaseError("inadmissible constant profile: lambda1 lambda2 - lambda2^2 + c = " +
                               std::to_string(riccati));
    if (std::abs(lambda1 - 2.0 * lambda2) < kDistinctFloor)
        throw ProfileCaseError("constant profile requires lambda1 != 2 lambda2");
    Profile p;
    p.constant_ = true;
    p.c_ = c;
    p.l1c_ = lambda1;
    p.l2c_ = lambda2;
    p.u0_ = c + lambda2 * lambda2;
    p.span_ = {-8.0, 8.0};
    return p;
}

Profile Profile::integrated(ExprPtr lambda1, double lambda2_0, double k0, double c, double t_min,
                            double t_max, double step_tol) {
    if (!lambda1) throw ParameterError("profile needs a lambda1 expression");
    if (t_min > 0.0 || t_max < 0.0 || t_min == t_max)
        throw ParameterError("profile interval must contain t = 0");
    if (std::abs(lambda1->eval(0.0) - 2.0 * lambda2_0) < kDistinctFloor)
        throw ProfileCaseError("profile requires lambda1 != 2 lambda2 at t = 0");

    Profile p;
    p.constant_ = false;
    p.c_ = c;
    p.l1_ = std::move(lambda1);
    p.l20_ = lambda2_0;
    p.k0_ = k0;
    p.step_tol_ = step_tol;
    p.u0_ = c + k0 * k0 + lambda2_0 * lambda2_0;

    // Clip the working interval where the denominator lambda1 - 2 lambda2
    // degenerates: sweep outward from 0 in both directions.
    const OdeRhs rhs = [&p](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double l1 = p.l1_->eval(t);
        const double l2 = y[iL2], k = y[iK];
        const double em = std::exp(-2.0 * y[iIK]);
        dy.resize(9);
        dy[iL2] = (l1 - 2.0 * l2) * k;
        dy[iK] = -k * k - l1 * l2 + l2 * l2 - p.c_;
        dy[iIL1] = l1;
        dy[iIL2] = l2;
        dy[iIK] = k;
        dy[iJr] = k * em;
        dy[iJi] = l2 * em;
        const double phase = y[iIL1] - 2.0 * y[iIL2];
        dy[iTr] = em * std::cos(phase);
        dy[iTi] = em * std::sin(phase);
    };
    // Stop the sweep where the excluded locus lambda1 = 2 lambda2 is reached
    // or the state escapes (the Riccati flow can blow up in finite time).
    const auto admissible = [&p](double t, const std::vector<double>& y) {
        if (std::abs(y[iL2]) > 1e3 || std::abs(y[iK]) > 1e3 || std::abs(y[iIK]) > 1e2)
            return false;
        return std::abs(p.l1_->eval(t) - 2.0 * y[iL2]) >= kDistinctFloor;
    };
    std::vector<double> y0(9, 0.0);
    y0[iL2] = lambda2_0;
    y0[iK] = k0;
    double hi = t_max;
    integrate_dp45(rhs, y0, 0.0, hi, step_tol, admissible);
    double lo = t_min;
    integrate_dp45(rhs, y0, 0.0, lo, step_tol, admissible);
    p.span_ = {lo, hi};
    return p;
}

std::array<double, 9> Profile::state_at(double t) const {
    if (t < span_[0] || t > span_[1])
        throw OutOfDomain("profile evaluated outside its working interval");
    std::array<double, 9> out{};
    if (constant_) {
        const double P = l1c_ - 2.0 * l2c_;
        out[iL2] = l2c_;
        out[iK] = 0.0;
        out[iIL1] = l1c_ * t;
        out[iIL2] = l2c_ * t;
        out[iIK] = 0.0;
        out[iJr] = 0.0;
        out[iJi] = l2c_ * t;
        out[iTr] = std::sin(P * t) / P;
        out[iTi] = (1.0 - std::cos(P * t)) / P;
        return out;
    }
    const OdeRhs rhs = [this](double s, const std::vector<double>& y, std::vector<double>& dy) {
        const double l1 = l1_->eval(s);
        const double l2 = y[iL2], k = y[iK];
        const double em = std::exp(-2.0 * y[iIK]);
        dy.resize(9);
        dy[iL2] = (l1 - 2.0 * l2) * k;
        dy[iK] = -k * k - l1 * l2 + l2 * l2 - c_;
        dy[iIL1] = l1;
        dy[iIL2] = l2;
        dy[iIK] = k;
        dy[iJr] = k * em;
        dy[iJi] = l2 * em;
        const double phase = y[iIL1] - 2.0 * y[iIL2];
        dy[iTr] = em * std::cos(phase);
        dy[iTi] = em * std::sin(phase);
    };
    std::vector<double> y0(9, 0.0);
    y0[iL2] = l20_;
    y0[iK] = k0_;
    const auto y = integrate_dp45(rhs, std::move(y0), 0.0, t, step_tol_);
    for (std::size_t i = 0; i < 9; ++i) out[i] = y[i];
    return out;
}

Profile::Jets Profile::at(double t) const {
    const auto y = state_at(t);
    const Jet tj = Jet::variable(t, 1, 0);
    const Jet l1 = constant_ ? Jet::constant(l1c_, 1) : l1_->eval_jet(tj);

    // Rebuild the jets of the state from the differential system: seed with
    // the integrated values, then substitute the right-hand side three times;
    // after pass k the jets are exact through order k.
    Jet l2 = Jet::constant(y[iL2], 1);
    Jet k = Jet::constant(y[iK], 1);
    Jet il1 = Jet::constant(y[iIL1], 1);
    Jet il2 = Jet::constant(y[iIL2], 1);
    Jet ik = Jet::constant(y[iIK], 1);
    CJet J{Jet::constant(y[iJr], 1), Jet::constant(y[iJi], 1)};
    CJet T{Jet::constant(y[iTr], 1), Jet::constant(y[iTi], 1)};

    const auto lift = [](Jet& target, const Jet& deriv) {
        target.d1(0) = deriv.value();
        target.d2(0, 0) = deriv.d1(0);
        target.d3(0, 0, 0) = deriv.d2(0, 0);
    };
    for (int pass = 0; pass < 3; ++pass) {
        const Jet dl2 = (l1 - 2.0 * l2) * k;
        const Jet dk = -(k * k) - l1 * l2 + l2 * l2 - c_;
        const Jet em = exp(ik * -2.0);
        const CJet dJ = CJet{k, l2} * CJet::from_real(em);
        const CJet dT = cexp(CJet{ik * -2.0, il1 - 2.0 * il2});
        lift(l2, dl2);
        lift(k, dk);
        lift(il1, l1);
        lift(il2, l2);
        lift(ik, k);
        lift(J.re, dJ.re);
        lift(J.im, dJ.im);
        lift(T.re, dT.re);
        lift(T.im, dT.im);
    }
    return Jets{l1, l2, k, il1, il2, ik, J, T};
}

double Profile::lambda1_at(double t) const {
    if (t < span_[0] || t > span_[1])
        throw OutOfDomain("profile evaluated outside its working interval");
    return constant_ ? l1c_ : l1_->eval(t);
}

double Profile::lambda2_at(double t) const { return state_at(t)[iL2]; }

double Profile::k_at(double t) const { return state_at(t)[iK]; }

double Profile::u_at(double t) const {
    const auto y = state_at(t);
    return std::exp(2.0 * y[iIK]) * (c_ + y[iK] * y[iK] + y[iL2] * y[iL2]);
}

} // namespace warplag
