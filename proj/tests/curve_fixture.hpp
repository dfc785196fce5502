#pragma once

// Closed-form Legendre curve in S^3 with nonconstant curvature, used where
// the tests need a factor whose second fundamental form is not parallel.
// gamma(s) = (cos s e^{i b1(s)}, sin s e^{i b2(s)}) with
//   b1 = mu (s/2 - sin(2s)/4),  b2 = -mu (s/2 + sin(2s)/4),
// so b1' = mu sin^2 s, b2' = -mu cos^2 s and the contact condition
// b1' cos^2 s + b2' sin^2 s = 0 holds identically.

#include <memory>
#include <vector>

#include "warplag/chart.hpp"
#include "warplag/jet.hpp"

namespace testfix {

class WobblyLegendreCurve final : public warplag::ImmersionChart {
public:
    explicit WobblyLegendreCurve(double mu = 1.0)
        : ImmersionChart(warplag::Box{{{0.3, 1.2}}}, 2, warplag::Signature::Definite),
          mu_(mu) {}

    std::string kind() const override { return "test_legendre_curve"; }

protected:
    std::vector<warplag::CJet> do_eval(std::span<const double> u) const override {
        using warplag::CJet;
        using warplag::Jet;
        const Jet s = Jet::variable(u[0], 1, 0);
        const Jet b1 = mu_ * (s / 2.0 - sin(2.0 * s) / 4.0);
        const Jet b2 = -mu_ * (s / 2.0 + sin(2.0 * s) / 4.0);
        const CJet z1 = CJet(cos(s), Jet::constant(0.0, 1)) * cexp(CJet(Jet::constant(0.0, 1), b1));
        const CJet z2 = CJet(sin(s), Jet::constant(0.0, 1)) * cexp(CJet(Jet::constant(0.0, 1), b2));
        return {z1, z2};
    }

private:
    double mu_;
};

inline warplag::ChartPtr wobbly_curve(double mu = 1.0) {
    return std::make_shared<WobblyLegendreCurve>(mu);
}

} // namespace testfix
