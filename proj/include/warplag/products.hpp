#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "warplag/chart.hpp"
#include "warplag/factors.hpp"
#include "warplag/profile.hpp"

namespace warplag {

enum class CalabiTarget { CP, CH };

/// Scale and frequency data of a Calabi curve: (r1 e^{i (r2/r1) a t},
/// r2 e^{-+ i (r1/r2) a t}) with r1^2 + r2^2 = 1 (CP) or -r1^2 + r2^2 = -1
/// (CH, all-plus exponents).
struct CalabiParams {
    double r1;
    double r2;
    double a;
    CalabiTarget target;
};

/// Eigenstructure a construction promises: the classifier should detect
/// these values (already in the normalized gauge).  lambda3 and the block
/// dimensions are set only for genuine two-factor charts.
struct ProductExpectation {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<double> lambda3;
    std::size_t dim2 = 0;
    std::size_t dim3 = 0;
};

/// Gauge fixing for detected eigenvalues: (l1, l2) and (-l1, -l2) describe
/// the same structure (flip of the distinguished direction), so pick l2 > 0,
/// breaking ties toward l1 >= 0.
std::pair<double, double> normalize_two(double l1, double l2);

/// Three-eigenvalue counterpart: flip gauge and block labels so that
/// l2 >= l3 and l2 is maximal among the two gauges (ties toward l1 >= 0).
/// Block dimensions travel with their eigenvalues.
struct ThreeLambdas {
    double l1, l2, l3;
    std::size_t n2, n3;
};
ThreeLambdas normalize_three(double l1, double l2, double l3, std::size_t n2, std::size_t n3);

/// Chart (t, p, q) -> (c0(t) f1(p), c1(t) f2(q)): both factor lifts scaled
/// by the components of a Legendre curve.  Parameters are ordered t, then
/// the factor-1 block, then the factor-2 block; the ambient coordinates
/// are the factor-1 block followed by the factor-2 block.
class WarpedProductChart final : public ImmersionChart {
public:
    WarpedProductChart(FactorLift f1, FactorLift f2, ChartPtr curve, std::string kind,
                       std::optional<ProductExpectation> expect);

    std::string kind() const override { return kind_; }

    const ChartPtr& curve() const { return curve_; }
    const FactorLift& factor(int which) const { return which == 0 ? f1_ : f2_; }
    const std::optional<ProductExpectation>& expectation() const { return expect_; }

    /// Half-open parameter index range of a factor block (t is index 0).
    std::pair<std::size_t, std::size_t> factor_params(int which) const;
    /// Half-open ambient coordinate range of a factor block.
    std::pair<std::size_t, std::size_t> factor_coords(int which) const;

    /// Warping moduli (|c0(t)|, |c1(t)|).
    std::array<double, 2> warp_moduli(double t) const;

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override;

private:
    FactorLift f1_;
    FactorLift f2_;
    ChartPtr curve_;
    std::string kind_;
    std::optional<ProductExpectation> expect_;
};

using WarpedPtr = std::shared_ptr<const WarpedProductChart>;

/// Worst defect of a lift chart at one parameter point: deviation of <f,f>
/// from 1/c, of <f_a, Jf> from 0 (horizontality), and of <Jf_a, f_b> from 0
/// (the C-totally-real condition).
double c_totally_real_residual(const ImmersionChart& lift, std::span<const double> u);

/// General warped product over any Legendre curve in C^2 (or C_1^2).
/// Factor 1 rides the first curve component.  Signature rules: a spherical
/// curve takes two spherical factors; a Lorentz curve takes a Lorentz
/// factor 1 and a spherical factor 2.
WarpedPtr warped_product(FactorLift f1, FactorLift f2, ChartPtr curve);

/// Warped product over the Calabi curve of `params`, with the expected
/// eigenstructure attached.
WarpedPtr calabi_product(FactorLift f1, FactorLift f2, const CalabiParams& params);

/// The minimal Calabi product of an (n-1)-dimensional minimal factor and a
/// point: r1 = sqrt(n/(n+1)), r2 = sqrt(1/(n+1)), frequencies t/(n+1) and
/// -n t/(n+1).  The factor must be minimal to 1e-8.
WarpedPtr minimal_calabi_cp(FactorLift f1, std::size_t n);

/// The minimal two-factor Calabi product: moduli sqrt((n_i+1)/(n1+n2+2))
/// and frequencies (n2+1)t/(n1+n2+2), -(n1+1)t/(n1+n2+2).  Both factors
/// must be minimal to 1e-8.
WarpedPtr minimal_calabi_two_factor(FactorLift f1, FactorLift f2);

/// Null-case (u = 0) Lorentz chart over a flat Lagrangian immersion
/// psi3 into C^(n-1):
///   e^{int(k + i lambda2)} (W, (i lambda2(0) - k(0))(W - 1), psi3),
///   W(t, p) = -int_0^t (k + i lambda2) e^{-2 int k} ds + A0(p),
/// with Re A0 = 1 + <psi3,psi3>/2 and d(Im A0) = <dpsi3, J psi3> integrated
/// along axis-aligned paths from the box origin (closedness of that form is
/// equivalent to psi3 being Lagrangian and is checked, not assumed).
ChartPtr null_warp_ch(ChartPtr psi3, const Profile& profile);

/// Multiplies every ambient coordinate by e^{i eps u_0}: a deliberate break
/// of horizontality of size ~eps used as a negative control.
ChartPtr phase_perturbation(ChartPtr base, double eps);

} // namespace warplag
