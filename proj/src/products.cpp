#include "warplag/products.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "warplag/errors.hpp"
#include "warplag/geometry.hpp"
#include "warplag/integrate.hpp"
#include "warplag/legendre.hpp"
#include "warplag/sampling.hpp"

namespace warplag {

std::pair<double, double> normalize_two(double l1, double l2) {
    if (l2 > 0.0) return {l1, l2};
    if (l2 < 0.0) return {-l1, -l2};
    return l1 >= 0.0 ? std::pair{l1, l2} : std::pair{-l1, -l2};
}

namespace {

ThreeLambdas order_blocks(double l1, double l2, double l3, std::size_t n2, std::size_t n3) {
    if (l3 > l2) {
        std::swap(l2, l3);
        std::swap(n2, n3);
    }
    return {l1, l2, l3, n2, n3};
}

} // namespace

ThreeLambdas normalize_three(double l1, double l2, double l3, std::size_t n2, std::size_t n3) {
    const ThreeLambdas plus = order_blocks(l1, l2, l3, n2, n3);
    const ThreeLambdas minus = order_blocks(-l1, -l2, -l3, n2, n3);
    if (plus.l2 != minus.l2) return plus.l2 > minus.l2 ? plus : minus;
    return plus.l1 >= minus.l1 ? plus : minus;
}

double c_totally_real_residual(const ImmersionChart& lift, std::span<const double> u) {
    const auto jets = lift.eval_jet(u);
    const auto space = lift.space();
    const std::size_t n = lift.param_dim();
    const std::size_t N = jets.size();

    CVector z(N);
    std::vector<CVector> tan(n, CVector(N));
    for (std::size_t k = 0; k < N; ++k) {
        z[k] = jets[k].value();
        for (std::size_t a = 0; a < n; ++a)
            tan[a][k] = {jets[k].re.d1(a), jets[k].im.d1(a)};
    }

    double worst = space_residual(z, space);
    const CVector jz = apply_J(z);
    for (std::size_t a = 0; a < n; ++a) {
        worst = std::max(worst, std::abs(real_inner(tan[a], jz, space)));
        const CVector jta = apply_J(tan[a]);
        for (std::size_t b = a; b < n; ++b)
            worst = std::max(worst, std::abs(real_inner(jta, tan[b], space)));
    }
    return worst;
}

WarpedProductChart::WarpedProductChart(FactorLift f1, FactorLift f2, ChartPtr curve,
                                       std::string kind, std::optional<ProductExpectation> expect)
    : ImmersionChart(
          [&] {
              Box box = curve->domain();
              for (const auto& r : f1.chart->domain().ranges) box.ranges.push_back(r);
              for (const auto& r : f2.chart->domain().ranges) box.ranges.push_back(r);
              return box;
          }(),
          f1.chart->ambient_complex_dim() + f2.chart->ambient_complex_dim(), curve->signature()),
      f1_(std::move(f1)), f2_(std::move(f2)), curve_(std::move(curve)), kind_(std::move(kind)),
      expect_(std::move(expect)) {
    if (curve_->param_dim() != 1 || curve_->ambient_complex_dim() != 2)
        throw ConstructionError("warped-product curve must be a one-parameter chart into C^2");
}

std::pair<std::size_t, std::size_t> WarpedProductChart::factor_params(int which) const {
    const std::size_t n1 = f1_.dim();
    if (which == 0) return {1, 1 + n1};
    return {1 + n1, 1 + n1 + f2_.dim()};
}

std::pair<std::size_t, std::size_t> WarpedProductChart::factor_coords(int which) const {
    const std::size_t N1 = f1_.chart->ambient_complex_dim();
    if (which == 0) return {0, N1};
    return {N1, N1 + f2_.chart->ambient_complex_dim()};
}

std::array<double, 2> WarpedProductChart::warp_moduli(double t) const {
    const auto z = curve_->eval(std::span<const double>(&t, 1));
    return {std::abs(z[0]), std::abs(z[1])};
}

std::vector<CJet> WarpedProductChart::do_eval(std::span<const double> u) const {
    const std::size_t n1 = f1_.dim();
    const std::size_t n2 = f2_.dim();
    const std::size_t dirs = 1 + n1 + n2;

    const auto cj = curve_->eval_jet(u.subspan(0, 1));
    const auto a1 = f1_.chart->eval_jet(u.subspan(1, n1));
    const auto a2 = f2_.chart->eval_jet(u.subspan(1 + n1, n2));

    const CJet c0 = cj[0].embedded(dirs, 0);
    const CJet c1 = cj[1].embedded(dirs, 0);

    std::vector<CJet> out;
    out.reserve(a1.size() + a2.size());
    for (const auto& g : a1) out.push_back(c0 * g.embedded(dirs, 1));
    for (const auto& g : a2) out.push_back(c1 * g.embedded(dirs, 1 + n1));
    return out;
}

namespace {

double max_lift_residual(const ImmersionChart& lift, std::uint64_t seed) {
    const std::size_t count = lift.param_dim() == 0 ? 1 : 8;
    double worst = 0.0;
    for (const auto& p : sample_box(lift.domain(), count, seed))
        worst = std::max(worst, c_totally_real_residual(lift, p));
    return worst;
}

void check_signatures(const FactorLift& f1, const FactorLift& f2, const ImmersionChart& curve) {
    if (curve.signature() == Signature::Definite) {
        if (f1.chart->signature() != Signature::Definite ||
            f2.chart->signature() != Signature::Definite)
            throw ConstructionError("a spherical curve takes two spherical factor lifts");
    } else {
        if (f1.chart->signature() != Signature::Lorentz)
            throw ConstructionError(
                "a Lorentz curve takes a Lorentz factor lift in the first slot");
        if (f2.chart->signature() != Signature::Definite)
            throw ConstructionError(
                "the second factor lift of a Lorentz product must be spherical");
    }
}

WarpedPtr make_product(FactorLift f1, FactorLift f2, ChartPtr curve, std::string kind,
                       std::optional<ProductExpectation> expect) {
    if (!curve || !f1.chart || !f2.chart)
        throw ConstructionError("warped product requires a curve chart and two factor lifts");
    if (curve->param_dim() != 1 || curve->ambient_complex_dim() != 2)
        throw ConstructionError("warped-product curve must be a one-parameter chart into C^2");
    check_signatures(f1, f2, *curve);

    const double r1 = max_lift_residual(*f1.chart, 11);
    if (r1 > 1e-10)
        throw ConstructionError("factor 1 is not a horizontal Lagrangian lift (residual " +
                                std::to_string(r1) + ")");
    const double r2 = max_lift_residual(*f2.chart, 12);
    if (r2 > 1e-10)
        throw ConstructionError("factor 2 is not a horizontal Lagrangian lift (residual " +
                                std::to_string(r2) + ")");
    const double rc = max_lift_residual(*curve, 13);
    if (rc > 1e-8)
        throw ConstructionError("curve is not Legendre (residual " + std::to_string(rc) + ")");

    return std::make_shared<const WarpedProductChart>(std::move(f1), std::move(f2),
                                                      std::move(curve), std::move(kind),
                                                      std::move(expect));
}

/// Expected eigenstructure of a Calabi product: the warp direction carries
/// lambda1 = r2/r1 -+ r1/r2, the factor-1 block r2/r1, the factor-2 block
/// -+ r1/r2 (upper signs CP, lower CH), all in the detector's gauge.
std::optional<ProductExpectation> calabi_expectation(const CalabiParams& p, std::size_t n1,
                                                     std::size_t n2) {
    const double q = p.r2 / p.r1;
    const double s = p.r1 / p.r2;
    const double raw1 = p.target == CalabiTarget::CP ? q - s : q + s;
    const double block1 = q;
    const double block2 = p.target == CalabiTarget::CP ? -s : s;

    if (n1 == 0 && n2 == 0) return std::nullopt;
    if (n1 == 0 || n2 == 0) {
        const auto [l1, l2] = normalize_two(raw1, n1 > 0 ? block1 : block2);
        ProductExpectation e;
        e.lambda1 = l1;
        e.lambda2 = l2;
        return e;
    }
    const ThreeLambdas t = normalize_three(raw1, block1, block2, n1, n2);
    ProductExpectation e;
    e.lambda1 = t.l1;
    e.lambda2 = t.l2;
    e.lambda3 = t.l3;
    e.dim2 = t.n2;
    e.dim3 = t.n3;
    return e;
}

void require_minimal(const FactorLift& f, const char* label) {
    if (f.dim() == 0) return;
    double worst = 0.0;
    for (const auto& p : sample_box(f.chart->domain(), 8, 21))
        worst = std::max(worst, mean_curvature(*f.chart, p).norm);
    if (worst > 1e-8)
        throw ParameterError(std::string(label) + " must be minimal; measured |H| = " +
                             std::to_string(worst));
}

} // namespace

WarpedPtr warped_product(FactorLift f1, FactorLift f2, ChartPtr curve) {
    return make_product(std::move(f1), std::move(f2), std::move(curve), "warped_product",
                        std::nullopt);
}

WarpedPtr calabi_product(FactorLift f1, FactorLift f2, const CalabiParams& params) {
    if (!f1.chart || !f2.chart)
        throw ConstructionError("warped product requires two factor lifts");
    const bool cp = params.target == CalabiTarget::CP;
    ChartPtr curve = cp ? calabi_curve_cp(params.r1, params.r2, params.a)
                        : calabi_curve_ch(params.r1, params.r2, params.a);
    auto expect = calabi_expectation(params, f1.dim(), f2.dim());
    return make_product(std::move(f1), std::move(f2), std::move(curve),
                        cp ? "calabi_product_cp" : "calabi_product_ch", std::move(expect));
}

WarpedPtr minimal_calabi_cp(FactorLift f1, std::size_t n) {
    if (!f1.chart) throw ConstructionError("warped product requires two factor lifts");
    if (n < 1 || f1.dim() != n - 1)
        throw ParameterError("minimal Calabi products of dimension n take an (n-1)-dimensional "
                             "factor");
    if (f1.chart->signature() != Signature::Definite)
        throw ConstructionError("a spherical curve takes two spherical factor lifts");
    require_minimal(f1, "factor 1");

    const double nn = static_cast<double>(n);
    CalabiParams params{std::sqrt(nn / (nn + 1.0)), std::sqrt(1.0 / (nn + 1.0)),
                        std::sqrt(nn) / (nn + 1.0), CalabiTarget::CP};
    ChartPtr curve = calabi_curve_cp(params.r1, params.r2, params.a);
    auto expect = calabi_expectation(params, f1.dim(), 0);
    return make_product(std::move(f1), point_factor(), std::move(curve), "minimal_calabi_cp",
                        std::move(expect));
}

WarpedPtr minimal_calabi_two_factor(FactorLift f1, FactorLift f2) {
    if (!f1.chart || !f2.chart)
        throw ConstructionError("warped product requires two factor lifts");
    if (f1.dim() == 0 || f2.dim() == 0)
        throw ParameterError("two-factor minimal products need two factors of dimension >= 1");
    require_minimal(f1, "factor 1");
    require_minimal(f2, "factor 2");

    const double m1 = static_cast<double>(f1.dim()) + 1.0;
    const double m2 = static_cast<double>(f2.dim()) + 1.0;
    CalabiParams params{std::sqrt(m1 / (m1 + m2)), std::sqrt(m2 / (m1 + m2)),
                        std::sqrt(m1 * m2) / (m1 + m2), CalabiTarget::CP};
    ChartPtr curve = calabi_curve_cp(params.r1, params.r2, params.a);
    auto expect = calabi_expectation(params, f1.dim(), f2.dim());
    return make_product(std::move(f1), std::move(f2), std::move(curve),
                        "minimal_calabi_two_factor", std::move(expect));
}

namespace {

/// Eq-5.12-style chart over a flat Lagrangian block psi3.  The scalar A0 has
/// Re A0 = 1 + <psi3,psi3>/2 pointwise; Im A0 is a potential of the 1-form
/// omega_a = <d_a psi3, J psi3>, produced by axis-aligned path integration
/// from a fixed base point and differentiated analytically.
class NullWarpChart final : public ImmersionChart {
public:
    NullWarpChart(Box box, ChartPtr psi3, Profile prof, std::vector<double> base)
        : ImmersionChart(std::move(box), psi3->ambient_complex_dim() + 2, Signature::Lorentz),
          psi3_(std::move(psi3)), prof_(std::move(prof)), base_(std::move(base)),
          f0_(-prof_.k_at(0.0), prof_.lambda2_at(0.0)) {}

    std::string kind() const override { return "null_warp_ch"; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const std::size_t m = psi3_->param_dim();
        const std::size_t dirs = 1 + m;
        const auto p = prof_.at(u[0]);
        const auto pj = psi3_->eval_jet(u.subspan(1));

        Jet re_a0 = Jet::constant(1.0, m);
        for (const auto& jk : pj) re_a0 += (jk.re * jk.re + jk.im * jk.im) * 0.5;
        const CJet a0 = CJet(re_a0, im_a0_jet(pj, u.subspan(1))).embedded(dirs, 1);

        const CJet w = a0 - p.warp_integral.embedded(dirs, 0);
        const CJet phase = cexp(CJet(p.int_k, p.int_lambda2)).embedded(dirs, 0);

        std::vector<CJet> out;
        out.reserve(2 + pj.size());
        out.push_back(phase * w);
        out.push_back((phase * (w - CJet::constant(1.0, dirs))) * f0_);
        for (const auto& jk : pj) out.push_back(phase * jk.embedded(dirs, 1));
        return out;
    }

private:
    double im_a0_value(std::span<const double> q) const {
        double total = 0.0;
        std::vector<double> x = base_;
        for (std::size_t a = 0; a < x.size(); ++a) {
            if (q[a] != x[a]) {
                const auto f = [&](double s) {
                    x[a] = s;
                    const auto js = psi3_->eval_jet(x);
                    double w = 0.0;
                    for (const auto& jk : js)
                        w += jk.im.d1(a) * jk.re.value() - jk.re.d1(a) * jk.im.value();
                    return w;
                };
                total += quad_adaptive(f, x[a], q[a], 1e-10);
            }
            x[a] = q[a];
        }
        return total;
    }

    /// omega_a = sum_k Im(d_a psi_k conj(psi_k)) and its t-free derivatives,
    /// assembled from the psi3 jets (exact since omega is algebraic in them).
    Jet im_a0_jet(const std::vector<CJet>& pj, std::span<const double> q) const {
        const std::size_t m = psi3_->param_dim();
        Jet w(m);
        w.value() = im_a0_value(q);
        for (std::size_t a = 0; a < m; ++a) {
            double s = 0.0;
            for (const auto& jk : pj)
                s += jk.im.d1(a) * jk.re.value() - jk.re.d1(a) * jk.im.value();
            w.d1(a) = s;
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b) {
                double s = 0.0;
                for (const auto& jk : pj)
                    s += jk.im.d2(a, b) * jk.re.value() + jk.im.d1(a) * jk.re.d1(b) -
                         jk.re.d2(a, b) * jk.im.value() - jk.re.d1(a) * jk.im.d1(b);
                w.d2(a, b) = s;
            }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b)
                for (std::size_t c = b; c < m; ++c) {
                    double s = 0.0;
                    for (const auto& jk : pj)
                        s += jk.im.d3(a, b, c) * jk.re.value() + jk.im.d2(a, b) * jk.re.d1(c) +
                             jk.im.d2(a, c) * jk.re.d1(b) + jk.im.d1(a) * jk.re.d2(b, c) -
                             jk.re.d3(a, b, c) * jk.im.value() - jk.re.d2(a, b) * jk.im.d1(c) -
                             jk.re.d2(a, c) * jk.im.d1(b) - jk.re.d1(a) * jk.im.d2(b, c);
                    w.d3(a, b, c) = s;
                }
        return w;
    }

    ChartPtr psi3_;
    Profile prof_;
    std::vector<double> base_;
    std::complex<double> f0_; // i lambda2(0) - k(0)
};

} // namespace

ChartPtr null_warp_ch(ChartPtr psi3, const Profile& profile) {
    if (!psi3) throw ParameterError("null-warp construction requires a psi3 chart");
    if (std::abs(profile.c() + 1.0) > 1e-12)
        throw ProfileCaseError("null-warp charts require base curvature c = -1");
    if (std::abs(profile.conserved_u()) > 1e-10)
        throw ProfileCaseError("profile has nonzero conserved u = " +
                               std::to_string(profile.conserved_u()) +
                               "; use profile_curve_ch for that case");

    const std::size_t m = psi3->param_dim();
    if (m == 0) throw ParameterError("psi3 must have at least one parameter");
    if (psi3->ambient_complex_dim() != m)
        throw ParameterError("psi3 must map an m-dimensional domain into flat C^m");

    if (m >= 2) {
        double worst = 0.0;
        for (const auto& pt : sample_box(psi3->domain(), 16, 31)) {
            const auto js = psi3->eval_jet(pt);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a + 1; b < m; ++b) {
                    double s = 0.0;
                    for (const auto& jk : js)
                        s += jk.im.d1(a) * jk.re.d1(b) - jk.re.d1(a) * jk.im.d1(b);
                    worst = std::max(worst, 2.0 * std::abs(s));
                }
        }
        if (worst > 1e-6)
            throw NotLagrangian("psi3 is not Lagrangian: its potential form is not closed "
                                "(residual " + std::to_string(worst) + ")");
    }

    Box box;
    box.ranges.push_back({profile.tspan()[0], profile.tspan()[1]});
    std::vector<double> base(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = psi3->domain().ranges[i];
        box.ranges.push_back(r);
        base[i] = std::clamp(0.0, r[0], r[1]);
    }
    return std::make_shared<const NullWarpChart>(std::move(box), std::move(psi3), profile,
                                                 std::move(base));
}

namespace {

class PhasePerturbedChart final : public ImmersionChart {
public:
    PhasePerturbedChart(ChartPtr base, double eps)
        : ImmersionChart(base->domain(), base->ambient_complex_dim(), base->signature()),
          base_(std::move(base)), eps_(eps) {}

    std::string kind() const override { return "phase_perturbation"; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        auto jets = base_->eval_jet(u);
        const std::size_t dirs = base_->param_dim();
        const CJet phase = cexp(CJet(Jet(dirs), Jet::variable(u[0], dirs, 0) * eps_));
        for (auto& j : jets) j = j * phase;
        return jets;
    }

private:
    ChartPtr base_;
    double eps_;
};

} // namespace

ChartPtr phase_perturbation(ChartPtr base, double eps) {
    if (!base) throw ConstructionError("phase perturbation requires a base chart");
    if (base->param_dim() == 0)
        throw ConstructionError("phase perturbation needs at least one parameter to twist");
    return std::make_shared<const PhasePerturbedChart>(std::move(base), eps);
}

} // namespace warplag
