#include "warplag/legendre.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

constexpr double kRadiusTol = 1e-12;
constexpr double kNullTol = 1e-10;

/// Curve (r0 e^{i w0 t}, r1 e^{i w1 t}) in C^2 with either signature.
class ExponentialCurve final : public ImmersionChart {
public:
    ExponentialCurve(std::string kind, double r0, double r1, double w0, double w1, Signature sig)
        : ImmersionChart(Box{{{-8.0, 8.0}}}, 2, sig),
          kind_(std::move(kind)),
          r_{r0, r1},
          w_{w0, w1} {}

    std::string kind() const override { return kind_; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const Jet t = Jet::variable(u[0], 1, 0);
        std::vector<CJet> out;
        out.reserve(2);
        for (int j = 0; j < 2; ++j)
            out.push_back(cexp(CJet{Jet(1), t * w_[j]}) * r_[j]);
        return out;
    }

private:
    std::string kind_;
    double r_[2];
    double w_[2];
};

/// Curve assembled from profile data (Thm-style recovery chart).  The two
/// components are e^{int(k + i lambda2)} / sqrt|u| and
/// (i lambda2 - k) e^{int(k + i(lambda1 - lambda2))} / sqrt|u|, stored in
/// either order depending on the case.
class ProfileCurve final : public ImmersionChart {
public:
    ProfileCurve(std::string kind, Profile profile, bool warp_first, Signature sig)
        : ImmersionChart(Box{{{profile.tspan()[0], profile.tspan()[1]}}}, 2, sig),
          kind_(std::move(kind)),
          prof_(std::move(profile)),
          warp_first_(warp_first),
          inv_sqrt_u_(1.0 / std::sqrt(std::abs(prof_.conserved_u()))) {}

    std::string kind() const override { return kind_; }
    const Profile& profile() const { return prof_; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const auto p = prof_.at(u[0]);
        const CJet factor_part = cexp(CJet{p.int_k, p.int_lambda2}) * inv_sqrt_u_;
        const CJet warp_part = CJet{-p.k, p.lambda2} *
                               cexp(CJet{p.int_k, p.int_lambda1 - p.int_lambda2}) * inv_sqrt_u_;
        if (warp_first_) return {warp_part, factor_part};
        return {factor_part, warp_part};
    }

private:
    std::string kind_;
    Profile prof_;
    bool warp_first_;
    double inv_sqrt_u_;
};

void check_positive(double x, const char* name) {
    if (!(x > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

} // namespace

ChartPtr calabi_curve_cp(double r1, double r2, double a) {
    check_positive(r1, "r1");
    check_positive(r2, "r2");
    check_positive(a, "a");
    if (std::abs(r1 * r1 + r2 * r2 - 1.0) > kRadiusTol)
        throw ParameterError("calabi_curve_cp requires r1^2 + r2^2 = 1");
    return std::make_shared<ExponentialCurve>("calabi_curve_cp", r1, r2, (r2 / r1) * a,
                                              -(r1 / r2) * a, Signature::Definite);
}

ChartPtr calabi_curve_ch(double r1, double r2, double a) {
    check_positive(r1, "r1");
    check_positive(r2, "r2");
    check_positive(a, "a");
    if (std::abs(-r1 * r1 + r2 * r2 + 1.0) > kRadiusTol)
        throw ParameterError("calabi_curve_ch requires r1^2 - r2^2 = 1");
    return std::make_shared<ExponentialCurve>("calabi_curve_ch", r1, r2, (r2 / r1) * a,
                                              (r1 / r2) * a, Signature::Lorentz);
}

ChartPtr profile_curve_cp(const Profile& profile) {
    if (profile.c() != 1.0) throw ProfileCaseError("profile_curve_cp needs c = +1");
    if (profile.conserved_u() <= kNullTol)
        throw ProfileCaseError("profile_curve_cp requires u > 0");
    return std::make_shared<ProfileCurve>("profile_curve_cp", profile, /*warp_first=*/false,
                                          Signature::Definite);
}

ChartPtr profile_curve_ch(const Profile& profile, UCase ucase) {
    if (profile.c() != -1.0) throw ProfileCaseError("profile_curve_ch needs c = -1");
    const double u = profile.conserved_u();
    if (std::abs(u) <= kNullTol)
        throw ProfileCaseError("u = 0 is the null case: use null_warp_ch");
    if (ucase == UCase::Positive && u < 0.0)
        throw ProfileCaseError("profile has u < 0 but the positive case was requested");
    if (ucase == UCase::Negative && u > 0.0)
        throw ProfileCaseError("profile has u > 0 but the negative case was requested");
    // u > 0: warp scalar in the Lorentz slot, factor lift spherical.
    // u < 0: factor lift in the Lorentz slot, warp scalar spherical.
    const bool warp_first = ucase == UCase::Positive;
    return std::make_shared<ProfileCurve>("profile_curve_ch", profile, warp_first,
                                          Signature::Lorentz);
}

double horizontality_residual(const ImmersionChart& curve, double t) {
    if (curve.param_dim() != 1)
        throw ContractViolation("horizontality_residual expects a one-parameter chart");
    const double u[1] = {t};
    const auto jets = curve.eval_jet(u);
    const HermitianSpace space = curve.space();
    double acc_im = 0.0;
    for (std::size_t kk = 0; kk < jets.size(); ++kk) {
        // <gamma', J gamma> = Im <gamma', gamma> (signature-aware).
        const std::complex<double> dg{jets[kk].re.d1(0), jets[kk].im.d1(0)};
        const std::complex<double> g = jets[kk].value();
        acc_im += (space.epsilon(kk) * dg * std::conj(g)).imag();
    }
    return std::abs(acc_im);
}

std::pair<double, double> u_constancy(const Profile& profile, std::size_t grid_points) {
    if (grid_points < 2) throw ContractViolation("u_constancy needs at least two grid points");
    const auto span = profile.tspan();
    double mean = 0.0;
    std::vector<double> vals(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = span[0] + (span[1] - span[0]) * double(i) / double(grid_points - 1);
        vals[i] = profile.u_at(t);
        mean += vals[i];
    }
    mean /= double(grid_points);
    double maxdev = 0.0;
    for (double v : vals) maxdev = std::max(maxdev, std::abs(v - mean));
    return {mean, maxdev};
}

} // namespace warplag
