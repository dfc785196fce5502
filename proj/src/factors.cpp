#include "warplag/factors.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

class PointLift final : public ImmersionChart {
public:
    explicit PointLift(Signature sig) : ImmersionChart(Box{}, 1, sig) {}
    std::string kind() const override { return "point"; }

protected:
    std::vector<CJet> do_eval(std::span<const double>) const override {
        return {CJet::constant({1.0, 0.0}, 0)};
    }
};

class GreatCircleLift final : public ImmersionChart {
public:
    GreatCircleLift() : ImmersionChart(Box{{{-3.0, 3.0}}}, 2, Signature::Definite) {}
    std::string kind() const override { return "great_circle"; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const Jet t = Jet::variable(u[0], 1, 0);
        return {CJet::from_real(cos(t)), CJet::from_real(sin(t))};
    }
};

/// Real polar chart of S^d or H^d:
///   sphere:     (cos u1, sin u1 cos u2, ..., sin u1 ... sin ud)
///   hyperbolic: (cosh u1, sinh u1 cos u2, ..., sinh u1 ... sin ud)
/// Real coordinates make the lift horizontal; the domain keeps the chart away
/// from the polar degeneracy.
class RealSpaceFormLift final : public ImmersionChart {
public:
    RealSpaceFormLift(std::size_t dim, bool hyperbolic)
        : ImmersionChart(make_box(dim), dim + 1,
                         hyperbolic ? Signature::Lorentz : Signature::Definite),
          hyperbolic_(hyperbolic) {}

    std::string kind() const override {
        return hyperbolic_ ? "totally_geodesic_hyperbolic" : "totally_geodesic_sphere";
    }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const std::size_t d = u.size();
        std::vector<Jet> uj(d);
        for (std::size_t i = 0; i < d; ++i) uj[i] = Jet::variable(u[i], d, i);

        std::vector<CJet> out;
        out.reserve(d + 1);
        Jet sines = Jet::constant(1.0, d); // running product of sin factors
        for (std::size_t i = 0; i < d; ++i) {
            const Jet c = (hyperbolic_ && i == 0) ? coshj(uj[0]) : cos(uj[i]);
            out.push_back(CJet::from_real(sines * c));
            sines = sines * ((hyperbolic_ && i == 0) ? sinhj(uj[0]) : sin(uj[i]));
        }
        out.push_back(CJet::from_real(sines));
        return out;
    }

private:
    static Box make_box(std::size_t dim) {
        if (dim == 0) throw ParameterError("space form factor needs dimension >= 1");
        Box b;
        b.ranges.assign(dim, {0.35, 1.2});
        return b;
    }
    static Jet coshj(const Jet& x) {
        const double c = std::cosh(x.value()), s = std::sinh(x.value());
        return x.compose(c, s, c, s);
    }
    static Jet sinhj(const Jet& x) {
        const double c = std::cosh(x.value()), s = std::sinh(x.value());
        return x.compose(s, c, s, c);
    }

    bool hyperbolic_;
};

class FlatTorusLift final : public ImmersionChart {
public:
    explicit FlatTorusLift(std::vector<double> freqs)
        : ImmersionChart(make_box(freqs), freqs.size() + 1, Signature::Definite),
          freqs_(std::move(freqs)),
          rho_(1.0 / std::sqrt(double(freqs_.size() + 1))) {}

    std::string kind() const override { return "flat_torus"; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const std::size_t d = u.size();
        Jet theta0(d);
        std::vector<Jet> theta(d);
        for (std::size_t i = 0; i < d; ++i) {
            theta[i] = Jet::variable(u[i], d, i) * freqs_[i];
            theta0 -= theta[i];
        }
        std::vector<CJet> out;
        out.reserve(d + 1);
        out.push_back(cexp(CJet{Jet(d), theta0}) * rho_);
        for (std::size_t i = 0; i < d; ++i) out.push_back(cexp(CJet{Jet(d), theta[i]}) * rho_);
        return out;
    }

private:
    static Box make_box(const std::vector<double>& freqs) {
        if (freqs.empty()) throw ParameterError("flat torus needs at least one frequency");
        for (double f : freqs)
            if (f == 0.0) throw ParameterError("flat torus frequencies must be nonzero");
        Box b;
        b.ranges.assign(freqs.size(), {-3.0, 3.0});
        return b;
    }

    std::vector<double> freqs_;
    double rho_;
};

class FlatPlane final : public ImmersionChart {
public:
    FlatPlane(std::size_t dim, std::vector<std::complex<double>> offset)
        : ImmersionChart(make_box(dim), dim, Signature::Definite), offset_(std::move(offset)) {
        if (!offset_.empty() && offset_.size() != dim)
            throw ParameterError("flat plane offset dimension mismatch");
    }

    std::string kind() const override { return "flat_plane"; }

protected:
    std::vector<CJet> do_eval(std::span<const double> u) const override {
        const std::size_t d = u.size();
        std::vector<CJet> out;
        out.reserve(d);
        for (std::size_t i = 0; i < d; ++i) {
            CJet z = CJet::from_real(Jet::variable(u[i], d, i));
            if (!offset_.empty()) z = z + CJet::constant(offset_[i], d);
            out.push_back(z);
        }
        return out;
    }

private:
    static Box make_box(std::size_t dim) {
        if (dim == 0) throw ParameterError("flat plane needs dimension >= 1");
        Box b;
        b.ranges.assign(dim, {-0.5, 0.5});
        return b;
    }

    std::vector<std::complex<double>> offset_;
};

} // namespace

FactorLift point_factor(Signature sig) { return {std::make_shared<PointLift>(sig)}; }

FactorLift great_circle_factor() { return {std::make_shared<GreatCircleLift>()}; }

FactorLift totally_geodesic_sphere_factor(std::size_t dim) {
    return {std::make_shared<RealSpaceFormLift>(dim, false)};
}

FactorLift totally_geodesic_hyperbolic_factor(std::size_t dim) {
    return {std::make_shared<RealSpaceFormLift>(dim, true)};
}

FactorLift flat_torus_factor(const std::vector<double>& frequencies) {
    return {std::make_shared<FlatTorusLift>(frequencies)};
}

FactorLift curve_factor(ChartPtr legendre_curve) {
    if (!legendre_curve || legendre_curve->param_dim() != 1)
        throw ParameterError("curve factor must be a one-parameter chart");
    return {std::move(legendre_curve)};
}

ChartPtr flat_plane(std::size_t dim, std::vector<std::complex<double>> offset) {
    return std::make_shared<FlatPlane>(dim, std::move(offset));
}

} // namespace warplag
