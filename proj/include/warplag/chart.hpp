#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "warplag/ambient.hpp"
#include "warplag/jet.hpp"

namespace warplag {

/// Axis-aligned parameter domain.
struct Box {
    std::vector<std::array<double, 2>> ranges;

    std::size_t dim() const { return ranges.size(); }
    bool contains(std::span<const double> u) const {
        if (u.size() != ranges.size()) return false;
        for (std::size_t i = 0; i < ranges.size(); ++i)
            if (u[i] < ranges[i][0] || u[i] > ranges[i][1]) return false;
        return true;
    }
};

/// A parametrized map from a box in R^m into flat C^N carrying a Hermitian
/// form.  Evaluation returns one complex jet per ambient coordinate, exact
/// through third order in all m parameter directions.
///
/// Charts built by this library land on the quadric { <z,z> = 1/c } and are
/// horizontal there, so they project to Lagrangian immersions in the complex
/// space form downstairs; none of that is enforced here, which lets the test
/// suite evaluate deliberately broken charts.
class ImmersionChart {
public:
    virtual ~ImmersionChart() = default;

    std::size_t param_dim() const { return box_.dim(); }
    std::size_t ambient_complex_dim() const { return ambient_dim_; }
    Signature signature() const { return sig_; }
    double curvature() const { return sig_ == Signature::Definite ? 1.0 : -1.0; }
    HermitianSpace space() const { return {ambient_dim_, sig_, curvature()}; }
    const Box& domain() const { return box_; }

    /// Short construction-kind tag ("calabi_curve_cp", "warped_product", ...).
    virtual std::string kind() const = 0;

    std::vector<CJet> eval_jet(std::span<const double> u) const {
        if (u.size() != box_.dim())
            throw ContractViolation("parameter dimension mismatch in chart evaluation");
        if (!box_.contains(u)) throw OutOfDomain("parameter point outside chart domain");
        return do_eval(u);
    }

    CVector eval(std::span<const double> u) const {
        const auto jets = eval_jet(u);
        CVector z(jets.size());
        for (std::size_t k = 0; k < jets.size(); ++k) z[k] = jets[k].value();
        return z;
    }

protected:
    ImmersionChart(Box box, std::size_t ambient_dim, Signature sig)
        : box_(std::move(box)), ambient_dim_(ambient_dim), sig_(sig) {}

    virtual std::vector<CJet> do_eval(std::span<const double> u) const = 0;

    Box box_;
    std::size_t ambient_dim_;
    Signature sig_;
};

using ChartPtr = std::shared_ptr<const ImmersionChart>;

} // namespace warplag
