#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "warplag/errors.hpp"

namespace warplag {

/// Truncated order-3 Taylor expansion of a scalar function of `dirs` real
/// parameters.  Stores the value, the gradient, and the symmetric second and
/// third derivative arrays (upper-simplex storage, so mixed partials are
/// symmetric bitwise).  Arithmetic propagates derivatives exactly through
/// order 3 (Leibniz / Faa di Bruno).
class Jet {
public:
    Jet() = default;

    /// Zero jet in `dirs` directions.
    explicit Jet(std::size_t dirs);

    static Jet constant(double value, std::size_t dirs);

    /// Jet of the coordinate function u_index at a point where it equals `value`.
    static Jet variable(double value, std::size_t dirs, std::size_t index);

    std::size_t dirs() const { return m_; }

    double value() const { return v_; }
    double& value() { return v_; }

    double d1(std::size_t i) const;
    double d2(std::size_t i, std::size_t j) const;
    double d3(std::size_t i, std::size_t j, std::size_t k) const;

    double& d1(std::size_t i);
    double& d2(std::size_t i, std::size_t j);
    double& d3(std::size_t i, std::size_t j, std::size_t k);

    /// Re-index this jet into a larger direction space, placing direction i at
    /// offset + i.  Used to assemble product charts from factor charts.
    Jet embedded(std::size_t total_dirs, std::size_t offset) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { a.v_ += s; return a; }
    friend Jet operator+(double s, Jet a) { a.v_ += s; return a; }
    friend Jet operator-(Jet a, double s) { a.v_ -= s; return a; }
    friend Jet operator-(double s, const Jet& a) { Jet r = -a; r.v_ += s; return r; }

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double s, const Jet& b);
    friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

    /// Composition with a scalar function given by its derivatives at value():
    /// f0 = f(v), f1 = f'(v), f2 = f''(v), f3 = f'''(v).
    Jet compose(double f0, double f1, double f2, double f3) const;

private:
    static std::size_t size1(std::size_t m) { return m; }
    static std::size_t size2(std::size_t m) { return m * (m + 1) / 2; }
    static std::size_t size3(std::size_t m) { return m * (m + 1) * (m + 2) / 6; }

    void check_compatible(const Jet& o) const;

    std::size_t m_ = 0;
    double v_ = 0.0;
    std::vector<double> g_; // gradient
    std::vector<double> h_; // second derivatives, i <= j
    std::vector<double> t_; // third derivatives, i <= j <= k
};

Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sqrt(const Jet& x);
Jet atan(const Jet& x);
/// Two-argument arctangent; requires (x, y) bounded away from the origin.
Jet atan2(const Jet& y, const Jet& x);
Jet pow_int(const Jet& x, int n);
Jet recip(const Jet& x);

/// Complex-valued jet: real and imaginary parts propagate independently.
struct CJet {
    Jet re, im;

    CJet() = default;
    CJet(Jet r, Jet i) : re(std::move(r)), im(std::move(i)) {}

    static CJet constant(std::complex<double> z, std::size_t dirs);
    static CJet from_real(Jet r);

    std::size_t dirs() const { return re.dirs(); }
    std::complex<double> value() const { return {re.value(), im.value()}; }

    CJet embedded(std::size_t total_dirs, std::size_t offset) const;

    CJet conj() const { return {re, -im}; }
    /// Multiplication by i.
    CJet times_i() const { return {-im, re}; }

    CJet operator-() const { return {-re, -im}; }
    friend CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
    friend CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
    friend CJet operator*(const CJet& a, const CJet& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CJet operator*(const CJet& a, std::complex<double> z) {
        return a * CJet::constant(z, a.dirs());
    }
    friend CJet operator*(std::complex<double> z, const CJet& a) { return a * z; }
    friend CJet operator*(const CJet& a, double s) { return {a.re * s, a.im * s}; }
    friend CJet operator*(double s, const CJet& a) { return a * s; }
};

/// exp(z) for a complex jet: e^(re) (cos im + i sin im).
CJet cexp(const CJet& z);

} // namespace warplag
