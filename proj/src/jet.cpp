#include "warplag/jet.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace warplag {

namespace {

inline std::size_t idx2(std::size_t i, std::size_t j) {
    // requires i <= j
    return j * (j + 1) / 2 + i;
}

inline std::size_t idx3(std::size_t i, std::size_t j, std::size_t k) {
    // requires i <= j <= k
    return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

inline void sort2(std::size_t& i, std::size_t& j) {
    if (i > j) std::swap(i, j);
}

inline void sort3(std::size_t& i, std::size_t& j, std::size_t& k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
}

constexpr double kDivFloor = 1e-300;

} // namespace

Jet::Jet(std::size_t dirs)
    : m_(dirs), v_(0.0), g_(size1(dirs), 0.0), h_(size2(dirs), 0.0), t_(size3(dirs), 0.0) {}

Jet Jet::constant(double value, std::size_t dirs) {
    Jet j(dirs);
    j.v_ = value;
    return j;
}

Jet Jet::variable(double value, std::size_t dirs, std::size_t index) {
    if (index >= dirs) throw ContractViolation("jet variable index out of range");
    Jet j(dirs);
    j.v_ = value;
    j.g_[index] = 1.0;
    return j;
}

double Jet::d1(std::size_t i) const { return g_[i]; }
double& Jet::d1(std::size_t i) { return g_[i]; }

double Jet::d2(std::size_t i, std::size_t j) const {
    sort2(i, j);
    return h_[idx2(i, j)];
}
double& Jet::d2(std::size_t i, std::size_t j) {
    sort2(i, j);
    return h_[idx2(i, j)];
}

double Jet::d3(std::size_t i, std::size_t j, std::size_t k) const {
    sort3(i, j, k);
    return t_[idx3(i, j, k)];
}
double& Jet::d3(std::size_t i, std::size_t j, std::size_t k) {
    sort3(i, j, k);
    return t_[idx3(i, j, k)];
}

Jet Jet::embedded(std::size_t total_dirs, std::size_t offset) const {
    if (offset + m_ > total_dirs) throw ContractViolation("jet embedding out of range");
    Jet r(total_dirs);
    r.v_ = v_;
    for (std::size_t i = 0; i < m_; ++i) {
        r.d1(offset + i) = g_[i];
        for (std::size_t j = i; j < m_; ++j) {
            r.d2(offset + i, offset + j) = h_[idx2(i, j)];
            for (std::size_t k = j; k < m_; ++k)
                r.d3(offset + i, offset + j, offset + k) = t_[idx3(i, j, k)];
        }
    }
    return r;
}

void Jet::check_compatible(const Jet& o) const {
    if (m_ != o.m_) throw ContractViolation("jet direction counts differ");
}

Jet Jet::operator-() const {
    Jet r = *this;
    r.v_ = -r.v_;
    for (auto& x : r.g_) x = -x;
    for (auto& x : r.h_) x = -x;
    for (auto& x : r.t_) x = -x;
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o);
    v_ += o.v_;
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
    for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] += o.t_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o);
    v_ -= o.v_;
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
    for (std::size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] -= o.t_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    v_ *= s;
    for (auto& x : g_) x *= s;
    for (auto& x : h_) x *= s;
    for (auto& x : t_) x *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const std::size_t m = a.m_;
    Jet r(m);
    r.v_ = a.v_ * b.v_;
    for (std::size_t i = 0; i < m; ++i) {
        r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
        for (std::size_t j = i; j < m; ++j) {
            r.h_[idx2(i, j)] = a.h_[idx2(i, j)] * b.v_ + a.g_[i] * b.g_[j] +
                               a.g_[j] * b.g_[i] + a.v_ * b.h_[idx2(i, j)];
            for (std::size_t k = j; k < m; ++k) {
                // Leibniz: partition {i,j,k} between the two factors.
                r.t_[idx3(i, j, k)] =
                    a.t_[idx3(i, j, k)] * b.v_ + a.v_ * b.t_[idx3(i, j, k)] +
                    a.h_[idx2(i, j)] * b.g_[k] + a.h_[idx2(i, k)] * b.g_[j] +
                    a.h_[idx2(j, k)] * b.g_[i] + a.g_[i] * b.h_[idx2(j, k)] +
                    a.g_[j] * b.h_[idx2(i, k)] + a.g_[k] * b.h_[idx2(i, j)];
            }
        }
    }
    return r;
}

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
    const std::size_t m = m_;
    Jet r(m);
    r.v_ = f0;
    for (std::size_t i = 0; i < m; ++i) {
        r.g_[i] = f1 * g_[i];
        for (std::size_t j = i; j < m; ++j) {
            r.h_[idx2(i, j)] = f1 * h_[idx2(i, j)] + f2 * g_[i] * g_[j];
            for (std::size_t k = j; k < m; ++k) {
                r.t_[idx3(i, j, k)] =
                    f1 * t_[idx3(i, j, k)] +
                    f2 * (h_[idx2(i, j)] * g_[k] + h_[idx2(i, k)] * g_[j] +
                          h_[idx2(j, k)] * g_[i]) +
                    f3 * g_[i] * g_[j] * g_[k];
            }
        }
    }
    return r;
}

Jet recip(const Jet& x) {
    const double v = x.value();
    if (std::abs(v) < kDivFloor) throw SingularEvaluation("div", "denominator too close to zero");
    const double iv = 1.0 / v;
    return x.compose(iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
Jet operator/(double s, const Jet& b) { return recip(b) * s; }

Jet exp(const Jet& x) {
    const double e = std::exp(x.value());
    return x.compose(e, e, e, e);
}

Jet log(const Jet& x) {
    const double v = x.value();
    if (v <= 0.0) throw SingularEvaluation("log", "argument must be positive");
    const double iv = 1.0 / v;
    return x.compose(std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv);
}

Jet sin(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(s, c, -s, -c);
}

Jet cos(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(c, -s, -c, s);
}

Jet sqrt(const Jet& x) {
    const double v = x.value();
    if (v <= 0.0) throw SingularEvaluation("sqrt", "argument must be positive");
    const double r = std::sqrt(v);
    return x.compose(r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v));
}

Jet atan(const Jet& x) {
    const double v = x.value();
    const double d = 1.0 + v * v;
    const double f1 = 1.0 / d;
    const double f2 = -2.0 * v / (d * d);
    const double f3 = (6.0 * v * v - 2.0) / (d * d * d);
    return x.compose(std::atan(v), f1, f2, f3);
}

Jet atan2(const Jet& y, const Jet& x) {
    const double xv = x.value(), yv = y.value();
    if (std::abs(xv) < kDivFloor && std::abs(yv) < kDivFloor)
        throw SingularEvaluation("atan2", "both arguments near zero");
    // Away from the branch cut atan2 differs from atan of the ratio by a
    // constant, so the derivative slots come from the ratio; the value slot is
    // the true atan2.
    Jet r = (std::abs(xv) >= std::abs(yv)) ? atan(y / x) : -atan(x / y);
    const double shift = std::atan2(yv, xv) - r.value();
    return r + shift;
}

Jet pow_int(const Jet& x, int n) {
    if (n == 0) return Jet::constant(1.0, x.dirs());
    if (n < 0) return recip(pow_int(x, -n));
    Jet r = Jet::constant(1.0, x.dirs());
    Jet base = x;
    unsigned e = static_cast<unsigned>(n);
    while (e > 0) {
        if (e & 1u) r = r * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return r;
}

CJet CJet::constant(std::complex<double> z, std::size_t dirs) {
    return {Jet::constant(z.real(), dirs), Jet::constant(z.imag(), dirs)};
}

CJet CJet::from_real(Jet r) {
    const std::size_t m = r.dirs();
    return {std::move(r), Jet(m)};
}

CJet CJet::embedded(std::size_t total_dirs, std::size_t offset) const {
    return {re.embedded(total_dirs, offset), im.embedded(total_dirs, offset)};
}

CJet cexp(const CJet& z) {
    const Jet mag = exp(z.re);
    return {mag * cos(z.im), mag * sin(z.im)};
}

} // namespace warplag
