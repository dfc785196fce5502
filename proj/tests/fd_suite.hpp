#pragma once

// Finite-difference cross-check suite for the jet engine: composition trees
// covering every primitive, evaluated once with jets and once as plain
// doubles, compared through high-order difference stencils.  Shared by the
// unit tests and the acceptance runner.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "warplag/jet.hpp"

namespace fdsuite {

inline double pow_int(double x, int n) { return std::pow(x, double(n)); }
inline double recip(double x) { return 1.0 / x; }

using std::atan;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

struct F1 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return exp(a[0] * a[1]) + pow_int(a[0], 3) * a[1];
    }
};

struct F2 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return sin(a[0]) * cos(a[1]) + atan(a[0] / (1.0 + a[1] * a[1]));
    }
};

struct F3 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return log(1.0 + a[0] * a[0] + a[1] * a[1]) * sqrt(2.0 + sin(a[0]));
    }
};

struct F4 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return atan2(a[1], 1.0 + a[0] * a[0]) + recip(2.0 + cos(a[0] + a[1]));
    }
};

struct F5 {
    static constexpr std::size_t arity = 1;
    template <class T>
    static T eval(const std::array<T, 1>& a) {
        return exp(sin(a[0]) + cos(a[0] * a[0]));
    }
};

struct F6 {
    static constexpr std::size_t arity = 3;
    template <class T>
    static T eval(const std::array<T, 3>& a) {
        return (a[0] * a[1] * a[2]) / (1.0 + a[2] * a[2]) +
               sqrt(4.0 + a[0]) * atan2(1.0 + a[1], 2.0 + a[2]);
    }
};

struct F7 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return pow_int(1.0 + a[0] * a[0] + a[1] * a[1], -2);
    }
};

struct F8 {
    static constexpr std::size_t arity = 2;
    template <class T>
    static T eval(const std::array<T, 2>& a) {
        return (-a[0] + sin(a[1])) / (3.0 + cos(a[0] * a[1])) - pow_int(a[1], 2) * a[0];
    }
};

struct SuiteResult {
    double max_consistency = 0.0; // multi-direction storage vs directional jet
    double max_fd_err = 0.0;      // directional jet vs difference stencils
};

namespace detail {

inline void fold(SuiteResult& out, double consistency, double fd) {
    if (consistency > out.max_consistency) out.max_consistency = consistency;
    if (fd > out.max_fd_err) out.max_fd_err = fd;
}

template <class F, std::size_t M>
void check_at(const std::array<double, M>& p, const std::array<double, M>& dir,
              SuiteResult& out) {
    using warplag::Jet;

    std::array<Jet, M> full;
    for (std::size_t i = 0; i < M; ++i) full[i] = Jet::variable(p[i], M, i);
    const Jet jm = F::eval(full);

    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        c1 += dir[i] * jm.d1(i);
        for (std::size_t j = 0; j < M; ++j) {
            c2 += dir[i] * dir[j] * jm.d2(i, j);
            for (std::size_t k = 0; k < M; ++k) c3 += dir[i] * dir[j] * dir[k] * jm.d3(i, j, k);
        }
    }

    std::array<Jet, M> line;
    for (std::size_t i = 0; i < M; ++i)
        line[i] = Jet::constant(p[i], 1) + dir[i] * Jet::variable(0.0, 1, 0);
    const Jet j1 = F::eval(line);

    const double scale1 = 1.0 + std::abs(j1.d1(0));
    const double scale2 = 1.0 + std::abs(j1.d2(0, 0));
    const double scale3 = 1.0 + std::abs(j1.d3(0, 0, 0));
    const double consistency =
        std::max({std::abs(c1 - j1.d1(0)) / scale1, std::abs(c2 - j1.d2(0, 0)) / scale2,
                  std::abs(c3 - j1.d3(0, 0, 0)) / scale3,
                  std::abs(jm.value() - j1.value()) / (1.0 + std::abs(jm.value()))});

    const auto phi = [&](double s) {
        std::array<double, M> q;
        for (std::size_t i = 0; i < M; ++i) q[i] = p[i] + s * dir[i];
        return F::eval(q);
    };
    const double h1 = 1e-3;
    const double fd1 =
        (-phi(2 * h1) + 8 * phi(h1) - 8 * phi(-h1) + phi(-2 * h1)) / (12 * h1);
    const double h2 = 1e-3;
    const double fd2 = (-phi(2 * h2) + 16 * phi(h2) - 30 * phi(0.0) + 16 * phi(-h2) -
                        phi(-2 * h2)) /
                       (12 * h2 * h2);
    const double h3 = 5e-3;
    const double fd3 = (phi(-3 * h3) - 8 * phi(-2 * h3) + 13 * phi(-h3) - 13 * phi(h3) +
                        8 * phi(2 * h3) - phi(3 * h3)) /
                       (8 * h3 * h3 * h3);

    const double fd_err =
        std::max({std::abs(j1.d1(0) - fd1) / scale1, std::abs(j1.d2(0, 0) - fd2) / scale2,
                  std::abs(j1.d3(0, 0, 0) - fd3) / scale3});
    fold(out, consistency, fd_err);
}

template <class F>
void run_one(SuiteResult& out) {
    if constexpr (F::arity == 1) {
        const std::array<std::array<double, 1>, 3> pts{{{0.3}, {-0.7}, {1.1}}};
        const std::array<std::array<double, 1>, 2> dirs{{{1.0}, {-0.8}}};
        for (const auto& p : pts)
            for (const auto& v : dirs) check_at<F>(p, v, out);
    } else if constexpr (F::arity == 2) {
        const std::array<std::array<double, 2>, 3> pts{
            {{0.4, -0.3}, {1.2, 0.5}, {-0.6, 0.9}}};
        const std::array<std::array<double, 2>, 2> dirs{{{0.6, -0.8}, {1.0, 0.5}}};
        for (const auto& p : pts)
            for (const auto& v : dirs) check_at<F>(p, v, out);
    } else {
        const std::array<std::array<double, 3>, 2> pts{
            {{0.4, -0.2, 0.7}, {-0.5, 0.8, 0.1}}};
        const std::array<std::array<double, 3>, 2> dirs{{{0.5, 0.5, -0.7}, {-0.3, 0.9, 0.2}}};
        for (const auto& p : pts)
            for (const auto& v : dirs) check_at<F>(p, v, out);
    }
}

} // namespace detail

inline SuiteResult run_all() {
    SuiteResult out;
    detail::run_one<F1>(out);
    detail::run_one<F2>(out);
    detail::run_one<F3>(out);
    detail::run_one<F4>(out);
    detail::run_one<F5>(out);
    detail::run_one<F6>(out);
    detail::run_one<F7>(out);
    detail::run_one<F8>(out);
    return out;
}

} // namespace fdsuite
