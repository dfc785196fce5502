#include "warplag/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace warplag {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights (the embedded solution uses the FSAL stage too).
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace

std::vector<double> integrate_dp45(
    const OdeRhs& f, std::vector<double> y, double t0, double& t1, double tol,
    const std::function<bool(double, const std::vector<double>&)>& monitor) {
    const std::size_t n = y.size();
    const double span = t1 - t0;
    if (span == 0.0) return y;
    const double dir = span > 0.0 ? 1.0 : -1.0;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
    double t = t0;
    double h = span / 100.0;
    const double hmax = std::abs(span);
    std::size_t steps = 0;
    const std::size_t max_steps = 2000000;

    f(t, y, k1);
    while (dir * (t1 - t) > 0.0) {
        if (++steps > max_steps) throw Error("ODE integration exceeded the step budget");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                          e6 * k6[i] + e7 * k7[i]);
            const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(y5[i] - y4) / scale);
        }

        if (err <= tol) {
            t += h;
            y.swap(y5);
            k1.swap(k7); // FSAL
            if (monitor && !monitor(t, y)) {
                t1 = t;
                return y;
            }
        }
        const double safety =
            0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
        h *= std::clamp(safety, 0.2, 5.0);
        h = dir * std::min(std::abs(h), hmax);
        if (std::abs(h) < 1e-14 * hmax) throw Error("ODE step size underflow");
    }
    return y;
}

std::vector<double> integrate_dp45(const OdeRhs& f, std::vector<double> y0, double t0, double t1,
                                   double tol) {
    double tend = t1;
    auto y = integrate_dp45(f, std::move(y0), t0, tend, tol, nullptr);
    return y;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double quad_rec(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0) throw Error("quadrature recursion limit reached");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return quad_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           quad_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return quad_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

} // namespace warplag
