#include "warplag/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

constexpr double kGramDetFloor = 1e-12;
constexpr double kLagrangianTol = 1e-8;

/// Shared jet evaluation at a point, with signature-aware inner products of
/// extracted derivative vectors.
struct Eval {
    const ImmersionChart& chart;
    HermitianSpace space;
    std::size_t n; // parameters
    std::size_t N; // ambient complex coordinates
    std::vector<CJet> jets;

    Eval(const ImmersionChart& c, std::span<const double> u)
        : chart(c), space(c.space()), n(c.param_dim()), N(c.ambient_complex_dim()),
          jets(c.eval_jet(u)) {}

    CVector point() const {
        CVector z(N);
        for (std::size_t k = 0; k < N; ++k) z[k] = jets[k].value();
        return z;
    }
    CVector d1(std::size_t a) const {
        CVector z(N);
        for (std::size_t k = 0; k < N; ++k) z[k] = {jets[k].re.d1(a), jets[k].im.d1(a)};
        return z;
    }
    CVector d2(std::size_t a, std::size_t b) const {
        CVector z(N);
        for (std::size_t k = 0; k < N; ++k) z[k] = {jets[k].re.d2(a, b), jets[k].im.d2(a, b)};
        return z;
    }
    CVector d3(std::size_t a, std::size_t b, std::size_t c) const {
        CVector z(N);
        for (std::size_t k = 0; k < N; ++k)
            z[k] = {jets[k].re.d3(a, b, c), jets[k].im.d3(a, b, c)};
        return z;
    }
    double ip(const CVector& x, const CVector& y) const { return real_inner(x, y, space); }
};

/// Everything downstream of the metric: frame, Christoffel symbols, and the
/// ingredients shared by the curvature checks.
struct Geom {
    Eval ev;
    std::size_t n;
    std::vector<CVector> T;        // coordinate tangents
    Eigen::MatrixXd G;             // metric
    Eigen::MatrixXd Ginv;
    Eigen::MatrixXd Bm;            // frame coefficients, row a = E_a
    double det = 0.0;
    std::vector<CVector> E;        // orthonormal frame
    std::vector<double> dg;        // dg[a][b][d] = d_a g_bd
    std::vector<double> gamma;     // Gamma^c_ab

    double dgv(std::size_t a, std::size_t b, std::size_t d) const {
        return dg[(a * n + b) * n + d];
    }
    double gam(std::size_t a, std::size_t b, std::size_t c) const {
        return gamma[(a * n + b) * n + c];
    }

    explicit Geom(const ImmersionChart& chart, std::span<const double> u) : ev(chart, u), n(ev.n) {
        if (n == 0) throw ContractViolation("geometry needs at least one parameter");
        T.resize(n);
        for (std::size_t a = 0; a < n; ++a) T[a] = ev.d1(a);

        G.resize(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) G(a, b) = ev.ip(T[a], T[b]);

        Eigen::LLT<Eigen::MatrixXd> llt(G);
        det = G.determinant();
        if (llt.info() != Eigen::Success || det < kGramDetFloor)
            throw RankDeficient("induced metric is numerically degenerate (det = " +
                                std::to_string(det) + ")");
        // E = L^{-1} T is exactly Gram-Schmidt in coordinate order.
        const Eigen::MatrixXd L = llt.matrixL();
        Bm = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
        Ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));

        E.assign(n, CVector(ev.N));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t d = 0; d <= a; ++d)
                for (std::size_t k = 0; k < ev.N; ++k) E[a][k] += Bm(a, d) * T[d][k];

        dg.assign(n * n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t d = 0; d < n; ++d)
                    dg[(a * n + b) * n + d] =
                        ev.ip(ev.d2(a, b), T[d]) + ev.ip(T[b], ev.d2(a, d));

        gamma.assign(n * n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    double s = 0.0;
                    for (std::size_t d = 0; d < n; ++d)
                        s += Ginv(c, d) * (dgv(a, b, d) + dgv(b, a, d) - dgv(d, a, b));
                    gamma[(a * n + b) * n + c] = 0.5 * s;
                }
    }

    /// Coordinate cubic form S_abc = <psi_ab, J psi_c>.
    std::vector<double> coordinate_cubic() const {
        std::vector<double> S(n * n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                const CVector pab = ev.d2(a, b);
                for (std::size_t c = 0; c < n; ++c) {
                    const double v = ev.ip(pab, apply_J(T[c]));
                    S[(a * n + b) * n + c] = v;
                    S[(b * n + a) * n + c] = v;
                }
            }
        return S;
    }

    /// Frame transform of a cubic tensor: C = B (x) B (x) B applied to S.
    std::vector<double> frame_cubic(const std::vector<double>& S) const {
        std::vector<double> C(n * n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    double acc = 0.0;
                    for (std::size_t p = 0; p <= a; ++p)
                        for (std::size_t q = 0; q <= b; ++q)
                            for (std::size_t r = 0; r <= c; ++r)
                                acc += Bm(a, p) * Bm(b, q) * Bm(c, r) * S[(p * n + q) * n + r];
                    C[(a * n + b) * n + c] = acc;
                }
        return C;
    }

    double lagrangian() const {
        const CVector psi = ev.point();
        const CVector jpsi = apply_J(psi);
        double worst = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            worst = std::max(worst, std::abs(ev.ip(E[a], jpsi)));
            const CVector je = apply_J(E[a]);
            for (std::size_t b = 0; b < n; ++b)
                worst = std::max(worst, std::abs(ev.ip(je, E[b])));
        }
        return worst;
    }

    void require_lagrangian() const {
        const double r = lagrangian();
        if (r > kLagrangianTol)
            throw NotLagrangian("chart is not Lagrangian at this point (residual = " +
                                std::to_string(r) + ")");
    }
};

} // namespace

FrameData frame_at(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    FrameData f;
    f.n = g.n;
    f.point = g.ev.point();
    f.coord_tangents = g.T;
    f.tangent_frame = g.E;
    f.metric.resize(g.n * g.n);
    f.frame_coeff.resize(g.n * g.n);
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = 0; b < g.n; ++b) {
            f.metric[a * g.n + b] = g.G(a, b);
            f.frame_coeff[a * g.n + b] = g.Bm(a, b);
        }
    f.christoffel = g.gamma;
    f.gram_det = g.det;
    return f;
}

double lagrangian_residual(const ImmersionChart& chart, std::span<const double> u) {
    return Geom(chart, u).lagrangian();
}

CubicForm second_fundamental_form(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    g.require_lagrangian();
    const std::size_t n = g.n;

    CubicForm out;
    out.n = n;
    out.C = g.frame_cubic(g.coordinate_cubic());

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const double v = out.at(a, b, c);
                out.sym_dev = std::max(out.sym_dev, std::abs(v - out.at(b, a, c)));
                out.sym_dev = std::max(out.sym_dev, std::abs(v - out.at(a, c, b)));
            }

    const CVector psi = g.ev.point();
    const CVector jpsi = apply_J(psi);
    const double jpsi_scale = std::abs(g.ev.ip(jpsi, jpsi));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const CVector pab = g.ev.d2(a, b);
            for (std::size_t c = 0; c < n; ++c) {
                double tang = 0.0;
                for (std::size_t d = 0; d < n; ++d)
                    tang += g.Ginv(c, d) * g.ev.ip(pab, g.T[d]);
                out.tangent_crosscheck =
                    std::max(out.tangent_crosscheck, std::abs(tang - g.gam(a, b, c)));
            }
            out.fiber_dev =
                std::max(out.fiber_dev, std::abs(g.ev.ip(pab, jpsi)) / jpsi_scale);
        }
    return out;
}

MeanCurvature mean_curvature(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    g.require_lagrangian();
    const std::size_t n = g.n, N = g.ev.N;
    const double c = chart.curvature();
    const CVector psi = g.ev.point();

    CVector H(N);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            const double w = g.Ginv(p, q) / double(n);
            if (w == 0.0) continue;
            CVector Npq = g.ev.d2(p, q);
            for (std::size_t d = 0; d < n; ++d)
                for (std::size_t k = 0; k < N; ++k) Npq[k] -= g.gam(p, q, d) * g.T[d][k];
            for (std::size_t k = 0; k < N; ++k) Npq[k] += c * g.G(p, q) * psi[k];
            for (std::size_t k = 0; k < N; ++k) H[k] += w * Npq[k];
        }
    const double norm2 = g.ev.ip(H, H);
    return {H, std::sqrt(std::max(norm2, 0.0))};
}

namespace {

std::vector<double> nabla_cubic_frame(const Geom& g) {
    const std::size_t n = g.n;
    const auto S = g.coordinate_cubic();
    const auto sv = [&](std::size_t a, std::size_t b, std::size_t c) {
        return S[(a * n + b) * n + c];
    };

    // Coordinate covariant derivative of S.
    std::vector<double> nS(n * n * n * n);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const CVector pwab = g.ev.d3(w, a, b);
                const CVector pab = g.ev.d2(a, b);
                for (std::size_t c = 0; c < n; ++c) {
                    double v = g.ev.ip(pwab, apply_J(g.T[c])) +
                               g.ev.ip(pab, apply_J(g.ev.d2(w, c)));
                    for (std::size_t d = 0; d < n; ++d)
                        v -= g.gam(w, a, d) * sv(d, b, c) + g.gam(w, b, d) * sv(a, d, c) +
                             g.gam(w, c, d) * sv(a, b, d);
                    nS[((w * n + a) * n + b) * n + c] = v;
                }
            }

    std::vector<double> D(n * n * n * n, 0.0);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    double acc = 0.0;
                    for (std::size_t p = 0; p <= w; ++p)
                        for (std::size_t q = 0; q <= a; ++q)
                            for (std::size_t r = 0; r <= b; ++r)
                                for (std::size_t s = 0; s <= c; ++s)
                                    acc += g.Bm(w, p) * g.Bm(a, q) * g.Bm(b, r) * g.Bm(c, s) *
                                           nS[((p * n + q) * n + r) * n + s];
                    D[((w * n + a) * n + b) * n + c] = acc;
                }
    return D;
}

} // namespace

double NablaH::max_abs() const {
    double m = 0.0;
    for (double v : D) m = std::max(m, std::abs(v));
    return m;
}

NablaH nabla_h(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    g.require_lagrangian();
    NablaH out;
    out.n = g.n;
    out.D = nabla_cubic_frame(g);
    return out;
}

double gauss_residual(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    g.require_lagrangian();
    const std::size_t n = g.n;
    const double c = chart.curvature();
    const auto C = g.frame_cubic(g.coordinate_cubic());
    const auto cv = [&](std::size_t a, std::size_t b, std::size_t cc) {
        return C[(a * n + b) * n + cc];
    };

    // Second metric derivatives d_w d_a g_bd.
    std::vector<double> ddg(n * n * n * n);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t d = 0; d < n; ++d)
                    ddg[((w * n + a) * n + b) * n + d] =
                        g.ev.ip(g.ev.d3(w, a, b), g.T[d]) + g.ev.ip(g.ev.d2(a, b), g.ev.d2(w, d)) +
                        g.ev.ip(g.ev.d2(w, b), g.ev.d2(a, d)) + g.ev.ip(g.T[b], g.ev.d3(w, a, d));

    // d_w Ginv = -Ginv (d_w G) Ginv.
    std::vector<Eigen::MatrixXd> dGinv(n);
    for (std::size_t w = 0; w < n; ++w) {
        Eigen::MatrixXd dG(n, n);
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t d = 0; d < n; ++d) dG(b, d) = g.dgv(w, b, d);
        dGinv[w] = -g.Ginv * dG * g.Ginv;
    }

    // d_w Gamma^c_ab.
    std::vector<double> dgam(n * n * n * n);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t cc = 0; cc < n; ++cc) {
                    double s = 0.0;
                    for (std::size_t d = 0; d < n; ++d) {
                        s += dGinv[w](cc, d) * (g.dgv(a, b, d) + g.dgv(b, a, d) - g.dgv(d, a, b));
                        s += g.Ginv(cc, d) * (ddg[((w * n + a) * n + b) * n + d] +
                                              ddg[((w * n + b) * n + a) * n + d] -
                                              ddg[((w * n + d) * n + a) * n + b]);
                    }
                    dgam[((w * n + a) * n + b) * n + cc] = 0.5 * s;
                }
    const auto dgm = [&](std::size_t w, std::size_t a, std::size_t b, std::size_t cc) {
        return dgam[((w * n + a) * n + b) * n + cc];
    };

    // R^d_abc, then lower and move to the frame.
    std::vector<double> R(n * n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = 0; cc < n; ++cc)
                for (std::size_t d = 0; d < n; ++d) {
                    double v = dgm(a, b, cc, d) - dgm(b, a, cc, d);
                    for (std::size_t e = 0; e < n; ++e)
                        v += g.gam(b, cc, e) * g.gam(a, e, d) - g.gam(a, cc, e) * g.gam(b, e, d);
                    R[((a * n + b) * n + cc) * n + d] = v;
                }
    std::vector<double> Rl(n * n * n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = 0; cc < n; ++cc)
                for (std::size_t d = 0; d < n; ++d) {
                    double v = 0.0;
                    for (std::size_t e = 0; e < n; ++e)
                        v += g.G(e, d) * R[((a * n + b) * n + cc) * n + e];
                    Rl[((a * n + b) * n + cc) * n + d] = v;
                }

    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = 0; cc < n; ++cc)
                for (std::size_t d = 0; d < n; ++d) {
                    double rf = 0.0;
                    for (std::size_t p = 0; p <= a; ++p)
                        for (std::size_t q = 0; q <= b; ++q)
                            for (std::size_t r = 0; r <= cc; ++r)
                                for (std::size_t s = 0; s <= d; ++s)
                                    rf += g.Bm(a, p) * g.Bm(b, q) * g.Bm(cc, r) * g.Bm(d, s) *
                                          Rl[((p * n + q) * n + r) * n + s];
                    double rhs = c * ((a == d && b == cc ? 1.0 : 0.0) -
                                      (a == cc && b == d ? 1.0 : 0.0));
                    for (std::size_t e = 0; e < n; ++e)
                        rhs += cv(a, d, e) * cv(b, cc, e) - cv(a, cc, e) * cv(b, d, e);
                    worst = std::max(worst, std::abs(rf - rhs));
                }
    return worst;
}

double codazzi_residual(const ImmersionChart& chart, std::span<const double> u) {
    Geom g(chart, u);
    g.require_lagrangian();
    const std::size_t n = g.n;
    const auto D = nabla_cubic_frame(g);
    const auto dv = [&](std::size_t w, std::size_t a, std::size_t b, std::size_t c) {
        return D[((w * n + a) * n + b) * n + c];
    };
    double slot_swap = 0.0, last_swap = 0.0;
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    slot_swap = std::max(slot_swap, std::abs(dv(w, a, b, c) - dv(a, w, b, c)));
                    last_swap = std::max(last_swap, std::abs(dv(w, a, b, c) - dv(w, a, c, b)));
                }
    return slot_swap + last_swap;
}

} // namespace warplag
