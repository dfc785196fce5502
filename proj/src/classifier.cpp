#include "warplag/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "warplag/errors.hpp"
#include "warplag/sampling.hpp"

namespace warplag {

namespace {

double cubic3(const CubicForm& C, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const Eigen::VectorXd& z) {
    const std::size_t n = C.n;
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                s += C.at(a, b, c) * x[static_cast<Eigen::Index>(a)] *
                     y[static_cast<Eigen::Index>(b)] * z[static_cast<Eigen::Index>(c)];
    return s;
}

/// A_{Jv}: the cubic form contracted with v in the normal slot.
Eigen::MatrixXd slice(const CubicForm& C, const Eigen::VectorXd& v) {
    const auto n = static_cast<Eigen::Index>(C.n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            double s = 0.0;
            for (Eigen::Index c = 0; c < n; ++c)
                s += C.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                          static_cast<std::size_t>(c)) *
                     v[c];
            A(a, b) = s;
        }
    return 0.5 * (A + A.transpose());
}

/// Deviation of C from the exact with-point model l1 v^3 + l2 sym(v x P),
/// P = 1 - v v^T.  The defining conditions constrain only the contractions
/// with v, so a chart can admit several admissible directions; the pure
/// complement block of the model is zero, hence this deviation measures how
/// much factor geometry a candidate split leaves behind and the smallest
/// value marks the canonical split.
double two_model_deviation(const CubicForm& C, const Eigen::VectorXd& v, double l1, double l2) {
    const auto n = static_cast<Eigen::Index>(C.n);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - v * v.transpose();
    double dev = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            for (Eigen::Index c = 0; c < n; ++c) {
                const double model =
                    l1 * v[a] * v[b] * v[c] +
                    l2 * (v[a] * P(b, c) + v[b] * P(a, c) + v[c] * P(a, b));
                const double entry = C.at(static_cast<std::size_t>(a),
                                          static_cast<std::size_t>(b),
                                          static_cast<std::size_t>(c));
                dev = std::max(dev, std::abs(entry - model));
            }
    return dev;
}

struct TwoCand {
    DetectionTwo det;
    double dev = 0.0; // full-model deviation, used for preference only
    double gap = 0.0; // |l1 - 2 l2|
};

TwoCand make_two(const Eigen::VectorXd& v, double l1, double l2, double res, double dev) {
    const bool flip = l2 < 0.0 || (l2 == 0.0 && l1 < 0.0);
    TwoCand c;
    c.det.e1.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        c.det.e1[static_cast<std::size_t>(i)] = flip ? -v[i] : v[i];
    c.det.lambda1 = flip ? -l1 : l1;
    c.det.lambda2 = flip ? -l2 : l2;
    c.det.residual = res;
    c.dev = dev;
    c.gap = std::abs(l1 - 2.0 * l2);
    return c;
}

void push_two(std::vector<TwoCand>& out, TwoCand cand) {
    for (auto& ex : out) {
        const double d = std::max(std::abs(ex.det.lambda1 - cand.det.lambda1),
                                  std::abs(ex.det.lambda2 - cand.det.lambda2));
        if (d <= 1e-7 * (1.0 + std::abs(cand.det.lambda2))) {
            if (cand.dev < ex.dev ||
                (cand.dev == ex.dev && cand.det.residual < ex.det.residual))
                ex = std::move(cand);
            return;
        }
    }
    out.push_back(std::move(cand));
}

bool prefer_two(const TwoCand& a, const TwoCand& b) {
    if (a.dev != b.dev) return a.dev < b.dev;
    if (a.gap != b.gap) return a.gap > b.gap;
    return a.det.residual < b.det.residual;
}

/// The n = 2 search is closed-form: v(theta) = (cos, sin) is a distinguished
/// direction iff f(theta) = C(v,v,w) = 0 with w the rotated complement.
/// f is odd under theta -> theta + pi, so roots are scanned on [0, pi).
/// Roots are collected both from sign changes and from grid points where f is
/// already at noise level (a frame-aligned chart puts a root exactly at 0,
/// where the sign of the noise decides whether a crossing exists at all).
std::vector<TwoCand> candidates_dim2(const CubicForm& C, double tol) {
    const auto f = [&](double th) {
        Eigen::VectorXd v(2), w(2);
        v << std::cos(th), std::sin(th);
        w << -std::sin(th), std::cos(th);
        return cubic3(C, v, v, w);
    };
    const auto fprime = [&](double th) {
        Eigen::VectorXd v(2), w(2);
        v << std::cos(th), std::sin(th);
        w << -std::sin(th), std::cos(th);
        return 2.0 * cubic3(C, w, v, w) - cubic3(C, v, v, v);
    };

    constexpr int grid = 256;
    const double pi = std::numbers::pi;
    std::array<double, grid + 1> fv{};
    double max_abs = 0.0;
    for (int i = 0; i <= grid; ++i) {
        fv[static_cast<std::size_t>(i)] = f(pi * i / grid);
        max_abs = std::max(max_abs, std::abs(fv[static_cast<std::size_t>(i)]));
    }
    if (max_abs < 1e-14) return {}; // C vanishes identically in n = 2

    const double near_zero = 1e-11 * (1.0 + max_abs);
    std::vector<double> roots;
    for (int i = 0; i < grid; ++i) {
        const double th_i = pi * i / grid;
        const double fi = fv[static_cast<std::size_t>(i)];
        const double fn = fv[static_cast<std::size_t>(i) + 1];
        if (std::abs(fi) <= near_zero) {
            double th = th_i;
            for (int it = 0; it < 40; ++it) {
                const double ft = f(th), fp = fprime(th);
                if (std::abs(fp) < 1e-14) break;
                const double step = ft / fp;
                th -= step;
                if (std::abs(step) < 1e-15) break;
            }
            roots.push_back(th);
        } else if (fi * fn < 0.0) {
            double lo = th_i, hi = pi * (i + 1) / grid, flo = fi;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    }

    std::vector<TwoCand> out;
    for (const double th : roots) {
        Eigen::VectorXd v(2), w(2);
        v << std::cos(th), std::sin(th);
        w << -std::sin(th), std::cos(th);
        const double l1 = cubic3(C, v, v, v);
        const double l2 = cubic3(C, v, w, w);
        const double res = std::abs(cubic3(C, v, v, w));
        if (res > tol) continue;
        if (std::abs(l1 - 2.0 * l2) < tol) continue;
        push_two(out, make_two(v, l1, l2, res, two_model_deviation(C, v, l1, l2)));
    }
    return out;
}

std::vector<Eigen::VectorXd> start_directions(const CubicForm& C) {
    const auto n = static_cast<Eigen::Index>(C.n);
    std::vector<Eigen::VectorXd> starts;

    for (Eigen::Index a = 0; a < n; ++a)
        starts.push_back(Eigen::VectorXd::Unit(n, a));

    // trace vector: proportional to v for the exact structure
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        double s = 0.0;
        for (Eigen::Index b = 0; b < n; ++b)
            s += C.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                      static_cast<std::size_t>(b));
        tau[a] = s;
    }
    if (tau.norm() > 1e-10) starts.push_back(tau.normalized());

    // Gram matrix Q_ab = C(a,.,.) : C(b,.,.) is diagonalized by the structure
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a; b < n; ++b) {
            double s = 0.0;
            for (Eigen::Index c = 0; c < n; ++c)
                for (Eigen::Index d = 0; d < n; ++d)
                    s += C.at(static_cast<std::size_t>(a), static_cast<std::size_t>(c),
                              static_cast<std::size_t>(d)) *
                         C.at(static_cast<std::size_t>(b), static_cast<std::size_t>(c),
                              static_cast<std::size_t>(d));
            Q(a, b) = Q(b, a) = s;
        }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qes(Q);
    for (Eigen::Index i = 0; i < n; ++i) starts.push_back(qes.eigenvectors().col(i));

    for (const auto& pt : sample_unit(C.n, 4, 0x513eedULL)) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = 2.0 * pt[static_cast<std::size_t>(i)] - 1.0;
        if (v.norm() > 1e-3) starts.push_back(v.normalized());
    }
    return starts;
}

enum class Select { DegenerateComplement, Overlap };

Eigen::VectorXd iterate(const CubicForm& C, Eigen::VectorXd v, Select sel) {
    const Eigen::Index n = v.size();
    for (int it = 0; it < 50; ++it) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slice(C, v));
        const auto& vals = es.eigenvalues(); // ascending
        Eigen::Index pick = 0;
        double best = sel == Select::Overlap ? -1.0 : std::numeric_limits<double>::max();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (sel == Select::Overlap) {
                const double ov = std::abs(es.eigenvectors().col(i).dot(v));
                if (ov > best) {
                    best = ov;
                    pick = i;
                }
            } else {
                const double hi = i == n - 1 ? vals[n - 2] : vals[n - 1];
                const double lo = i == 0 ? vals[1] : vals[0];
                const double spread = hi - lo;
                if (spread < best) {
                    best = spread;
                    pick = i;
                }
            }
        }
        Eigen::VectorXd w = es.eigenvectors().col(pick);
        if (w.dot(v) < 0.0) w = -w;
        const bool done = (w - v).norm() < 1e-13;
        v = w;
        if (done) break;
    }
    return v;
}

struct ComplementSplit {
    double l1 = 0.0;
    double r1 = 0.0; // self-consistency |A v - l1 v|
    std::vector<double> mus;
    std::vector<Eigen::VectorXd> vecs;
};

ComplementSplit complement_spectrum(const CubicForm& C, const Eigen::VectorXd& v) {
    const Eigen::MatrixXd A = slice(C, v);
    ComplementSplit out;
    out.l1 = v.dot(A * v);
    out.r1 = (A * v - out.l1 * v).lpNorm<Eigen::Infinity>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    Eigen::Index skip = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double ov = std::abs(es.eigenvectors().col(i).dot(v));
        if (ov > best) {
            best = ov;
            skip = i;
        }
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i == skip) continue;
        out.mus.push_back(es.eigenvalues()[i]);
        out.vecs.push_back(es.eigenvectors().col(i));
    }
    return out;
}

std::vector<TwoCand> candidates_highdim(const CubicForm& C, double tol) {
    std::vector<TwoCand> out;
    for (const auto& v0 : start_directions(C)) {
        const Eigen::VectorXd v = iterate(C, v0, Select::DegenerateComplement);
        const ComplementSplit sp = complement_spectrum(C, v);
        double mean = 0.0;
        for (const double m : sp.mus) mean += m;
        mean /= static_cast<double>(sp.mus.size());
        double r2 = 0.0;
        for (const double m : sp.mus) r2 = std::max(r2, std::abs(m - mean));
        const double res = std::max(sp.r1, r2);
        if (res > tol) continue;
        if (std::abs(sp.l1 - 2.0 * mean) < tol) continue;
        push_two(out, make_two(v, sp.l1, mean, res, two_model_deviation(C, v, sp.l1, mean)));
    }
    return out;
}

std::vector<TwoCand> two_candidates(const CubicForm& C, double tol) {
    if (C.n == 2) return candidates_dim2(C, tol);
    return candidates_highdim(C, tol);
}

std::optional<DetectionThree> eval_three(const CubicForm& C, const Eigen::VectorXd& v,
                                         double tol) {
    const std::size_t n = C.n;
    ComplementSplit sp = complement_spectrum(C, v);

    // sort complement eigenpairs and split at gaps wider than the merge window
    std::vector<std::size_t> order(sp.mus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sp.mus[a] < sp.mus[b]; });
    std::vector<std::size_t> split_at;
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (sp.mus[order[i + 1]] - sp.mus[order[i]] > 10.0 * tol) split_at.push_back(i + 1);
    if (split_at.size() != 1) return std::nullopt;

    const std::size_t cut = split_at[0];
    double meanA = 0.0, meanB = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < cut; ++i) meanA += sp.mus[order[i]];
    for (std::size_t i = cut; i < order.size(); ++i) meanB += sp.mus[order[i]];
    meanA /= static_cast<double>(cut);
    meanB /= static_cast<double>(order.size() - cut);
    for (std::size_t i = 0; i < cut; ++i)
        r2 = std::max(r2, std::abs(sp.mus[order[i]] - meanA));
    for (std::size_t i = cut; i < order.size(); ++i)
        r2 = std::max(r2, std::abs(sp.mus[order[i]] - meanB));

    // cross-block components C(i, alpha, .) must vanish
    double r3 = 0.0;
    for (std::size_t i = 0; i < cut; ++i)
        for (std::size_t al = cut; al < order.size(); ++al) {
            const Eigen::VectorXd& wi = sp.vecs[order[i]];
            const Eigen::VectorXd& xa = sp.vecs[order[al]];
            for (std::size_t c = 0; c < n; ++c) {
                double s = 0.0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        s += C.at(a, b, c) * wi[static_cast<Eigen::Index>(a)] *
                             xa[static_cast<Eigen::Index>(b)];
                r3 = std::max(r3, std::abs(s));
            }
        }

    const double res = std::max({sp.r1, r2, r3});
    if (res > tol) return std::nullopt;
    if (std::abs(meanA - meanB) < tol) return std::nullopt;
    if (std::abs(sp.l1 - 2.0 * meanA) < tol || std::abs(sp.l1 - 2.0 * meanB) < tol)
        return std::nullopt;

    const std::size_t nA = cut, nB = order.size() - cut;
    const auto canon = [](double a, double b, double c, std::size_t nb,
                          std::size_t nc) -> ThreeLambdas {
        if (c > b) {
            std::swap(b, c);
            std::swap(nb, nc);
        }
        return {a, b, c, nb, nc};
    };
    const ThreeLambdas plus = canon(sp.l1, meanA, meanB, nA, nB);
    const ThreeLambdas minus = canon(-sp.l1, -meanA, -meanB, nA, nB);
    const bool flip =
        plus.l2 != minus.l2 ? minus.l2 > plus.l2 : minus.l1 > plus.l1;
    const ThreeLambdas lam = flip ? minus : plus;

    DetectionThree d;
    d.e1.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        d.e1[i] = flip ? -v[static_cast<Eigen::Index>(i)] : v[static_cast<Eigen::Index>(i)];
    d.lambda1 = lam.l1;
    d.lambda2 = lam.l2;
    d.lambda3 = lam.l3;
    d.n2 = lam.n2;
    d.n3 = lam.n3;
    d.residual = res;
    return d;
}

void push_three(std::vector<DetectionThree>& out, DetectionThree cand) {
    for (auto& ex : out) {
        const double d = std::max({std::abs(ex.lambda1 - cand.lambda1),
                                   std::abs(ex.lambda2 - cand.lambda2),
                                   std::abs(ex.lambda3 - cand.lambda3)});
        if (ex.n2 == cand.n2 && ex.n3 == cand.n3 &&
            d <= 1e-7 * (1.0 + std::abs(cand.lambda2))) {
            if (cand.residual < ex.residual) ex = std::move(cand);
            return;
        }
    }
    out.push_back(std::move(cand));
}

std::vector<DetectionThree> three_candidates(const CubicForm& C, double tol) {
    std::vector<DetectionThree> out;
    for (const auto& v0 : start_directions(C)) {
        const Eigen::VectorXd v = iterate(C, v0, Select::Overlap);
        if (auto cand = eval_three(C, v, tol)) push_three(out, std::move(*cand));
    }
    return out;
}

} // namespace

std::optional<DetectionTwo> detect_e1(const CubicForm& C, double tol) {
    if (C.n < 2) throw ContractViolation("distinguished-direction search needs dimension >= 2");
    auto cands = two_candidates(C, tol);
    if (cands.empty()) return std::nullopt;
    const auto best = std::min_element(cands.begin(), cands.end(), prefer_two);
    return best->det;
}

std::optional<DetectionThree> detect_three(const CubicForm& C, double tol) {
    if (C.n < 3) throw ContractViolation("two-factor detection needs dimension >= 3");
    auto cands = three_candidates(C, tol);
    if (cands.empty()) return std::nullopt;
    const auto best = std::min_element(
        cands.begin(), cands.end(),
        [](const DetectionThree& a, const DetectionThree& b) { return a.residual < b.residual; });
    return *best;
}

const char* verdict_name(VerdictKind kind) {
    switch (kind) {
    case VerdictKind::CalabiWithPoint: return "CalabiWithPoint";
    case VerdictKind::CalabiTwoFactor: return "CalabiTwoFactor";
    case VerdictKind::NotCalabi: return "NotCalabi";
    default: return "Undetermined";
    }
}

ClassifierVerdict classify(const ImmersionChart& chart,
                           const std::vector<std::vector<double>>& samples, double tol) {
    if (samples.empty()) throw ParameterError("classification needs at least one sample point");

    ClassifierVerdict out;
    const std::size_t n = chart.param_dim();

    double worst_lag = 0.0;
    for (const auto& s : samples)
        worst_lag = std::max(worst_lag, lagrangian_residual(chart, s));
    out.diagnostics["max_lagrangian_residual"] = worst_lag;
    if (worst_lag > 1e-8) {
        out.kind = VerdictKind::NotCalabi;
        out.diagnostics["lagrangian_precheck_pass"] = 0.0;
        return out;
    }
    out.diagnostics["lagrangian_precheck_pass"] = 1.0;

    if (n < 2) {
        out.kind = VerdictKind::Undetermined;
        out.diagnostics["dimension"] = static_cast<double>(n);
        return out;
    }

    // Per-sample candidate lists.  A chart can admit several admissible
    // structures at one point (flat homogeneous examples genuinely do), and
    // with a curved factor the spurious ones drift across samples while the
    // product structure stays constant, so the choice is made globally: the
    // chain of nearest candidates anchored at the preferred first-sample
    // candidate wins as soon as it stays inside the acceptance window.
    std::vector<std::vector<TwoCand>> two_lists(samples.size());
    std::vector<std::vector<DetectionThree>> three_lists(samples.size());
    bool any_two = false, any_three = false;
    std::size_t missed = 0;
    double max_nabla = 0.0;
    for (std::size_t si = 0; si < samples.size(); ++si) {
        const CubicForm C = second_fundamental_form(chart, samples[si]);
        max_nabla = std::max(max_nabla, nabla_h(chart, samples[si]).max_abs());
        if (n >= 3) three_lists[si] = three_candidates(C, tol);
        if (!three_lists[si].empty()) {
            any_three = true;
            continue;
        }
        two_lists[si] = two_candidates(C, tol);
        if (!two_lists[si].empty())
            any_two = true;
        else
            ++missed;
    }
    out.parallel_h_residual = max_nabla;
    const double total = static_cast<double>(samples.size());
    out.diagnostics["detection_rate"] = (total - static_cast<double>(missed)) / total;

    if (!any_two && !any_three) {
        out.kind = VerdictKind::NotCalabi;
        out.diagnostics["max_detection_residual"] = 0.0;
        return out;
    }
    if (missed > 0 || (any_two && any_three)) {
        out.kind = VerdictKind::Undetermined;
        return out;
    }

    const bool three_kind = any_three;
    std::vector<std::vector<double>> per_lambda(three_kind ? 3 : 2);
    double max_det_res = 0.0;
    std::vector<double> e1_first;

    if (three_kind) {
        std::vector<const DetectionThree*> chosen(samples.size(), nullptr);
        std::vector<std::size_t> order(three_lists[0].size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return three_lists[0][a].residual < three_lists[0][b].residual;
        });
        bool chained = false;
        for (const std::size_t idx : order) {
            const DetectionThree& ref = three_lists[0][idx];
            const double window =
                10.0 * tol *
                (1.0 + std::max({std::abs(ref.lambda1), std::abs(ref.lambda2),
                                 std::abs(ref.lambda3)}));
            bool ok = true;
            std::vector<const DetectionThree*> pick(samples.size(), &ref);
            for (std::size_t si = 1; si < samples.size() && ok; ++si) {
                const DetectionThree* best = nullptr;
                double bd = std::numeric_limits<double>::max();
                for (const auto& c : three_lists[si]) {
                    if (c.n2 != ref.n2 || c.n3 != ref.n3) continue;
                    const double d = std::max({std::abs(c.lambda1 - ref.lambda1),
                                               std::abs(c.lambda2 - ref.lambda2),
                                               std::abs(c.lambda3 - ref.lambda3)});
                    if (d < bd) {
                        bd = d;
                        best = &c;
                    }
                }
                if (!best || bd > window)
                    ok = false;
                else
                    pick[si] = best;
            }
            if (ok) {
                chosen = pick;
                chained = true;
                break;
            }
        }
        if (!chained)
            for (std::size_t si = 0; si < samples.size(); ++si)
                chosen[si] = &*std::min_element(
                    three_lists[si].begin(), three_lists[si].end(),
                    [](const DetectionThree& a, const DetectionThree& b) {
                        return a.residual < b.residual;
                    });

        for (std::size_t si = 1; si < samples.size(); ++si)
            if (chosen[si]->n2 != chosen[0]->n2 || chosen[si]->n3 != chosen[0]->n3) {
                out.kind = VerdictKind::Undetermined;
                out.diagnostics["block_dims_consistent"] = 0.0;
                return out;
            }
        for (const auto* d : chosen) {
            per_lambda[0].push_back(d->lambda1);
            per_lambda[1].push_back(d->lambda2);
            per_lambda[2].push_back(d->lambda3);
            max_det_res = std::max(max_det_res, d->residual);
        }
        out.block_dims = {chosen[0]->n2, chosen[0]->n3};
        e1_first = chosen[0]->e1;
    } else {
        std::vector<const TwoCand*> chosen(samples.size(), nullptr);
        std::vector<std::size_t> order(two_lists[0].size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return prefer_two(two_lists[0][a], two_lists[0][b]);
        });
        bool chained = false;
        for (const std::size_t idx : order) {
            const TwoCand& ref = two_lists[0][idx];
            const double window =
                10.0 * tol *
                (1.0 + std::max(std::abs(ref.det.lambda1), std::abs(ref.det.lambda2)));
            bool ok = true;
            std::vector<const TwoCand*> pick(samples.size(), &ref);
            for (std::size_t si = 1; si < samples.size() && ok; ++si) {
                const TwoCand* best = nullptr;
                double bd = std::numeric_limits<double>::max();
                for (const auto& c : two_lists[si]) {
                    const double d = std::max(std::abs(c.det.lambda1 - ref.det.lambda1),
                                              std::abs(c.det.lambda2 - ref.det.lambda2));
                    if (d < bd) {
                        bd = d;
                        best = &c;
                    }
                }
                if (!best || bd > window)
                    ok = false;
                else
                    pick[si] = best;
            }
            if (ok) {
                chosen = pick;
                chained = true;
                break;
            }
        }
        if (!chained)
            for (std::size_t si = 0; si < samples.size(); ++si)
                chosen[si] = &*std::min_element(two_lists[si].begin(), two_lists[si].end(),
                                                prefer_two);

        for (const auto* c : chosen) {
            per_lambda[0].push_back(c->det.lambda1);
            per_lambda[1].push_back(c->det.lambda2);
            max_det_res = std::max(max_det_res, c->det.residual);
        }
        out.block_dims = {n - 1};
        e1_first = chosen[0]->det.e1;
    }
    out.diagnostics["max_detection_residual"] = max_det_res;

    double max_spread = 0.0;
    for (const auto& vals : per_lambda) {
        const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
        double mean = 0.0;
        for (const double x : vals) mean += x;
        mean /= static_cast<double>(vals.size());
        out.lambdas.push_back(mean);
        out.spreads.push_back(*hi - *lo);
        max_spread = std::max(max_spread, *hi - *lo);
    }
    out.diagnostics["lambda_spread_max"] = max_spread;
    out.constancy = max_spread <= tol;

    if (out.constancy) {
        out.kind = three_kind ? VerdictKind::CalabiTwoFactor : VerdictKind::CalabiWithPoint;
    } else if (max_spread > 10.0 * tol) {
        out.kind = VerdictKind::NotCalabi;
    } else {
        out.kind = VerdictKind::Undetermined;
    }

    // distinguished direction in ambient coordinates, from the first sample
    const FrameData frame = frame_at(chart, samples[0]);
    out.e1_ambient.assign(chart.ambient_complex_dim(), {0.0, 0.0});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < out.e1_ambient.size(); ++k)
            out.e1_ambient[k] += e1_first[a] * frame.tangent_frame[a][k];

    if (out.kind == VerdictKind::CalabiWithPoint || out.kind == VerdictKind::CalabiTwoFactor) {
        if (chart.signature() == Signature::Lorentz) {
            out.minimal = false; // CH products are never minimal
        } else if (out.kind == VerdictKind::CalabiWithPoint) {
            const double target = 1.0 / std::sqrt(static_cast<double>(n));
            out.minimal = std::abs(std::abs(out.lambdas[1]) - target) <= tol;
        } else {
            const double trace = out.lambdas[0] +
                                 static_cast<double>(out.block_dims[0]) * out.lambdas[1] +
                                 static_cast<double>(out.block_dims[1]) * out.lambdas[2];
            out.minimal = std::abs(trace) <= static_cast<double>(n) * tol;
        }
    }
    return out;
}

double parallel_residual(const ImmersionChart& chart,
                         const std::vector<std::vector<double>>& samples) {
    double worst = 0.0;
    for (const auto& s : samples) {
        const double lag = lagrangian_residual(chart, s);
        if (lag > 1e-8)
            throw NotLagrangian("chart fails the Lagrangian precheck (residual " +
                                std::to_string(lag) + ")");
        worst = std::max(worst, nabla_h(chart, s).max_abs());
    }
    return worst;
}

ParallelReport parallel_report(const WarpedProductChart& chart,
                               const std::vector<std::vector<double>>& samples) {
    const int which = chart.factor(0).dim() > 0 ? 0 : 1;
    if (chart.factor(which).dim() == 0 || chart.factor(1 - which).dim() != 0)
        throw ParameterError(
            "block comparison needs a product of one nontrivial factor and a point");

    const ImmersionChart& fchart = *chart.factor(which).chart;
    const auto [plo, phi] = chart.factor_params(which);

    ParallelReport rep;
    for (const auto& u : samples) {
        const NablaH D = nabla_h(chart, u);
        rep.total_max = std::max(rep.total_max, D.max_abs());

        const std::vector<double> uf(u.begin() + static_cast<std::ptrdiff_t>(plo),
                                     u.begin() + static_cast<std::ptrdiff_t>(phi));
        const NablaH D1 = nabla_h(fchart, uf);
        const double w1 = chart.warp_moduli(u[0])[static_cast<std::size_t>(which)];
        const double scale = w1 * w1;

        const std::size_t n = chart.param_dim();
        for (std::size_t w = 0; w < n; ++w)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t c = 0; c < n; ++c) {
                        const bool inside = w >= plo && w < phi && a >= plo && a < phi &&
                                            b >= plo && b < phi && c >= plo && c < phi;
                        if (inside) {
                            const double dev = std::abs(
                                scale * D.at(w, a, b, c) -
                                D1.at(w - plo, a - plo, b - plo, c - plo));
                            rep.factor_block_dev = std::max(rep.factor_block_dev, dev);
                        } else {
                            rep.off_block_max =
                                std::max(rep.off_block_max, std::abs(D.at(w, a, b, c)));
                        }
                    }
    }
    return rep;
}

} // namespace warplag
