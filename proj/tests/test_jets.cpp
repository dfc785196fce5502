#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "fd_suite.hpp"
#include "warplag/jet.hpp"

using warplag::CJet;
using warplag::Jet;

TEST_CASE("polynomial jet matches hand derivatives") {
    const Jet t = Jet::variable(3.0, 1, 0);
    const Jet p = t * t;
    CHECK(p.value() == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(p.d1(0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(p.d2(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p.d3(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-15));

    const Jet q = t * t * t - 2.0 * t + 5.0;
    CHECK(q.value() == doctest::Approx(26.0));
    CHECK(q.d1(0) == doctest::Approx(25.0));
    CHECK(q.d2(0, 0) == doctest::Approx(18.0));
    CHECK(q.d3(0, 0, 0) == doctest::Approx(6.0));
}

TEST_CASE("chain rule through sin of square") {
    const double a = 0.7;
    const Jet t = Jet::variable(a, 1, 0);
    const Jet f = sin(t * t);
    const double s = std::sin(a * a), c = std::cos(a * a);
    CHECK(f.value() == doctest::Approx(s).epsilon(1e-14));
    CHECK(f.d1(0) == doctest::Approx(2 * a * c).epsilon(1e-14));
    CHECK(f.d2(0, 0) == doctest::Approx(2 * c - 4 * a * a * s).epsilon(1e-13));
    // f''' = -12 a s - 8 a^3 c
    CHECK(f.d3(0, 0, 0) == doctest::Approx(-12 * a * s - 8 * a * a * a * c).epsilon(1e-13));
}

TEST_CASE("mixed partial derivatives of exp(xy) + x^3 y") {
    const double x = 0.5, y = -0.3;
    const Jet jx = Jet::variable(x, 2, 0);
    const Jet jy = Jet::variable(y, 2, 1);
    const Jet f = exp(jx * jy) + pow_int(jx, 3) * jy;
    const double e = std::exp(x * y);

    CHECK(f.value() == doctest::Approx(e + x * x * x * y).epsilon(1e-14));
    CHECK(f.d1(0) == doctest::Approx(y * e + 3 * x * x * y).epsilon(1e-14));
    CHECK(f.d1(1) == doctest::Approx(x * e + x * x * x).epsilon(1e-14));
    CHECK(f.d2(0, 1) == doctest::Approx(e * (1 + x * y) + 3 * x * x).epsilon(1e-13));
    CHECK(f.d2(1, 0) == doctest::Approx(f.d2(0, 1)).epsilon(1e-15));
    CHECK(f.d3(0, 1, 1) == doctest::Approx(e * (2 * x + x * x * y)).epsilon(1e-13));
    CHECK(f.d3(0, 0, 1) == doctest::Approx(e * (2 * y + x * y * y) + 6 * x).epsilon(1e-13));
    CHECK(f.d3(1, 1, 1) == doctest::Approx(x * x * x * e).epsilon(1e-13));
    // symmetry of the stored tensors
    CHECK(f.d3(1, 0, 1) == doctest::Approx(f.d3(0, 1, 1)).epsilon(1e-15));
    CHECK(f.d3(1, 1, 0) == doctest::Approx(f.d3(0, 1, 1)).epsilon(1e-15));
}

TEST_CASE("compose agrees with the built-in exp") {
    const Jet t = Jet::variable(0.4, 2, 0) * Jet::variable(-1.1, 2, 1);
    const double v = t.value();
    const double ev = std::exp(v);
    const Jet via_compose = t.compose(ev, ev, ev, ev);
    const Jet direct = exp(t);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(via_compose.d1(i) == doctest::Approx(direct.d1(i)).epsilon(1e-14));
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(via_compose.d2(i, j) == doctest::Approx(direct.d2(i, j)).epsilon(1e-14));
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(via_compose.d3(i, j, k) ==
                      doctest::Approx(direct.d3(i, j, k)).epsilon(1e-13));
        }
    }
}

TEST_CASE("embedded jets only populate their own direction slots") {
    const Jet one_dir = sin(Jet::variable(0.9, 1, 0));
    // place the single direction at offset 2 of a 4-direction jet
    const warplag::CJet cj = warplag::CJet::from_real(one_dir).embedded(4, 2);
    const Jet& g = cj.re;
    CHECK(g.value() == doctest::Approx(one_dir.value()));
    CHECK(g.d1(2) == doctest::Approx(one_dir.d1(0)));
    CHECK(g.d2(2, 2) == doctest::Approx(one_dir.d2(0, 0)));
    CHECK(g.d3(2, 2, 2) == doctest::Approx(one_dir.d3(0, 0, 0)));
    for (std::size_t i = 0; i < 4; ++i) {
        if (i != 2) CHECK(g.d1(i) == 0.0);
        for (std::size_t j = 0; j < 4; ++j) {
            if (i != 2 || j != 2) CHECK(g.d2(i, j) == 0.0);
            for (std::size_t k = 0; k < 4; ++k)
                if (i != 2 || j != 2 || k != 2) CHECK(g.d3(i, j, k) == 0.0);
        }
    }
}

TEST_CASE("difference-stencil sweep over the primitive set") {
    const auto r = fdsuite::run_all();
    CHECK(r.max_consistency < 1e-10);
    CHECK(r.max_fd_err < 1e-6);
}

TEST_CASE("complex exponential jet") {
    const Jet t = Jet::variable(0.6, 1, 0);
    const CJet z(0.3 * t, 2.0 * t); // z(t) = (0.3 + 2i) t
    const CJet w = cexp(z);
    const std::complex<double> zc(0.3 * 0.6, 2.0 * 0.6);
    const std::complex<double> wv = std::exp(zc);
    CHECK(std::abs(w.value() - wv) < 1e-14);
    // w' = z' w with z' = 0.3 + 2i
    const std::complex<double> zp(0.3, 2.0);
    const std::complex<double> wp = zp * wv;
    CHECK(w.re.d1(0) == doctest::Approx(wp.real()).epsilon(1e-13));
    CHECK(w.im.d1(0) == doctest::Approx(wp.imag()).epsilon(1e-13));
    const std::complex<double> wpp = zp * zp * wv;
    CHECK(w.re.d2(0, 0) == doctest::Approx(wpp.real()).epsilon(1e-12));
    CHECK(w.im.d2(0, 0) == doctest::Approx(wpp.imag()).epsilon(1e-12));
    const std::complex<double> wppp = zp * zp * zp * wv;
    CHECK(w.re.d3(0, 0, 0) == doctest::Approx(wppp.real()).epsilon(1e-11));
    CHECK(w.im.d3(0, 0, 0) == doctest::Approx(wppp.imag()).epsilon(1e-11));
}

TEST_CASE("complex jet algebra: conj, times_i, products") {
    const Jet t = Jet::variable(0.25, 1, 0);
    const CJet z(sin(t), cos(t));
    const CJet iz = z.times_i();
    CHECK(std::abs(iz.value() - std::complex<double>(-std::cos(0.25), std::sin(0.25))) < 1e-15);
    const CJet zc = z.conj();
    CHECK(std::abs(zc.value() - std::conj(z.value())) < 1e-15);
    // |z|^2 = z * conj(z) should be real
    const CJet n = z * zc;
    CHECK(n.im.value() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(n.re.value() == doctest::Approx(1.0).epsilon(1e-14)); // sin^2 + cos^2
    CHECK(n.re.d1(0) == doctest::Approx(0.0).epsilon(1e-14));
}
