#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "warplag/ambient.hpp"
#include "warplag/errors.hpp"

using namespace warplag;
using cd = std::complex<double>;

namespace {
const cd I(0.0, 1.0);
}

TEST_CASE("definite Hermitian form") {
    const HermitianSpace sp(2, Signature::Definite, 1.0);
    CHECK(sp.epsilon(0) == 1.0);
    CHECK(sp.epsilon(1) == 1.0);

    const CVector z{cd(1, 0), I};
    const CVector w{I, cd(1, 0)};
    // <z,w> = 1*conj(i) + i*conj(1) = -i + i = 0
    CHECK(std::abs(herm_inner(z, w, sp)) < 1e-15);
    CHECK(real_inner(z, w, sp) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(herm_inner(z, z, sp).real() == doctest::Approx(2.0));
    CHECK(herm_inner(z, z, sp).imag() == doctest::Approx(0.0));
}

TEST_CASE("Lorentz form negates the first slot") {
    const HermitianSpace sp(2, Signature::Lorentz, -1.0);
    CHECK(sp.epsilon(0) == -1.0);
    CHECK(sp.epsilon(1) == 1.0);
    const CVector e0{cd(1, 0), cd(0, 0)};
    CHECK(herm_inner(e0, e0, sp).real() == doctest::Approx(-1.0));
    // purely timelike vector sits on the quadric <z,z> = -1
    CHECK(space_residual(e0, sp) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("apply_J rotates each coordinate by i") {
    const CVector z{cd(2, 1), cd(3, 0)};
    const CVector jz = apply_J(z);
    CHECK(std::abs(jz[0] - cd(-1, 2)) < 1e-15);
    CHECK(std::abs(jz[1] - cd(0, 3)) < 1e-15);

    // J is an isometry and <Jz, z> = i <z,z> for the definite form
    const HermitianSpace sp(2, Signature::Definite, 1.0);
    CHECK(real_inner(jz, jz, sp) == doctest::Approx(real_inner(z, z, sp)));
    CHECK(std::abs(herm_inner(jz, z, sp) - I * herm_inner(z, z, sp)) < 1e-14);
}

TEST_CASE("space residual measures distance from the quadric") {
    const HermitianSpace sp(2, Signature::Definite, 1.0);
    const CVector z{cd(2, 0), cd(0, 0)};
    CHECK(space_residual(z, sp) == doctest::Approx(3.0)); // |4 - 1|
    const CVector u{cd(std::sqrt(0.5), 0), cd(0, std::sqrt(0.5))};
    CHECK(space_residual(u, sp) < 1e-15);

    const HermitianSpace sph(2, Signature::Lorentz, -1.0);
    const CVector h{cd(std::sqrt(2.0), 0), cd(1, 0)}; // -2 + 1 = -1
    CHECK(space_residual(h, sph) < 1e-14);
}

TEST_CASE("Hopf fiber equivalence") {
    const HermitianSpace sp(2, Signature::Definite, 1.0);
    const double r = std::sqrt(0.5);
    const CVector z{cd(r, 0), cd(r, 0)};
    const CVector w{r * I, r * I}; // e^{i pi/2} z
    CHECK(hopf_equivalent(z, w, sp));
    CHECK(hopf_equivalent(z, z, sp));

    const CVector v{cd(r, 0), -r * I}; // not a phase multiple of z
    CHECK_FALSE(hopf_equivalent(z, v, sp));

    // Lorentz signature: e^{i theta} scaling along a hyperbolic point
    const HermitianSpace sph(2, Signature::Lorentz, -1.0);
    const CVector p{cd(std::sqrt(2.0), 0), cd(1, 0)};
    CVector q(2);
    const cd phase = std::exp(I * 0.73);
    for (int k = 0; k < 2; ++k) q[k] = phase * p[k];
    CHECK(hopf_equivalent(p, q, sph));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(HermitianSpace(0, Signature::Definite, 1.0), ParameterError);
    CHECK_THROWS_AS(HermitianSpace(2, Signature::Definite, -1.0), ParameterError);
    CHECK_THROWS_AS(HermitianSpace(2, Signature::Lorentz, 1.0), ParameterError);
}
