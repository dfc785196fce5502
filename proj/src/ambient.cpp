#include "warplag/ambient.hpp"

#include <cmath>

namespace warplag {

namespace {

void check_dims(const CVector& z, const HermitianSpace& space) {
    if (z.size() != space.complex_dim)
        throw ContractViolation("vector dimension does not match ambient space");
}

} // namespace

std::complex<double> herm_inner(const CVector& z, const CVector& w, const HermitianSpace& space) {
    check_dims(z, space);
    check_dims(w, space);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < z.size(); ++k)
        acc += space.epsilon(k) * z[k] * std::conj(w[k]);
    return acc;
}

double real_inner(const CVector& z, const CVector& w, const HermitianSpace& space) {
    return herm_inner(z, w, space).real();
}

CVector apply_J(const CVector& z) {
    CVector r(z.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        r[k] = std::complex<double>(-z[k].imag(), z[k].real());
    return r;
}

double space_residual(const CVector& z, const HermitianSpace& space) {
    const std::complex<double> n = herm_inner(z, z, space);
    // <z,z> is real by construction; keep the imaginary part in the residual
    // anyway so a corrupted vector cannot hide there.
    return std::abs(n - std::complex<double>(1.0 / space.base_curvature, 0.0));
}

bool hopf_equivalent(const CVector& z, const CVector& w, const HermitianSpace& space, double tol) {
    const std::complex<double> zz = herm_inner(z, z, space);
    if (std::abs(zz) < 1e-12)
        throw DegenerateInput("hopf_equivalent: base point has near-zero norm");
    // For w = e^{i theta} z the product <w,z> equals e^{i theta}/c, so the
    // phase estimate needs the curvature sign folded back in.
    const std::complex<double> p = space.base_curvature * herm_inner(w, z, space);
    if (std::abs(p) < 1e-12) return false;
    const std::complex<double> phase = p / std::abs(p);
    double sq = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        sq += std::norm(w[k] - phase * z[k]);
    return std::sqrt(sq) <= tol;
}

} // namespace warplag
