#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "warplag/errors.hpp"

namespace warplag {

/// Signature of the ambient Hermitian form.  Lorentz negates the first
/// complex coordinate: <z,w> = -z_0 conj(w_0) + sum_{k>=1} z_k conj(w_k).
enum class Signature { Definite, Lorentz };

/// Flat C^{complex_dim} carrying the Hermitian form of the given signature.
/// The quadric { <z,z> = 1/c } is the total space of the Hopf fibration over
/// the complex space form of holomorphic curvature 4c: the unit sphere for
/// c = +1, the anti-de-Sitter quadric for c = -1.
struct HermitianSpace {
    std::size_t complex_dim;
    Signature signature;
    double base_curvature; // c

    HermitianSpace(std::size_t dim, Signature sig, double c)
        : complex_dim(dim), signature(sig), base_curvature(c) {
        if (dim == 0) throw ParameterError("ambient dimension must be positive");
        if (sig == Signature::Definite && c <= 0.0)
            throw ParameterError("definite signature requires positive curvature");
        if (sig == Signature::Lorentz && c >= 0.0)
            throw ParameterError("Lorentz signature requires negative curvature");
    }

    /// Sign of the k-th coordinate in the Hermitian form.
    double epsilon(std::size_t k) const {
        return (signature == Signature::Lorentz && k == 0) ? -1.0 : 1.0;
    }
};

using CVector = std::vector<std::complex<double>>;

/// Signature-aware Hermitian inner product sum_k eps_k z_k conj(w_k).
std::complex<double> herm_inner(const CVector& z, const CVector& w, const HermitianSpace& space);

/// Real part of herm_inner: the induced (pseudo-)Riemannian inner product.
double real_inner(const CVector& z, const CVector& w, const HermitianSpace& space);

/// The complex structure: coordinatewise multiplication by i.
CVector apply_J(const CVector& z);

/// | <z,z> - 1/c |, distance of z from the quadric.
double space_residual(const CVector& z, const HermitianSpace& space);

/// True when w lies on the Hopf fiber through z: min over phases of
/// |w - e^{i theta} z| is below tol.  The minimizing phase is read off the
/// Hermitian product (rescaled by c so the test also works in Lorentz
/// signature).  Near-zero <z,z> makes the phase ill-defined.
bool hopf_equivalent(const CVector& z, const CVector& w, const HermitianSpace& space,
                     double tol = 1e-9);

} // namespace warplag
