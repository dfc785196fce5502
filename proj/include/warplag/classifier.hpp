#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warplag/geometry.hpp"
#include "warplag/products.hpp"

namespace warplag {

/// Result of the single-distribution search: a unit direction v (in frame
/// coordinates) with A_{Jv} v = lambda1 v and a single eigenvalue lambda2 on
/// the complement, gauge-normalized so lambda2 > 0.
struct DetectionTwo {
    std::vector<double> e1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double residual = 0.0;
};

/// Two-distribution counterpart: the complement spectrum splits into two
/// clusters lambda2 != lambda3 with block dimensions (n2, n3), and the
/// cross-block components C(i, alpha, .) vanish.
struct DetectionThree {
    std::vector<double> e1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;
    double residual = 0.0;
};

/// Search for the distinguished direction of the with-point structure
/// h(E1,E1) = lambda1 JE1, h(E1,Ei) = lambda2 JEi with lambda1 != 2 lambda2.
/// n = 2 solves the alignment condition C(v,v,w) = 0 analytically; n >= 3
/// runs a multi-start fixed-point iteration on eigenvectors of the
/// contracted slice A_v.  Absent when no direction passes at tol.  Flat
/// homogeneous charts can admit several admissible directions; the one whose
/// full cubic deviates least from the exact model (pure complement block
/// zero) is returned.
std::optional<DetectionTwo> detect_e1(const CubicForm& C, double tol);

/// Search for the two-factor structure (complement split into two eigenvalue
/// clusters; eigenvalues within 10 tol are merged before block assignment).
/// Requires n >= 3.  Absent when no direction passes.
std::optional<DetectionThree> detect_three(const CubicForm& C, double tol);

enum class VerdictKind { CalabiWithPoint, CalabiTwoFactor, NotCalabi, Undetermined };

struct ClassifierVerdict {
    VerdictKind kind = VerdictKind::Undetermined;
    /// Detected distinguished direction in ambient coordinates (first sample).
    CVector e1_ambient;
    /// Mean detected eigenvalues: (lambda1, lambda2) or (lambda1, lambda2,
    /// lambda3), with per-eigenvalue max spread across samples.
    std::vector<double> lambdas;
    std::vector<double> spreads;
    /// Complement block dimensions: {n-1} or {n2, n3}.
    std::vector<std::size_t> block_dims;
    bool constancy = false;
    bool minimal = false;
    double parallel_h_residual = 0.0;
    std::map<std::string, double> diagnostics;
};

const char* verdict_name(VerdictKind kind);

/// Render the theorem-level verdict from sampled cubic forms.  A chart whose
/// lagrangian_residual exceeds 1e-8 at some sample is reported NotCalabi with
/// the offending residual in diagnostics (the structure theorems only speak
/// about Lagrangian immersions).  Detected eigenvalues constant to tol across
/// samples give a Calabi kind; spread beyond 10 tol gives NotCalabi; the
/// window between is Undetermined, as are mixed detections.
ClassifierVerdict classify(const ImmersionChart& chart,
                           const std::vector<std::vector<double>>& samples, double tol);

/// max |nabla h| over the samples.  Throws NotLagrangian on precheck failure.
double parallel_residual(const ImmersionChart& chart,
                         const std::vector<std::vector<double>>& samples);

/// Block decomposition of nabla h for a with-point product: the pure factor
/// block must reproduce the factor's own nabla h after undoing the warp
/// scale, and every component with an index outside the factor block must
/// vanish.  Scale bookkeeping: each of the four frame slots normalizes by
/// 1/w1 (the block metric is w1^2 times the factor metric) while the ambient
/// pairing contributes |w1 e^{i theta}|^2 = w1^2, so the product block equals
/// the factor value times 1/w1^2 and the comparison multiplies it by w1^2.
struct ParallelReport {
    double total_max = 0.0;
    double factor_block_dev = 0.0;
    double off_block_max = 0.0;
};

ParallelReport parallel_report(const WarpedProductChart& chart,
                               const std::vector<std::vector<double>>& samples);

} // namespace warplag
