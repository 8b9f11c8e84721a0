// Bulk potential f_B(Q) = -(a/2) tr Q^2 - (b/3) tr Q^3 + (c/4) (tr Q^2)^2,
// its nonnegative shift, gradient, Hessian in the 5-coordinate chart, the
// eigenframe Hessian lower-bound check, and the projection-distance
// comparison quantities.
#pragma once

#include <array>
#include <vector>

#include "qlc/qtensor.hpp"

namespace qlc {

double bulk_value(const QTensor& q, const MaterialConstants& mc);

// min over the constraint set of f_B, attained on the uniaxial manifold at
// amplitude s_+. Closed form: -a s^2/3 - 2 b s^3/27 + c s^4/9 at s = s_+.
double bulk_min_value(const MaterialConstants& mc);

// f_B(Q) - min f_B >= 0, zero exactly on the uniaxial manifold.
double bulk_shifted(const QTensor& q, const MaterialConstants& mc);

// Gradient of f_B restricted to the symmetric traceless set:
//   -aQ - b(Q^2 - (tr Q^2 / 3) I) + c Q tr Q^2.
// Sign convention: this is the true gradient of f_B (finite-difference
// verified), so descent on (1/L) bulk_shifted steps against it.
QTensor bulk_gradient(const QTensor& q, const MaterialConstants& mc);

// Full 5x5 second derivative of f_B in the orthonormal chart (row-major).
std::array<double, 25> bulk_hessian(const QTensor& q, const MaterialConstants& mc);

// Eigenframe Hessian quadratic form on diagonal perturbations, using the
// unconstrained second derivatives
//   d2 f_B / dQ~ii dQ~jj = -a d_ij - 2 b d_ij Q~ii + c (d_ij |Q~|^2 + 2 Q~ii Q~jj)
// evaluated at the diagonalized Q. Returns (lhs, rhs) with
// rhs = (lambda/2) |xi|^2, lambda = min(3a, s_+ b).
// xi_diag are the diagonal entries of the perturbation in Q's eigenframe and
// must sum to zero. Throws std::domain_error when Q lies outside the
// delta-neighbourhood of the uniaxial manifold.
struct HessianBoundResult {
    double lhs;
    double rhs;
    double lambda;
};
HessianBoundResult hessian_bound_check(const QTensor& q, const Vec3& xi_diag,
                                       const MaterialConstants& mc, double delta);

// The three quantities compared by the distance bounds: shifted bulk value,
// squared projection distance, gradient norm. Throws std::domain_error when
// Q is outside the delta-neighbourhood.
struct DistanceBounds {
    double f_shifted;
    double dist_sq;
    double grad_norm;
};
DistanceBounds distance_bounds_check(const QTensor& q, const MaterialConstants& mc,
                                     double delta);

// Modified potential F(Q) = bulk_shifted(Q) + |Q - pi(Q)|^2. Throws
// std::domain_error outside the delta-neighbourhood (and propagates the
// projection's ambiguity error).
double modified_F(const QTensor& q, const MaterialConstants& mc, double delta);

// lambda = min(3a, s_+ b), the eigenframe Hessian constant.
double bulk_lambda(const MaterialConstants& mc);

// Default radius of the uniaxial neighbourhood used by the bound checks.
inline double default_delta(const MaterialConstants& mc) { return 0.1 * mc.s_plus; }

}  // namespace qlc
