// Algebra of symmetric traceless 3x3 order-parameter tensors: construction,
// eigendecomposition, the uniaxial projection, and the orthonormal
// 5-coordinate chart used by the lattice solver.
#pragma once

#include <array>
#include <stdexcept>

#include "qlc/linalg.hpp"

namespace qlc {

// Raised when the nearest uniaxial tensor is not well defined because the top
// two eigenvalues coincide within tolerance.
class AmbiguityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bulk coefficients a, b, c > 0 together with the equilibrium scalar order
// parameter s_+ = (b + sqrt(b^2 + 24ac)) / (4c).
struct MaterialConstants {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double s_plus = 1.5;

    static MaterialConstants make(double a, double b, double c);
};

double compute_s_plus(double a, double b, double c);

// Symmetric traceless 3x3 tensor. Any raw input is symmetrized and detraced on
// construction so iterative updates cannot drift off the constraint set.
class QTensor {
  public:
    QTensor() : m_(mat3_zero()) {}
    explicit QTensor(const Mat3& raw) : m_(deviatoric(symmetrize(raw))) {}

    const Mat3& mat() const { return m_; }
    double operator()(int i, int j) const { return m_[i][j]; }

    double norm() const { return fro_norm(m_); }

    friend QTensor operator+(const QTensor& a, const QTensor& b) {
        return QTensor(add(a.m_, b.m_));
    }
    friend QTensor operator-(const QTensor& a, const QTensor& b) {
        return QTensor(sub(a.m_, b.m_));
    }
    friend QTensor operator*(double s, const QTensor& a) {
        return QTensor(scale(a.m_, s));
    }

  private:
    Mat3 m_;
};

inline double inner(const QTensor& a, const QTensor& b) {
    return inner(a.mat(), b.mat());
}

// Eigenvalues ascending; rotation columns are the matching unit eigenvectors
// with det = +1. Signs are fixed by making each eigenvector's
// largest-magnitude component positive; if that leaves det = -1 the middle
// column is flipped.
struct EigenSystem {
    Vec3 eigenvalues;
    Mat3 rotation;
};

EigenSystem eigendecompose(const QTensor& q);

// Uniaxial tensor s_+ (u (x) u - I/3) for a unit director u.
QTensor from_director(const Vec3& u, double s_plus);

// Nearest uniaxial tensor: s_+ (v (x) v - I/3) with v the top eigenvector.
// Throws AmbiguityError when the top two eigenvalues are within
// 1e-8 * (1 + |Q|).
QTensor project_uniaxial(const QTensor& q, const MaterialConstants& mc);

// Frobenius distance |Q - project_uniaxial(Q)|. Same ambiguity behaviour.
double dist_to_uniaxial(const QTensor& q, const MaterialConstants& mc);

// Distance to the uniaxial manifold computed from the top eigenvalue alone:
// sqrt(|Q|^2 - 2 s_+ lambda_max + (2/3) s_+^2). Well defined for any
// spectrum, including fully degenerate tensors where the nearest point itself
// is ambiguous.
double dist_to_uniaxial_spectral(const QTensor& q, double s_plus);

// ---------------------------------------------------------------------------
// Orthonormal coordinates on the constraint set. Basis (Frobenius-orthonormal):
//   E0 = diag(1,-1,0)/sqrt(2)
//   E1 = diag(1,1,-2)/sqrt(6)
//   E2 = (e1 e2^T + e2 e1^T)/sqrt(2)
//   E3 = (e1 e3^T + e3 e1^T)/sqrt(2)
//   E4 = (e2 e3^T + e3 e2^T)/sqrt(2)
// pack5/unpack5 are mutually inverse and preserve the Frobenius norm. This is
// the single definition point; all solver state uses it.
// ---------------------------------------------------------------------------

using Coords5 = std::array<double, 5>;

const std::array<Mat3, 5>& coords5_basis();

Coords5 pack5(const QTensor& q);
QTensor unpack5(const Coords5& v);

// Contract a raw (not necessarily symmetric/traceless) 3x3 derivative array
// against the basis: the chain rule through unpack5. Used by gradient
// assembly so formula partials never need explicit symmetrization.
Coords5 contract_basis(const Mat3& raw_partials);

}  // namespace qlc
