// Small fixed-size linear algebra used throughout: 3-vectors, 3x3 matrices,
// and symmetric eigensolvers (cyclic Jacobi) for 3x3 and small dense N x N.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qlc {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 mat3_zero() { return {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}; }

inline Mat3 mat3_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Vec3 add(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 sub(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i] * b[j];
    return m;
}

inline Mat3 add(const Mat3& a, const Mat3& b) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] + b[i][j];
    return m;
}

inline Mat3 sub(const Mat3& a, const Mat3& b) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - b[i][j];
    return m;
}

inline Mat3 scale(const Mat3& a, double s) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] * s;
    return m;
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 m = mat3_zero();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) m[i][j] += a[i][k] * b[k][j];
    return m;
}

inline Vec3 mul(const Mat3& a, const Vec3& v) {
    Vec3 r{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
    return r;
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[j][i];
    return m;
}

inline double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

// Frobenius inner product <A,B> = A_ij B_ij.
inline double inner(const Mat3& a, const Mat3& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a[i][j] * b[i][j];
    return s;
}

inline double fro_norm(const Mat3& a) { return std::sqrt(inner(a, a)); }

inline double det(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

inline Mat3 symmetrize(const Mat3& a) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = 0.5 * (a[i][j] + a[j][i]);
    return m;
}

inline Mat3 deviatoric(const Mat3& a) {
    Mat3 m = a;
    const double t = trace(a) / 3.0;
    m[0][0] -= t;
    m[1][1] -= t;
    m[2][2] -= t;
    return m;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolvers (cyclic Jacobi). Deterministic, no pivot heuristics.
// ---------------------------------------------------------------------------

// Dense symmetric N x N Jacobi: A is overwritten with the diagonalized matrix,
// V accumulates the rotations (columns are eigenvectors), eigenvalues are
// returned unsorted in diag(A).
void jacobi_eigen_sym(std::vector<double>& a, std::size_t n, std::vector<double>& v,
                      std::vector<double>& eigenvalues);

// 3x3 convenience wrapper: eigenvalues ascending, v columns are the matching
// unit eigenvectors.
void eigen_sym3(const Mat3& m, Vec3& eigenvalues, Mat3& eigenvectors);

// Smallest eigenvalue of a symmetric matrix stored row-major (n x n).
double min_eigenvalue_sym(const std::vector<double>& a, std::size_t n);

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64) with uniform/normal helpers. Used instead of
// <random> distributions so results are reproducible across standard library
// implementations.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (one value per call, cached pair).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }

    Vec3 unit_vector() {
        Vec3 v;
        do {
            v = {normal(), normal(), normal()};
        } while (norm(v) < 1e-12);
        return normalized(v);
    }

  private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace qlc
