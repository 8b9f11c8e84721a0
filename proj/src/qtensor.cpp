#include "qlc/qtensor.hpp"

#include <cmath>
#include <stdexcept>

namespace qlc {

double compute_s_plus(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw std::domain_error("material constants a, b, c must be positive");
    return (b + std::sqrt(b * b + 24.0 * a * c)) / (4.0 * c);
}

MaterialConstants MaterialConstants::make(double a, double b, double c) {
    MaterialConstants mc;
    mc.a = a;
    mc.b = b;
    mc.c = c;
    mc.s_plus = compute_s_plus(a, b, c);
    return mc;
}

EigenSystem eigendecompose(const QTensor& q) {
    EigenSystem es;
    eigen_sym3(q.mat(), es.eigenvalues, es.rotation);

    // Sign convention: largest-magnitude component of each column positive.
    for (int c = 0; c < 3; ++c) {
        int imax = 0;
        for (int r = 1; r < 3; ++r)
            if (std::fabs(es.rotation[r][c]) > std::fabs(es.rotation[imax][c])) imax = r;
        if (es.rotation[imax][c] < 0.0)
            for (int r = 0; r < 3; ++r) es.rotation[r][c] = -es.rotation[r][c];
    }
    if (det(es.rotation) < 0.0)
        for (int r = 0; r < 3; ++r) es.rotation[r][1] = -es.rotation[r][1];
    return es;
}

QTensor from_director(const Vec3& u, double s_plus) {
    const double n = norm(u);
    if (std::fabs(n - 1.0) > 1e-10)
        throw std::domain_error("director must be a unit vector");
    Mat3 m = outer(u, u);
    for (int i = 0; i < 3; ++i) m[i][i] -= 1.0 / 3.0;
    return QTensor(scale(m, s_plus));
}

QTensor project_uniaxial(const QTensor& q, const MaterialConstants& mc) {
    const EigenSystem es = eigendecompose(q);
    const double gap = es.eigenvalues[2] - es.eigenvalues[1];
    if (gap <= 1e-8 * (1.0 + q.norm()))
        throw AmbiguityError("top eigenvalue degenerate: nearest uniaxial tensor ambiguous");
    Vec3 v;
    for (int r = 0; r < 3; ++r) v[r] = es.rotation[r][2];
    return from_director(normalized(v), mc.s_plus);
}

double dist_to_uniaxial(const QTensor& q, const MaterialConstants& mc) {
    const QTensor p = project_uniaxial(q, mc);
    return (q - p).norm();
}

double dist_to_uniaxial_spectral(const QTensor& q, double s_plus) {
    Vec3 w;
    Mat3 v;
    eigen_sym3(q.mat(), w, v);
    const double q2 = q.norm() * q.norm();
    const double d2 = q2 - 2.0 * s_plus * w[2] + (2.0 / 3.0) * s_plus * s_plus;
    return std::sqrt(std::max(d2, 0.0));
}

namespace {

std::array<Mat3, 5> build_basis() {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r6 = 1.0 / std::sqrt(6.0);
    std::array<Mat3, 5> b;
    b[0] = mat3_zero();
    b[0][0][0] = r2;
    b[0][1][1] = -r2;
    b[1] = mat3_zero();
    b[1][0][0] = r6;
    b[1][1][1] = r6;
    b[1][2][2] = -2.0 * r6;
    b[2] = mat3_zero();
    b[2][0][1] = b[2][1][0] = r2;
    b[3] = mat3_zero();
    b[3][0][2] = b[3][2][0] = r2;
    b[4] = mat3_zero();
    b[4][1][2] = b[4][2][1] = r2;
    return b;
}

}  // namespace

const std::array<Mat3, 5>& coords5_basis() {
    static const std::array<Mat3, 5> basis = build_basis();
    return basis;
}

Coords5 pack5(const QTensor& q) {
    const auto& basis = coords5_basis();
    Coords5 v;
    for (int m = 0; m < 5; ++m) v[m] = inner(q.mat(), basis[m]);
    return v;
}

QTensor unpack5(const Coords5& v) {
    const auto& basis = coords5_basis();
    Mat3 m = mat3_zero();
    for (int k = 0; k < 5; ++k) m = add(m, scale(basis[k], v[k]));
    return QTensor(m);
}

Coords5 contract_basis(const Mat3& raw_partials) {
    const auto& basis = coords5_basis();
    Coords5 v;
    for (int m = 0; m < 5; ++m) v[m] = inner(raw_partials, basis[m]);
    return v;
}

}  // namespace qlc
