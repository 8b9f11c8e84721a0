#include "qlc/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlc {

double bulk_value(const QTensor& q, const MaterialConstants& mc) {
    const Mat3& m = q.mat();
    const Mat3 m2 = mul(m, m);
    const double t2 = trace(m2);
    const double t3 = trace(mul(m2, m));
    return -0.5 * mc.a * t2 - mc.b / 3.0 * t3 + 0.25 * mc.c * t2 * t2;
}

double bulk_min_value(const MaterialConstants& mc) {
    const double s = mc.s_plus;
    return -mc.a * s * s / 3.0 - 2.0 * mc.b * s * s * s / 27.0 +
           mc.c * s * s * s * s / 9.0;
}

double bulk_shifted(const QTensor& q, const MaterialConstants& mc) {
    return bulk_value(q, mc) - bulk_min_value(mc);
}

QTensor bulk_gradient(const QTensor& q, const MaterialConstants& mc) {
    const Mat3& m = q.mat();
    const Mat3 m2 = mul(m, m);
    const double t2 = trace(m2);
    Mat3 g = scale(m, -mc.a);
    Mat3 dev2 = m2;
    for (int i = 0; i < 3; ++i) dev2[i][i] -= t2 / 3.0;
    g = add(g, scale(dev2, -mc.b));
    g = add(g, scale(m, mc.c * t2));
    return QTensor(g);
}

std::array<double, 25> bulk_hessian(const QTensor& q, const MaterialConstants& mc) {
    // Directional derivative of the gradient along basis tensor E_n:
    //   -a E - b (QE + EQ - (2<Q,E>/3) I) + c (E tr Q^2 + 2 Q <Q,E>)
    const auto& basis = coords5_basis();
    const Mat3& m = q.mat();
    const double t2 = inner(m, m);
    std::array<double, 25> h;
    for (int n = 0; n < 5; ++n) {
        const Mat3& e = basis[n];
        const double qe = inner(m, e);
        Mat3 d = scale(e, -mc.a);
        Mat3 anti = add(mul(m, e), mul(e, m));
        for (int i = 0; i < 3; ++i) anti[i][i] -= 2.0 * qe / 3.0;
        d = add(d, scale(anti, -mc.b));
        d = add(d, scale(e, mc.c * t2));
        d = add(d, scale(m, 2.0 * mc.c * qe));
        for (int r = 0; r < 5; ++r) h[r * 5 + n] = inner(basis[r], d);
    }
    return h;
}

double bulk_lambda(const MaterialConstants& mc) {
    return std::min(3.0 * mc.a, mc.s_plus * mc.b);
}

HessianBoundResult hessian_bound_check(const QTensor& q, const Vec3& xi_diag,
                                       const MaterialConstants& mc, double delta) {
    if (dist_to_uniaxial_spectral(q, mc.s_plus) > delta)
        throw std::domain_error("tensor outside the uniaxial neighbourhood");
    if (std::fabs(xi_diag[0] + xi_diag[1] + xi_diag[2]) > 1e-10)
        throw std::domain_error("diagonal perturbation must be traceless");

    Vec3 w;
    Mat3 v;
    eigen_sym3(q.mat(), w, v);
    const double norm2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];

    double lhs = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double dij = (i == j) ? 1.0 : 0.0;
            const double hij =
                -mc.a * dij - 2.0 * mc.b * dij * w[i] + mc.c * (dij * norm2 + 2.0 * w[i] * w[j]);
            lhs += hij * xi_diag[i] * xi_diag[j];
        }
    }
    const double lambda = bulk_lambda(mc);
    const double xi2 =
        xi_diag[0] * xi_diag[0] + xi_diag[1] * xi_diag[1] + xi_diag[2] * xi_diag[2];
    return {lhs, 0.5 * lambda * xi2, lambda};
}

DistanceBounds distance_bounds_check(const QTensor& q, const MaterialConstants& mc,
                                     double delta) {
    const double d = dist_to_uniaxial_spectral(q, mc.s_plus);
    if (d > delta) throw std::domain_error("tensor outside the uniaxial neighbourhood");
    return {bulk_shifted(q, mc), d * d, bulk_gradient(q, mc).norm()};
}

double modified_F(const QTensor& q, const MaterialConstants& mc, double delta) {
    const double d = dist_to_uniaxial_spectral(q, mc.s_plus);
    if (d > delta) throw std::domain_error("tensor outside the uniaxial neighbourhood");
    return bulk_shifted(q, mc) + d * d;
}

}  // namespace qlc
