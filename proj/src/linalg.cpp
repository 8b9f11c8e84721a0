#include "qlc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qlc {

void jacobi_eigen_sym(std::vector<double>& a, std::size_t n, std::vector<double>& v,
                      std::vector<double>& eigenvalues) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-300) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
}

void eigen_sym3(const Mat3& m, Vec3& eigenvalues, Mat3& eigenvectors) {
    std::vector<double> a(9), v, w;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i * 3 + j] = m[i][j];
    jacobi_eigen_sym(a, 3, v, w);

    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return w[x] < w[y]; });

    for (int c = 0; c < 3; ++c) {
        eigenvalues[c] = w[order[c]];
        for (int r = 0; r < 3; ++r) eigenvectors[r][c] = v[r * 3 + order[c]];
    }
}

double min_eigenvalue_sym(const std::vector<double>& a, std::size_t n) {
    std::vector<double> work = a, v, w;
    jacobi_eigen_sym(work, n, v, w);
    double mn = w[0];
    for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, w[i]);
    return mn;
}

}  // namespace qlc
