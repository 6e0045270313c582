// SPDX-License-Identifier: Apache-2.0
#include "qll/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qll/error.hpp"

namespace qll {

void BulkParams::validate() const {
    if (!(a >= 0.0) || !(b >= 0.0)) fail(ErrorCode::invariant, "bulk parameters: a and b must be nonnegative");
    if (!(c > 0.0)) fail(ErrorCode::invariant, "bulk parameters: c must be positive");
    if (!(b * b + 24.0 * a * c > 0.0))
        fail(ErrorCode::invariant, "bulk parameters: b^2 + 24ac must be positive (degenerate roots)");
}

double bulk_energy_density(const BulkParams& p, const QTensor& q) {
    const Mat3 q2 = matmul(q, q);
    const double tr2 = trace(q2);
    const double tr3 = ddot(q2, q);  // symmetric q: tr(Q^3) = Q^2 : Q
    return -0.5 * p.a * tr2 - (p.b / 3.0) * tr3 + 0.25 * p.c * tr2 * tr2;
}

QTensor bulk_gradient(const BulkParams& p, const QTensor& q) {
    const Mat3 q2 = matmul(q, q);
    const double n2 = ddot(q, q);
    Mat3 r = (-p.a) * q - p.b * q2 + (p.c * n2) * q;
    const double d = p.b * n2 / 3.0;
    r(0, 0) += d;
    r(1, 1) += d;
    r(2, 2) += d;
    return r;
}

QTensor bulk_jacobian(const BulkParams& p, const QTensor& q, const QTensor& dq) {
    return (-p.a) * dq - p.b * bform_B(dq, q) + p.c * cform_C(dq, q, q);
}

namespace {
// S_ab = E_a E_b + E_b E_a, so that <E_a, B(E_b, Q)> = S_ab : Q.
struct BasisProducts {
    std::array<std::array<Mat3, 5>, 5> s;
    BasisProducts() {
        const auto& e = qbasis();
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) s[i][j] = matmul(e[i], e[j]) + matmul(e[j], e[i]);
    }
};
const BasisProducts& basis_products() {
    static const BasisProducts bp;
    return bp;
}
}  // namespace

Eigen::Matrix<double, 5, 5> bulk_jacobian_matrix(const BulkParams& p, const QCoords& qc) {
    const QTensor q = from_coords(qc);
    const auto& bp = basis_products();
    double n2 = 0.0;
    for (double x : qc) n2 += x * x;
    Eigen::Matrix<double, 5, 5> m;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            double v = -p.b * ddot(bp.s[i][j], q) + 2.0 * p.c * qc[i] * qc[j];
            if (i == j) v += -p.a + p.c * n2;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

OrderParameterRoots critical_order_parameters(const BulkParams& p) {
    if (!(p.c > 0.0)) fail(ErrorCode::invariant, "critical points: c must be positive");
    const double disc = p.b * p.b + 24.0 * p.a * p.c;
    if (disc < 0.0) fail(ErrorCode::invariant, "critical points: negative discriminant b^2 + 24ac");
    const double r = std::sqrt(disc);
    return {(p.b + r) / (4.0 * p.c), (p.b - r) / (4.0 * p.c)};
}

QTensor uniaxial_q(const Director& n, double s) {
    if (!is_unit(n, 1e-10)) fail(ErrorCode::invalid_argument, "uniaxial_q: director is not a unit vector");
    Mat3 r = outer(n, n);
    r(0, 0) -= 1.0 / 3.0;
    r(1, 1) -= 1.0 / 3.0;
    r(2, 2) -= 1.0 / 3.0;
    return s * r;
}

QTensor hessian_Hn(const BulkParams& p, const Director& n, double s, const QTensor& q) {
    const Mat3 nn = outer(n, n);
    const double qnn = ddot(q, nn);
    Mat3 first = q - (matmul(nn, q) + matmul(q, nn));
    Mat3 nn3 = nn;
    for (int i = 0; i < 3; ++i) {
        first(i, i) += (2.0 / 3.0) * qnn;
        nn3(i, i) -= 1.0 / 3.0;
    }
    return (p.b * s) * first + (2.0 * p.c * s * s * qnn) * nn3;
}

Projections projections(const Director& n, const QTensor& q) {
    const Mat3 nn = outer(n, n);
    const Mat3 in = matmul(nn, q) + matmul(q, nn) - (2.0 * ddot(q, nn)) * nn;
    return {in, q - in};
}

QTensor hn_inverse(const BulkParams& p, const Director& n, double s, const QTensor& q, double* discarded,
                   bool strict) {
    const double bs = p.b * s;
    const double det = bs * (4.0 * p.c * s - p.b);
    if (std::abs(det) < 1e-14) fail(ErrorCode::numerical, "hn_inverse: singular branch, bs(4cs-b) vanishes");
    const Projections pr = projections(n, q);
    const double dis = frob_norm(pr.in);
    if (discarded) *discarded = dis;
    if (strict && dis > 1e-10 * std::max(1.0, frob_norm(q)))
        fail(ErrorCode::invalid_argument, "hn_inverse: input has a kernel component");
    const QTensor& y = pr.out;
    const Mat3 nn = outer(n, n);
    const double ynn = ddot(y, nn);
    Mat3 first = y - (matmul(nn, y) + matmul(y, nn));
    Mat3 nn3 = nn;
    for (int i = 0; i < 3; ++i) {
        first(i, i) += (2.0 / 3.0) * ynn;
        nn3(i, i) -= 1.0 / 3.0;
    }
    const double k = (4.0 * p.b + 2.0 * p.c * s) / det;
    return (1.0 / bs) * first + (k * ynn) * nn3;
}

Eigen::Matrix<double, 5, 5> hn_matrix(const BulkParams& p, const Director& n, double s) {
    const auto& e = qbasis();
    Eigen::Matrix<double, 5, 5> m;
    for (int j = 0; j < 5; ++j) {
        const QTensor h = hessian_Hn(p, n, s, e[j]);
        for (int i = 0; i < 5; ++i) m(i, j) = ddot(e[i], h);
    }
    return m;
}

double coercivity_C0(const BulkParams& p, const Director& n, double s) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(hn_matrix(p, n, s));
    double c0 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 5; ++k) {
        QCoords c;
        for (int i = 0; i < 5; ++i) c[i] = es.eigenvectors()(i, k);
        if (in_kernel(n, from_coords(c), 1e-8)) continue;
        c0 = std::min(c0, es.eigenvalues()(k));
    }
    return c0;
}

double hn_spectral_radius(const BulkParams& p, double s) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(hn_matrix(p, {0.0, 0.0, 1.0}, s));
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hn_inverse_opnorm(const BulkParams& p, double s) { return 1.0 / coercivity_C0(p, {0.0, 0.0, 1.0}, s); }

bool in_kernel(const Director& n, const QTensor& q, double tol) {
    const double nq = frob_norm(q);
    if (nq == 0.0) return true;
    return frob_norm(projections(n, q).in - q) / nq < tol;
}

}  // namespace qll
