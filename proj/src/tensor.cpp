// SPDX-License-Identifier: Apache-2.0
#include "qll/tensor.hpp"

#include <algorithm>

namespace qll {

Mat3 matmul(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
}

Mat3 transpose(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(j, i);
    return r;
}

double trace(const Mat3& x) { return x.a[0] + x.a[4] + x.a[8]; }

double ddot(const Mat3& x, const Mat3& y) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += x.a[k] * y.a[k];
    return s;
}

double frob_norm(const Mat3& x) { return std::sqrt(ddot(x, x)); }

Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = u[i] * v[j];
    return r;
}

Vec3 matvec(const Mat3& x, const Vec3& u) {
    return {x(0, 0) * u[0] + x(0, 1) * u[1] + x(0, 2) * u[2],
            x(1, 0) * u[0] + x(1, 1) * u[1] + x(1, 2) * u[2],
            x(2, 0) * u[0] + x(2, 1) * u[1] + x(2, 2) * u[2]};
}

bool is_qtensor(const Mat3& x, double tol) {
    const double scale = std::max(1.0, frob_norm(x));
    if (std::abs(trace(x)) > tol * scale) return false;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(x(i, j) - x(j, i)) > tol * scale) return false;
    return true;
}

bool is_unit(const Vec3& n, double tol) { return std::abs(norm(n) - 1.0) <= tol; }

QTensor project_sym_traceless(const Mat3& m) {
    Mat3 r;
    const double t3 = trace(m) / 3.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i)) - (i == j ? t3 : 0.0);
    return r;
}

QTensor bform_B(const QTensor& q1, const QTensor& q2) {
    const Mat3 p = matmul(q1, q2);
    Mat3 r = p + transpose(p);
    const double d = (2.0 / 3.0) * ddot(q1, q2);
    r(0, 0) -= d;
    r(1, 1) -= d;
    r(2, 2) -= d;
    return r;
}

QTensor cform_C(const QTensor& q1, const QTensor& q2, const QTensor& q3) {
    return ddot(q2, q3) * q1 + ddot(q1, q3) * q2 + ddot(q1, q2) * q3;
}

Mat3 commutator(const Mat3& x, const Mat3& y) { return matmul(x, y) - matmul(y, x); }

namespace {
std::array<Mat3, 5> make_basis() {
    std::array<Mat3, 5> e;
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r6 = 1.0 / std::sqrt(6.0);
    e[0](0, 0) = r2;
    e[0](1, 1) = -r2;
    e[1](0, 1) = e[1](1, 0) = r2;
    e[2](0, 2) = e[2](2, 0) = r2;
    e[3](1, 2) = e[3](2, 1) = r2;
    e[4](0, 0) = e[4](1, 1) = -r6;
    e[4](2, 2) = 2.0 * r6;
    return e;
}
}  // namespace

const std::array<Mat3, 5>& qbasis() {
    static const std::array<Mat3, 5> e = make_basis();
    return e;
}

QCoords to_coords(const QTensor& q) {
    const auto& e = qbasis();
    QCoords c;
    for (int k = 0; k < 5; ++k) c[k] = ddot(e[k], q);
    return c;
}

QTensor from_coords(const QCoords& c) {
    const auto& e = qbasis();
    Mat3 r;
    for (int k = 0; k < 5; ++k) r += c[k] * e[k];
    return r;
}

}  // namespace qll
