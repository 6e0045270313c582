// SPDX-License-Identifier: Apache-2.0
// Pointwise algebra on 3x3 matrices and symmetric traceless tensors.
#pragma once

#include <array>
#include <cmath>

namespace qll {

using Vec3 = std::array<double, 3>;

struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m.a[0] = m.a[4] = m.a[8] = 1.0;
        return m;
    }
    static Mat3 zero() { return Mat3{}; }

    Mat3& operator+=(const Mat3& o) {
        for (int k = 0; k < 9; ++k) a[k] += o.a[k];
        return *this;
    }
    Mat3& operator-=(const Mat3& o) {
        for (int k = 0; k < 9; ++k) a[k] -= o.a[k];
        return *this;
    }
    Mat3& operator*=(double s) {
        for (auto& x : a) x *= s;
        return *this;
    }
};

// A QTensor is a Mat3 that is symmetric and traceless. The alias keeps the
// full nine entries; functions documented as returning a QTensor guarantee
// the invariants and is_qtensor() checks them.
using QTensor = Mat3;
using Director = Vec3;

inline Mat3 operator+(Mat3 x, const Mat3& y) { return x += y; }
inline Mat3 operator-(Mat3 x, const Mat3& y) { return x -= y; }
inline Mat3 operator*(double s, Mat3 x) { return x *= s; }
inline Mat3 operator*(Mat3 x, double s) { return x *= s; }
inline Mat3 operator-(Mat3 x) { return x *= -1.0; }

Mat3 matmul(const Mat3& x, const Mat3& y);
Mat3 transpose(const Mat3& x);
double trace(const Mat3& x);
// A:B = A_ij B_ij
double ddot(const Mat3& x, const Mat3& y);
double frob_norm(const Mat3& x);
Mat3 outer(const Vec3& u, const Vec3& v);
Vec3 matvec(const Mat3& x, const Vec3& u);

inline double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
inline double norm(const Vec3& u) { return std::sqrt(dot(u, u)); }
inline Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}
inline Vec3 operator+(const Vec3& u, const Vec3& v) { return {u[0] + v[0], u[1] + v[1], u[2] + v[2]}; }
inline Vec3 operator-(const Vec3& u, const Vec3& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }
inline Vec3 operator*(double s, const Vec3& u) { return {s * u[0], s * u[1], s * u[2]}; }

// Invariant tolerance: 1e-12 absolute for O(1) tensors, scaled by the
// Frobenius norm otherwise.
bool is_qtensor(const Mat3& x, double tol = 1e-12);
bool is_unit(const Vec3& n, double tol = 1e-12);

// (M + M^T)/2 - tr(M)/3 I
QTensor project_sym_traceless(const Mat3& m);

// B(Q1,Q2) = Q1 Q2 + Q2^T Q1^T - (2/3)(Q1:Q2) I
QTensor bform_B(const QTensor& q1, const QTensor& q2);

// C(Q1,Q2,Q3) = Q1 (Q2:Q3) + Q2 (Q1:Q3) + Q3 (Q1:Q2)
QTensor cform_C(const QTensor& q1, const QTensor& q2, const QTensor& q3);

// [A,B] = AB - BA
Mat3 commutator(const Mat3& x, const Mat3& y);

// Orthonormal basis E_1..E_5 of the symmetric traceless matrices under the
// Frobenius pairing. Field storage uses these coordinates.
using QCoords = std::array<double, 5>;
const std::array<Mat3, 5>& qbasis();
QCoords to_coords(const QTensor& q);
QTensor from_coords(const QCoords& c);

}  // namespace qll
