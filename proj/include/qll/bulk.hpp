// SPDX-License-Identifier: Apache-2.0
// Landau-de Gennes bulk energy, its gradient, the uniaxial critical points,
// the Hessian H_n at the uniaxial minimizer, kernel projections and the
// closed-form inverse of H_n on the kernel complement.
#pragma once

#include <Eigen/Dense>
#include <utility>

#include "qll/tensor.hpp"

namespace qll {

struct BulkParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;

    // Throws ErrorCode::invariant unless a,b >= 0, c > 0 and b^2+24ac > 0.
    void validate() const;
};

struct OrderParameterRoots {
    double s1 = 0.0;  // stable branch
    double s2 = 0.0;
};

double bulk_energy_density(const BulkParams& p, const QTensor& q);

// J(Q) = -aQ - bQ^2 + c|Q|^2 Q + (b/3)|Q|^2 I
QTensor bulk_gradient(const BulkParams& p, const QTensor& q);

// Jacobian of J at an arbitrary Q applied to dQ:
// -a dQ - b B(dQ,Q) + c C(dQ,Q,Q)
QTensor bulk_jacobian(const BulkParams& p, const QTensor& q, const QTensor& dq);

// Same Jacobian as a 5x5 matrix in qbasis() coordinates; symmetric.
Eigen::Matrix<double, 5, 5> bulk_jacobian_matrix(const BulkParams& p, const QCoords& q);

// Roots of 2cs^2 - bs - 3a = 0, s1 >= s2.
OrderParameterRoots critical_order_parameters(const BulkParams& p);

// s (nn - I/3); rejects non-unit n.
QTensor uniaxial_q(const Director& n, double s);

// H_n(Q) = bs(Q - (nn Q + Q nn) + 2/3 (Q:nn) I) + 2cs^2 (Q:nn)(nn - I/3)
QTensor hessian_Hn(const BulkParams& p, const Director& n, double s, const QTensor& q);

struct Projections {
    QTensor in;   // kernel part, of the form nm + mn with m perpendicular to n
    QTensor out;  // complement
};

Projections projections(const Director& n, const QTensor& q);

// Closed-form inverse of H_n on (Ker H_n)^perp. The input is first projected
// with P_out; the Frobenius norm of the discarded kernel part is written to
// discarded when non-null. With strict set, a relative discard above 1e-10
// throws.
QTensor hn_inverse(const BulkParams& p, const Director& n, double s, const QTensor& q,
                   double* discarded = nullptr, bool strict = false);

// H_n assembled in qbasis() coordinates.
Eigen::Matrix<double, 5, 5> hn_matrix(const BulkParams& p, const Director& n, double s);

// Smallest eigenvalue of H_n restricted to (Ker H_n)^perp.
double coercivity_C0(const BulkParams& p, const Director& n, double s);

// Largest |eigenvalue| of H_n (independent of n by rotation invariance).
double hn_spectral_radius(const BulkParams& p, double s);

// Operator norm of H_n^{-1} on (Ker H_n)^perp, i.e. 1 / C0.
double hn_inverse_opnorm(const BulkParams& p, double s);

// ||P_in(Q) - Q|| / ||Q|| < 1e-10
bool in_kernel(const Director& n, const QTensor& q, double tol = 1e-10);

}  // namespace qll
