// SPDX-License-Identifier: Apache-2.0
// Elastic energy f_e, the operator L, the distortion stress and the
// coercivity constant L0.
#pragma once

#include <Eigen/Dense>
#include <utility>

#include "qll/grid.hpp"

namespace qll {

struct ElasticParams {
    double L1 = 1.0;
    double L2 = 0.0;
    double L3 = 0.0;

    // L1 > 0 and L1 + L2 + L3 > 0.
    void validate() const;
};

// int 1/2 (L1 |grad Q|^2 + L2 Q_ij,j Q_ik,k + L3 Q_ij,k Q_ik,j) dx
double elastic_energy(const ElasticParams& p, const Field& q);

// Pointwise density, evaluated from precomputed gradients (dim entries).
double elastic_density(const ElasticParams& p, const std::vector<Mat3>& grad_q);

// 5x5 symbol of L at wavevector k in qbasis() coordinates:
// L1 |k|^2 delta_ab + (L2 + L3) (E_a k).(E_b k)
Eigen::Matrix<double, 5, 5> l_symbol(const ElasticParams& p, const Vec3& k);

// L(Q) = -(L1 Lap Q_kl + 1/2 (L2+L3)(Q_km,ml + Q_lm,mk - 2/3 delta_kl Q_ij,ij))
Field l_operator(const ElasticParams& p, const Field& q);
Spectral l_operator(const ElasticParams& p, const Spectral& q);

// Matrix field with force f_i = d_j sigma_ij:
// sigma_ij = -(L1 Q_kl,j Qt_kl,i + L2 Q_km,m Qt_kj,i + L3 Q_kj,l Qt_kl,i)
Field distortion_stress(const ElasticParams& p, const Field& q, const Field& qt);
// Same, from precomputed gradients of Q and Qt (dim entries each, qtensor kind).
Field distortion_stress(const ElasticParams& p, const std::vector<Field>& dq, const std::vector<Field>& dqt);

// 1/2 min over unit k and unit A of the symbol of 2 f_e, by a 2048-point
// Fibonacci sphere sweep. Throws ErrorCode::invariant if the minimum is <= 0.
double elastic_coercivity(const ElasticParams& p);
// Largest symbol eigenvalue per unit |k|^2 from the same sweep.
double elastic_symbol_max(const ElasticParams& p);

struct PairingResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = -<v.grad Q, L(Q)>;
// rhs = -int L1 v_j,m Q_kl,j Q_kl,m + 1/2 (L2+L3)(v_j,l Q_kl,j Q_km,m + v_j,k Q_kl,j Q_lm,m)
// Rejects v with max |div v| above 1e-10.
PairingResult transport_pairing(const Field& v, const Field& q, const ElasticParams& p);

// Gradients of a qtensor field as full matrices per point: out[a][p] = d_a Q(p).
std::vector<std::vector<Mat3>> qtensor_gradient_mats(const std::vector<Field>& dq);

}  // namespace qll
