// SPDX-License-Identifier: Apache-2.0
// Scaled inertial Qian-Sheng system: stresses, molecular field, energy
// audit and a first-order semi-implicit stepper.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qll/bulk.hpp"
#include "qll/elastic.hpp"
#include "qll/grid.hpp"

namespace qll {

struct QSParams {
    BulkParams bulk;
    ElasticParams elastic;
    double beta1 = 1.0;
    double beta4 = 2.0;
    double beta5 = 0.0;
    double beta6 = 0.0;
    double beta7 = 0.0;
    double mu1 = 1.0;
    double mu2 = 0.0;
    double J = 1.0;
    double eps = 0.1;
    int m = 0;

    // eps^m J
    double eta() const;
    double s1() const;
    // Parodi (beta6 - beta5 = mu2), Beta-relation, bulk and elastic
    // invariants. Throws ErrorCode::invariant naming the violated relation.
    void validate() const;
};

struct BetaReport {
    bool admissible = true;
    std::vector<std::pair<std::string, double>> margins;  // positive means satisfied
    std::vector<std::string> violations;
};

BetaReport beta_admissible(double beta1, double beta4, double beta5, double beta6, double beta7, double mu1,
                           double mu2);
BetaReport beta_admissible(const QSParams& p);

struct QSState {
    Field Q;   // qtensor
    Field Qt;  // partial time derivative of Q
    Field v;   // vector3, solenoidal
    double t = 0.0;
};

// Material rate dQ/dt + v.grad Q.
Field material_rate(const QSState& s);

// sigma = b1 Q(Q:D) + b4 D + b5 D.Q + b6 Q.D + b7(D.Q^2 + Q^2.D)
//       + mu2/2 N + mu1 [Q, N],  N = Qdot - [Omega, Q]
// qdot is the material rate. Force convention f_i = d_j sigma_ij.
Field viscous_stress(const QSParams& p, const Field& q, const Field& v, const Field& qdot);
Mat3 viscous_stress_point(const QSParams& p, const QTensor& q, const Mat3& grad_v, const QTensor& qdot);

// H = -(1/eps) J(Q) - L(Q)
Field molecular_field(const QSParams& p, const Field& q);

// int (f_b / eps + f_e) dx
double qs_free_energy(const QSParams& p, const Field& q);

struct EnergyBreakdown {
    double kinetic = 0.0;
    double inertial = 0.0;
    double bulk = 0.0;
    double elastic = 0.0;
    double total = 0.0;
    double dissipation_rate = 0.0;
    // Lower bound of the bulk term (value at the uniaxial minimizer); the
    // audit measures relative changes against total - bulk_floor.
    double bulk_floor = 0.0;
    double excess() const { return total - bulk_floor; }
};

EnergyBreakdown qs_energy_audit(const QSParams& p, const QSState& s);

// Pointwise dissipation density (nonnegative for admissible coefficients);
// dissipation_rate = -int of it.
double qs_dissipation_density(const QSParams& p, const QTensor& q, const Mat3& grad_v, const QTensor& qdot);

// min(0.5 eps^{m/2} sqrt(eps J / S), 0.25 h / |v|_inf, 0.5 h^2 / nu_max,
//     explicit elastic bound), S = 2 max|eig H_n|.
double qs_stability_bound(const QSParams& p, const QSState& s);

class QSStepper {
public:
    // allow_inadmissible skips the Beta-relation check (forced audits).
    QSStepper(QSParams p, bool allow_inadmissible = false);
    const QSParams& params() const { return p_; }
    // Throws ErrorCode::numerical if dt exceeds the stability bound or the
    // instability detector fires.
    QSState step(const QSState& s, double dt) const;
    bool enforce_bound = true;

private:
    QSParams p_;
};

QSState qs_step(const QSParams& p, const QSState& s, double dt);

// Zero-velocity constant state Q = s1 (nn - I/3).
QSState qs_equilibrium(const GridPtr& g, const QSParams& p, const Director& n);

}  // namespace qll
