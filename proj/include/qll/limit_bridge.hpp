// SPDX-License-Identifier: Apache-2.0
// Bridge between the Qian-Sheng and Ericksen-Leslie systems: coefficient
// map, truncated Hilbert expansion Q0 + eps Q1perp, well-prepared initial
// data, remainder extraction and the remainder energy functionals.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "qll/ericksen_leslie.hpp"
#include "qll/qian_sheng.hpp"

namespace qll {

struct LimitContext {
    QSParams qs;
    double s = 0.0;
    int m = 0;
    int chi = 1;  // 1 iff m = 0

    // Fills s = s1, m and chi from qs; eps = 0 is accepted here.
    static LimitContext from_qs(const QSParams& qs);
    void validate() const;
};

// alpha1 = b1 s^2, alpha2 = mu2 s/2 - mu1 s^2, alpha3 = mu2 s/2 + mu1 s^2,
// alpha4 = b4 - s/3 (b5 + b6) + 2/9 b7 s^2, alpha5 = b5 s + b7 s^2/3,
// alpha6 = b6 s + b7 s^2/3, gamma1 = 2 mu1 s^2, gamma2 = mu2 s,
// I = chi 2 s^2 J, k1 = k3 = (2L1 + L2 + L3) s^2, k2 = 2 L1 s^2, k4 = L3 s^2.
ELParams coefficients_from_qs(const LimitContext& ctx);

struct ExpansionBundle {
    double t = 0.0;
    Field n;          // director
    Field v0;         // velocity
    Field w;          // material rate of n
    Field Q0;         // s (nn - I/3)
    Field Q0t;        // partial time derivative of Q0
    Field Q1perp;     // H_n^{-1} P_out(R)
    Field Q1perp_t;   // partial time derivative of Q1perp (empty unless requested)
    // L2 norms of P_out(H_n(Q1perp) - R) and P_in(R); the second vanishes
    // when (n, v0) solves the mapped Ericksen-Leslie system.
    double out_residual = 0.0;
    double kernel_residual = 0.0;
};

// R = -chi J Q0'' - mu1 Q0' - L(Q0) - mu2/2 D0 + mu1 [Omega0, Q0] with
// material rates from the Ericksen-Leslie right-hand side. When next is
// given, Q1perp_t is the difference quotient against the expansion at next.
ExpansionBundle build_expansion(const LimitContext& ctx, const ELParams& el, const ELState& s,
                                const ELState* next = nullptr);

struct Perturbation {
    Field Q;   // Q_R(0)
    Field v;   // v_R(0)
    Field Qt;  // partial time derivative of Q_R(0)
};

// ||v||_{H2} + ||Q||_{H3} + eps^{m/2} ||Qt||_{H2} + ||P_out(Q)|| / eps
double perturbation_size(const LimitContext& ctx, const ExpansionBundle& b, const Perturbation& r);

// Q = Q0 + eps Q1perp + eps^order Q_R, v = v0 + eps^order v_R,
// dQ/dt = Q0t + eps Q1perp_t + eps^order Qt_R. Empty perturbation fields
// count as zero. Rejects perturbations with size above e0. eps = 0 returns
// Q0 and appends a warning.
QSState well_prepared_initial_data(const LimitContext& ctx, const ExpansionBundle& b, const Perturbation& r,
                                   double e0, int order = 3, std::vector<std::string>* warnings = nullptr);

struct Remainder {
    Field Q;   // eps^{-order} (Q - Q0 - eps Q1perp)
    Field v;   // eps^{-order} (v - v0)
    Field Qt;  // eps^{-order} (dQ/dt - Q0t - eps Q1perp_t), empty if Q1perp_t is
};

// Rejects a time mismatch above 1e-12.
Remainder extract_remainder(const LimitContext& ctx, const QSState& s, const ExpansionBundle& b, int order = 3);

// Three-tier functional with H^eps_n = H_n + eps L:
// int |v|^2 + eps^m J|Qt|^2 + H^eps(Q):Q/eps + |Q|^2
//   + eps^2 (|grad v|^2 + eps^m J|grad Qt|^2 + H^eps(grad Q):grad Q/eps)
//   + eps^4 (|Lap v|^2 + eps^m J|Lap Qt|^2 + H^eps(Lap Q):Lap Q/eps)
double energy_tilde_Em(const LimitContext& ctx, const Field& q, const Field& qt, const Field& v, const Field& n);

// P = Qt_R + vtilde.grad Q_R + v_R.grad Q
Field remainder_rate(const Field& qr_t, const Field& qr, const Field& vr, const Field& vtilde, const Field& q);

// 1/2 int (|v_R|^2 + eps^m J|P|^2 + M|Q_R|^2 + H^eps(Q_R):Q_R/eps)
//   + eps^2 (...) + eps^4 (...), tiers as in energy_tilde_Em without |Q|^2.
double energy_Em(const LimitContext& ctx, const Field& qr, const Field& p, const Field& vr, const Field& n, double M);

// max(1, 4 |(nn)'|_inf J (2bs + 2cs^2) / C0), w the material rate of n.
double m_rule(const LimitContext& ctx, const Field& n, const Field& w);

// sum_k eps^{2k} (|grad d^k v_R|^2 + mu1 |U_k|^2),
// U = P - [Omega_R, Q0] + mu2/(2 mu1) D_R. Rejects mu1 = 0.
double energy_F(const LimitContext& ctx, const Field& p, const Field& vr, const Field& n);

// J < H_n^{-1}(2bs (nn)'.Q_R^in - 2cs^2 ((nn)':Q_R^in)(nn - I/3)), P >,
// the argument of H_n^{-1} taken symmetric traceless.
double correction_A(const LimitContext& ctx, const Field& qr, const Field& p, const Field& n, const Field& w);

// C1 with |A| <= (J ||P||^2 + C1 ||Q_R||^2) / 4 by Cauchy-Schwarz.
double correction_A_constant(const LimitContext& ctx, const Field& n, const Field& w);

struct RemainderDiagnostics {
    double E_m = 0.0;
    double E_tilde = 0.0;
    double F = 0.0;
    double A = 0.0;
    double M = 0.0;
    std::map<std::string, double> norms;
};

}  // namespace qll
