// SPDX-License-Identifier: Apache-2.0
#include "qll/qian_sheng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qll/error.hpp"
#include "qll/kinematics.hpp"

namespace qll {

double QSParams::eta() const { return std::pow(eps, m) * J; }

double QSParams::s1() const { return critical_order_parameters(bulk).s1; }

BetaReport beta_admissible(double b1, double b4, double b5, double b6, double b7, double mu1, double mu2) {
    BetaReport r;
    auto add = [&](const std::string& name, double margin, const std::string& msg) {
        r.margins.emplace_back(name, margin);
        if (!(margin > 0.0)) {
            r.admissible = false;
            r.violations.push_back(msg);
        }
    };
    constexpr double tol = 1e-12;
    add("parodi", tol - std::abs(b6 - b5 - mu2), "Parodi relation violated: beta6 - beta5 != mu2");
    add("beta1", b1, "viscosity admissibility violated: beta1 > 0");
    add("beta4", b4, "viscosity admissibility violated: beta4 > 0");
    add("mu1", mu1, "viscosity admissibility violated: mu1 > 0");
    const double red = mu1 > 0.0 ? b4 - mu2 * mu2 / (4.0 * mu1) : -std::numeric_limits<double>::infinity();
    add("beta4_reduced", red, "viscosity admissibility violated: beta4 - mu2^2/(4 mu1) > 0");
    add("beta7", b7 >= 0.0 ? std::max(b7, tol) : b7, "viscosity admissibility violated: beta7 >= 0");
    if (b7 != 0.0) {
        add("beta567", 8.0 * b7 * red - (b5 + b6) * (b5 + b6),
            "viscosity admissibility violated: (beta5+beta6)^2 >= 8 beta7 (beta4 - mu2^2/(4 mu1))");
    } else {
        add("beta56", tol - std::abs(b5 + b6), "viscosity admissibility violated: beta5 + beta6 != 0 while beta7 = 0");
    }
    return r;
}

BetaReport beta_admissible(const QSParams& p) {
    return beta_admissible(p.beta1, p.beta4, p.beta5, p.beta6, p.beta7, p.mu1, p.mu2);
}

void QSParams::validate() const {
    bulk.validate();
    elastic.validate();
    if (!(J > 0.0)) fail(ErrorCode::invariant, "Qian-Sheng parameters: J must be positive");
    if (!(eps > 0.0)) fail(ErrorCode::invariant, "Qian-Sheng parameters: eps must be positive");
    if (m < 0) fail(ErrorCode::invariant, "Qian-Sheng parameters: m must be nonnegative");
    const BetaReport r = beta_admissible(*this);
    if (!r.admissible) fail(ErrorCode::invariant, r.violations.front());
}

Field material_rate(const QSState& s) {
    Field w = s.Qt;
    w += advect(s.v, gradient(s.Q));
    return w;
}

Mat3 viscous_stress_point(const QSParams& p, const QTensor& q, const Mat3& g, const QTensor& qdot) {
    const Mat3 d = sym_part(g);
    const Mat3 om = skew_part(g);
    const Mat3 q2 = matmul(q, q);
    const Mat3 n = qdot - commutator(om, q);
    Mat3 s = (p.beta1 * ddot(q, d)) * q + p.beta4 * d + p.beta5 * matmul(d, q) + p.beta6 * matmul(q, d) +
             p.beta7 * (matmul(d, q2) + matmul(q2, d)) + (0.5 * p.mu2) * n + p.mu1 * commutator(q, n);
    return s;
}

Field viscous_stress(const QSParams& p, const Field& q, const Field& v, const Field& qdot) {
    check_same_grid(q, qdot, "viscous_stress");
    if (v.grid() != q.grid()) fail(ErrorCode::invalid_argument, "viscous_stress: grid mismatch");
    const auto g = velocity_gradient(gradient(v));
    Field out(q.grid(), FieldKind::matrix);
    for (std::size_t pt = 0; pt < q.npoints(); ++pt)
        out.set_mat(pt, viscous_stress_point(p, q.qtensor(pt), g[pt], qdot.qtensor(pt)));
    return out;
}

Field molecular_field(const QSParams& p, const Field& q) {
    Field h = l_operator(p.elastic, q);
    h *= -1.0;
    for (std::size_t pt = 0; pt < q.npoints(); ++pt) {
        const QCoords jc = to_coords(bulk_gradient(p.bulk, q.qtensor(pt)));
        QCoords hc = h.qcoords(pt);
        for (int k = 0; k < 5; ++k) hc[k] -= jc[k] / p.eps;
        h.set_qcoords(pt, hc);
    }
    return h;
}

double qs_free_energy(const QSParams& p, const Field& q) {
    double fb = 0.0;
    for (std::size_t pt = 0; pt < q.npoints(); ++pt) fb += bulk_energy_density(p.bulk, q.qtensor(pt));
    return fb * q.grid()->cell_volume() / p.eps + elastic_energy(p.elastic, q);
}

double qs_dissipation_density(const QSParams& p, const QTensor& q, const Mat3& g, const QTensor& qdot) {
    const Mat3 d = sym_part(g);
    const Mat3 om = skew_part(g);
    const Mat3 n = qdot - commutator(om, q);
    const Mat3 dq = matmul(d, q);
    const double qd = ddot(q, d);
    return p.beta1 * qd * qd + p.beta4 * ddot(d, d) + (p.beta5 + p.beta6) * ddot(dq, d) + 2.0 * p.beta7 * ddot(dq, dq) +
           p.mu1 * ddot(n, n) + p.mu2 * ddot(n, d);
}

EnergyBreakdown qs_energy_audit(const QSParams& p, const QSState& s) {
    EnergyBreakdown e;
    const auto& g = *s.Q.grid();
    const Field w = material_rate(s);
    const auto gv = velocity_gradient(gradient(s.v));
    e.kinetic = 0.5 * inner(s.v, s.v);
    e.inertial = 0.5 * p.eta() * inner(w, w);
    double fb = 0.0, diss = 0.0;
    for (std::size_t pt = 0; pt < s.Q.npoints(); ++pt) {
        const QTensor q = s.Q.qtensor(pt);
        fb += bulk_energy_density(p.bulk, q);
        diss += qs_dissipation_density(p, q, gv[pt], w.qtensor(pt));
    }
    e.bulk = fb * g.cell_volume() / p.eps;
    e.elastic = elastic_energy(p.elastic, s.Q);
    e.total = e.kinetic + e.inertial + e.bulk + e.elastic;
    e.dissipation_rate = -diss * g.cell_volume();
    e.bulk_floor = bulk_energy_density(p.bulk, uniaxial_q({0.0, 0.0, 1.0}, p.s1())) * g.volume() / p.eps;
    return e;
}

namespace {
double nu_max(const QSParams& p, double qn) {
    return std::max({p.beta4, std::abs(p.beta1) * qn * qn, std::abs(p.beta5) * qn, std::abs(p.beta6) * qn,
                     2.0 * std::abs(p.beta7) * qn * qn, std::abs(p.mu1) * qn * qn, std::abs(p.mu2) * qn});
}
}  // namespace

double qs_stability_bound(const QSParams& p, const QSState& s) {
    const auto& g = *s.Q.grid();
    const double h = g.spacing();
    const double S = 2.0 * hn_spectral_radius(p.bulk, p.s1());
    double bound = 0.5 * std::pow(p.eps, 0.5 * p.m) * std::sqrt(p.eps * p.J / S);
    const double vmax = max_pointwise_norm(s.v);
    if (vmax > 0.0) bound = std::min(bound, 0.25 * h / vmax);
    const double qn = std::max(max_pointwise_norm(s.Q), std::sqrt(2.0 / 3.0) * std::abs(p.s1()));
    bound = std::min(bound, 0.5 * h * h / nu_max(p, qn));
    const double kd = g.k_dealiased();
    const double kappa = elastic_symbol_max(p.elastic) * kd * kd;
    if (kappa > 0.0) {
        const double eta = p.eta();
        bound = std::min(bound, (p.mu1 + std::sqrt(p.mu1 * p.mu1 + 8.0 * eta * kappa)) / (2.0 * kappa));
    }
    return bound;
}

QSStepper::QSStepper(QSParams p, bool allow_inadmissible) : p_(p) {
    if (allow_inadmissible) {
        p_.bulk.validate();
        p_.elastic.validate();
    } else {
        p_.validate();
    }
}

namespace {
void check_growth(const char* name, double before, double after, double floor) {
    if (!std::isfinite(after)) fail(ErrorCode::numerical, std::string("instability detector: non-finite ") + name);
    if (after > 10.0 * std::max(before, floor))
        fail(ErrorCode::numerical, std::string("instability detector: ") + name + " grew more than 10x in one step");
}
}  // namespace

QSState QSStepper::step(const QSState& s, double dt) const {
    const QSParams& p = p_;
    if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "qs_step: dt must be positive");
    if (enforce_bound) {
        const double b = qs_stability_bound(p, s);
        if (dt > b * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "qs_step: dt = " << dt << " exceeds the stability bound " << b;
            fail(ErrorCode::numerical, os.str());
        }
    }
    const GridPtr& gp = s.Q.grid();
    const auto& g = *gp;
    const std::size_t np = g.npoints();
    const double eta = p.eta();
    const double ie = 1.0 / p.eps;

    const Spectral qh = to_spectral(s.Q);
    const auto dq = gradient(qh);
    Spectral vh = to_spectral(s.v);
    const auto gv = velocity_gradient(gradient(vh));
    const Field a = advect(s.v, dq);
    Field w = s.Qt;
    w += a;
    const Field wadv = advect(s.v, gradient(w));
    const Field lq = to_real(l_operator(p.elastic, qh));

    Field pnew(gp, FieldKind::qtensor);
    Field sigma(gp, FieldKind::matrix);
    using M5 = Eigen::Matrix<double, 5, 5>;
    using V5 = Eigen::Matrix<double, 5, 1>;
    for (std::size_t pt = 0; pt < np; ++pt) {
        const QCoords qc = s.Q.qcoords(pt);
        const QTensor q = from_coords(qc);
        const Mat3 d = sym_part(gv[pt]);
        const Mat3 om = skew_part(gv[pt]);
        const QCoords jc = to_coords(bulk_gradient(p.bulk, q));
        const QCoords cc = to_coords((-0.5 * p.mu2) * d + p.mu1 * commutator(om, q));
        const M5 hq = bulk_jacobian_matrix(p.bulk, qc);
        V5 av, rhs;
        for (int k = 0; k < 5; ++k) av(k) = a.comp(k)[pt];
        const V5 hav = hq * av;
        for (int k = 0; k < 5; ++k)
            rhs(k) = (eta / dt) * w.comp(k)[pt] - eta * wadv.comp(k)[pt] - ie * jc[k] - lq.comp(k)[pt] +
                     (dt * ie) * hav(k) + cc[k];
        M5 mat = (dt * ie) * hq;
        mat.diagonal().array() += eta / dt + p.mu1;
        const V5 wn = mat.partialPivLu().solve(rhs);
        QCoords wc;
        for (int k = 0; k < 5; ++k) {
            wc[k] = wn(k);
            pnew.comp(k)[pt] = wn(k) - av(k);
        }
        // stress at the old configuration with the updated rate; b4 D is implicit
        Mat3 sg = viscous_stress_point(p, q, gv[pt], from_coords(wc)) - p.beta4 * d;
        sigma.set_mat(pt, sg);
    }
    pnew = dealias(pnew);

    QSState out;
    out.t = s.t + dt;
    out.Qt = pnew;
    out.Q = s.Q;
    out.Q.axpy(dt, pnew);

    sigma += distortion_stress(p.elastic, dq, dq);
    Field force = divergence_rows(sigma, true);
    const auto dv = gradient(vh);
    force -= advect(s.v, dv);
    Spectral fh = to_spectral(force);
    apply_mask(fh);
    leray_project(fh);
    const auto& kd = g.dwavevector();
    for (std::size_t i = 0; i < g.nspec(); ++i) {
        const double k2 = dot(kd[i], kd[i]);
        if (k2 == 0.0) continue;  // mean velocity is conserved
        const double den = 1.0 + dt * 0.5 * p.beta4 * k2;
        for (int c = 0; c < 3; ++c) vh.comp(c)[i] = (vh.comp(c)[i] + dt * fh.comp(c)[i]) / den;
    }
    out.v = to_real(vh);

    const double floor = std::sqrt(g.volume());  // RMS value 1
    check_growth("Q", l2_norm(s.Q), l2_norm(out.Q), floor);
    check_growth("dQ/dt", l2_norm(s.Qt), l2_norm(out.Qt), floor);
    check_growth("v", l2_norm(s.v), l2_norm(out.v), floor);
    return out;
}

QSState qs_step(const QSParams& p, const QSState& s, double dt) { return QSStepper(p).step(s, dt); }

QSState qs_equilibrium(const GridPtr& g, const QSParams& p, const Director& n) {
    QSState s;
    s.Q = Field(g, FieldKind::qtensor);
    s.Qt = Field(g, FieldKind::qtensor);
    s.v = Field(g, FieldKind::vector3);
    const QCoords c = to_coords(uniaxial_q(n, p.s1()));
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) s.Q.set_qcoords(pt, c);
    return s;
}

}  // namespace qll
