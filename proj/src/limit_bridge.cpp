// SPDX-License-Identifier: Apache-2.0
#include "qll/limit_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qll/error.hpp"
#include "qll/kinematics.hpp"

namespace qll {

LimitContext LimitContext::from_qs(const QSParams& qs) {
    LimitContext c;
    c.qs = qs;
    c.s = critical_order_parameters(qs.bulk).s1;
    c.m = qs.m;
    c.chi = qs.m == 0 ? 1 : 0;
    return c;
}

void LimitContext::validate() const {
    qs.bulk.validate();
    qs.elastic.validate();
    if (m < 0) fail(ErrorCode::invariant, "limit context: m must be nonnegative");
    if (chi != (m == 0 ? 1 : 0)) fail(ErrorCode::invariant, "limit context: chi must be 1 iff m = 0");
    if (!(qs.eps >= 0.0)) fail(ErrorCode::invariant, "limit context: eps must be nonnegative");
    if (!(qs.J > 0.0)) fail(ErrorCode::invariant, "limit context: J must be positive");
    const double s1 = critical_order_parameters(qs.bulk).s1;
    if (std::abs(s - s1) > 1e-12 * std::max(1.0, std::abs(s1)))
        fail(ErrorCode::invariant, "limit context: s is not the stable root of 2cs^2 - bs - 3a = 0");
    const BetaReport r = beta_admissible(qs);
    if (!r.admissible) fail(ErrorCode::invariant, r.violations.front());
}

ELParams coefficients_from_qs(const LimitContext& ctx) {
    const QSParams& q = ctx.qs;
    const double s = ctx.s, s2 = s * s;
    ELParams e;
    e.alpha1 = q.beta1 * s2;
    e.alpha2 = 0.5 * q.mu2 * s - q.mu1 * s2;
    e.alpha3 = 0.5 * q.mu2 * s + q.mu1 * s2;
    e.alpha4 = q.beta4 - s / 3.0 * (q.beta5 + q.beta6) + 2.0 / 9.0 * q.beta7 * s2;
    e.alpha5 = q.beta5 * s + q.beta7 * s2 / 3.0;
    e.alpha6 = q.beta6 * s + q.beta7 * s2 / 3.0;
    e.gamma1 = 2.0 * q.mu1 * s2;
    e.gamma2 = q.mu2 * s;
    e.I = ctx.chi * 2.0 * s2 * q.J;
    e.k1 = e.k3 = (2.0 * q.elastic.L1 + q.elastic.L2 + q.elastic.L3) * s2;
    e.k2 = 2.0 * q.elastic.L1 * s2;
    e.k4 = q.elastic.L3 * s2;
    return e;
}

namespace {

void require_matching(const ELParams& a, const ELParams& b) {
    const double x[] = {a.alpha1, a.alpha2, a.alpha3, a.alpha4, a.alpha5, a.alpha6, a.gamma1,
                        a.gamma2, a.I,      a.k1,     a.k2,     a.k3,     a.k4};
    const double y[] = {b.alpha1, b.alpha2, b.alpha3, b.alpha4, b.alpha5, b.alpha6, b.gamma1,
                        b.gamma2, b.I,      b.k1,     b.k2,     b.k3,     b.k4};
    for (int i = 0; i < 13; ++i)
        if (std::abs(x[i] - y[i]) > 1e-12 * std::max(1.0, std::abs(y[i])))
            fail(ErrorCode::invalid_argument, "build_expansion: Ericksen-Leslie coefficients do not match the map");
}

Mat3 sym_outer(const Vec3& a, const Vec3& b) { return outer(a, b) + outer(b, a); }

Field q1perp_field(const LimitContext& ctx, const ExpansionBundle& b, const ELRates& r, const ELState& s,
                   double* out_res, double* ker_res) {
    const QSParams& q = ctx.qs;
    const GridPtr& g = b.n.grid();
    const auto gv = velocity_gradient(gradient(s.v));
    const Field lq = l_operator(q.elastic, b.Q0);
    Field q1(g, FieldKind::qtensor);
    double o2 = 0.0, k2 = 0.0;
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) {
        const Vec3 n = b.n.vec(pt);
        const Vec3 w = r.w.vec(pt);
        const QTensor q0 = b.Q0.qtensor(pt);
        Mat3 rhs = (-q.mu1 * ctx.s) * sym_outer(w, n) - lq.qtensor(pt) - (0.5 * q.mu2) * sym_part(gv[pt]) +
                   q.mu1 * commutator(skew_part(gv[pt]), q0);
        if (ctx.chi) {
            const Vec3 wd = r.wd.vec(pt);
            rhs -= (q.J * ctx.s) * (sym_outer(wd, n) + 2.0 * outer(w, w));
        }
        const Projections pr = projections(n, rhs);
        const QTensor x = hn_inverse(q.bulk, n, ctx.s, pr.out);
        q1.set_qtensor(pt, x);
        const Projections chk = projections(n, hessian_Hn(q.bulk, n, ctx.s, x) - pr.out);
        o2 += ddot(chk.out, chk.out);
        k2 += ddot(pr.in, pr.in);
    }
    const double cv = g->cell_volume();
    if (out_res) *out_res = std::sqrt(o2 * cv);
    if (ker_res) *ker_res = std::sqrt(k2 * cv);
    return q1;
}

ExpansionBundle expansion_at(const LimitContext& ctx, const ELParams& el, const ELState& s) {
    ExpansionBundle b;
    b.t = s.t;
    b.n = s.n;
    b.v0 = s.v;
    const ELRates r = el_rates(el, s);
    b.w = r.w;
    const GridPtr& g = s.n.grid();
    const Field vgn = advect(s.v, gradient(s.n));
    b.Q0 = Field(g, FieldKind::qtensor);
    b.Q0t = Field(g, FieldKind::qtensor);
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) {
        const Vec3 n = s.n.vec(pt);
        b.Q0.set_qtensor(pt, uniaxial_q(n, ctx.s));
        b.Q0t.set_qtensor(pt, ctx.s * sym_outer(r.w.vec(pt) - vgn.vec(pt), n));
    }
    b.Q1perp = q1perp_field(ctx, b, r, s, &b.out_residual, &b.kernel_residual);
    return b;
}

}  // namespace

ExpansionBundle build_expansion(const LimitContext& ctx, const ELParams& el, const ELState& s, const ELState* next) {
    require_matching(el, coefficients_from_qs(ctx));
    require_unit_field(s.n);
    ExpansionBundle b = expansion_at(ctx, el, s);
    if (next) {
        const double dt = next->t - s.t;
        if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "build_expansion: next state must be later");
        const ExpansionBundle nb = expansion_at(ctx, el, *next);
        b.Q1perp_t = nb.Q1perp;
        b.Q1perp_t -= b.Q1perp;
        b.Q1perp_t *= 1.0 / dt;
    }
    return b;
}

double perturbation_size(const LimitContext& ctx, const ExpansionBundle& b, const Perturbation& r) {
    double sz = 0.0;
    if (!r.v.empty()) sz += sobolev_norm(r.v, 2);
    if (!r.Q.empty()) {
        sz += sobolev_norm(r.Q, 3);
        double o2 = 0.0;
        for (std::size_t pt = 0; pt < r.Q.npoints(); ++pt) {
            const QTensor x = projections(b.n.vec(pt), r.Q.qtensor(pt)).out;
            o2 += ddot(x, x);
        }
        const double po = std::sqrt(o2 * r.Q.grid()->cell_volume());
        if (po > 0.0) sz += ctx.qs.eps > 0.0 ? po / ctx.qs.eps : std::numeric_limits<double>::infinity();
    }
    if (!r.Qt.empty()) sz += std::pow(ctx.qs.eps, 0.5 * ctx.m) * sobolev_norm(r.Qt, 2);
    return sz;
}

QSState well_prepared_initial_data(const LimitContext& ctx, const ExpansionBundle& b, const Perturbation& r,
                                   double e0, int order, std::vector<std::string>* warnings) {
    if (order < 1) fail(ErrorCode::invalid_argument, "well_prepared_initial_data: order must be >= 1");
    const double eps = ctx.qs.eps;
    QSState s;
    s.t = b.t;
    s.Q = b.Q0;
    s.Qt = b.Q0t;
    s.v = b.v0;
    if (eps == 0.0) {
        if (warnings) warnings->push_back("eps = 0: returning the leading-order state Q0");
        return s;
    }
    const double size = perturbation_size(ctx, b, r);
    if (size > e0) {
        std::ostringstream os;
        os << "well_prepared_initial_data: perturbation size " << size << " exceeds E0 = " << e0;
        fail(ErrorCode::invalid_argument, os.str());
    }
    const double ek = std::pow(eps, order);
    s.Q.axpy(eps, b.Q1perp);
    if (!b.Q1perp_t.empty()) s.Qt.axpy(eps, b.Q1perp_t);
    if (!r.Q.empty()) s.Q.axpy(ek, r.Q);
    if (!r.Qt.empty()) s.Qt.axpy(ek, r.Qt);
    if (!r.v.empty()) s.v.axpy(ek, r.v);
    return s;
}

Remainder extract_remainder(const LimitContext& ctx, const QSState& s, const ExpansionBundle& b, int order) {
    if (std::abs(s.t - b.t) > 1e-12) fail(ErrorCode::invalid_argument, "extract_remainder: time mismatch");
    const double eps = ctx.qs.eps;
    if (!(eps > 0.0)) fail(ErrorCode::invalid_argument, "extract_remainder: eps must be positive");
    const double ik = std::pow(eps, -order);
    Remainder r;
    r.Q = s.Q;
    r.Q -= b.Q0;
    r.Q.axpy(-eps, b.Q1perp);
    r.Q *= ik;
    r.v = s.v;
    r.v -= b.v0;
    r.v *= ik;
    if (!b.Q1perp_t.empty()) {
        r.Qt = s.Qt;
        r.Qt -= b.Q0t;
        r.Qt.axpy(-eps, b.Q1perp_t);
        r.Qt *= ik;
    }
    return r;
}

namespace {

// int H_n(x):x dx + eps <L x, x>
double heps_pair(const LimitContext& ctx, const Field& n, const Field& x) {
    double h = 0.0;
    for (std::size_t pt = 0; pt < x.npoints(); ++pt) {
        const QTensor q = x.qtensor(pt);
        h += ddot(hessian_Hn(ctx.qs.bulk, n.vec(pt), ctx.s, q), q);
    }
    h *= x.grid()->cell_volume();
    if (ctx.qs.eps != 0.0) h += ctx.qs.eps * inner(l_operator(ctx.qs.elastic, x), x);
    return h;
}

double grad_sq(const Field& f) {
    double s = 0.0;
    for (const Field& d : gradient(f)) s += inner(d, d);
    return s;
}

double hgrad_pair(const LimitContext& ctx, const Field& n, const Field& x) {
    double s = 0.0;
    for (const Field& d : gradient(x)) s += heps_pair(ctx, n, d);
    return s;
}

struct Tiers {
    double t0 = 0.0, t1 = 0.0, t2 = 0.0;
};

// Shared tiers of both E functionals; qt may be empty.
Tiers energy_tiers(const LimitContext& ctx, const Field& q, const Field& qt, const Field& v, const Field& n) {
    const double eps = ctx.qs.eps;
    if (!(eps > 0.0)) fail(ErrorCode::invalid_argument, "remainder energy: eps must be positive");
    const double ej = std::pow(eps, ctx.m) * ctx.qs.J;
    Tiers t;
    t.t0 = inner(v, v) + heps_pair(ctx, n, q) / eps;
    t.t1 = grad_sq(v) + hgrad_pair(ctx, n, q) / eps;
    const Field lq = laplacian(q);
    const Field lv = laplacian(v);
    t.t2 = inner(lv, lv) + heps_pair(ctx, n, lq) / eps;
    if (!qt.empty()) {
        t.t0 += ej * inner(qt, qt);
        t.t1 += ej * grad_sq(qt);
        const Field lqt = laplacian(qt);
        t.t2 += ej * inner(lqt, lqt);
    }
    return t;
}

}  // namespace

double energy_tilde_Em(const LimitContext& ctx, const Field& q, const Field& qt, const Field& v, const Field& n) {
    const Tiers t = energy_tiers(ctx, q, qt, v, n);
    const double eps = ctx.qs.eps;
    return t.t0 + inner(q, q) + eps * eps * t.t1 + std::pow(eps, 4) * t.t2;
}

Field remainder_rate(const Field& qr_t, const Field& qr, const Field& vr, const Field& vtilde, const Field& q) {
    Field p = qr_t;
    p += advect(vtilde, gradient(qr));
    p += advect(vr, gradient(q));
    return p;
}

double energy_Em(const LimitContext& ctx, const Field& qr, const Field& p, const Field& vr, const Field& n, double M) {
    const Tiers t = energy_tiers(ctx, qr, p, vr, n);
    const double eps = ctx.qs.eps;
    return 0.5 * (t.t0 + M * inner(qr, qr)) + eps * eps * t.t1 + std::pow(eps, 4) * t.t2;
}

namespace {
double nn_rate_max(const Field& n, const Field& w) {
    double mx = 0.0;
    for (std::size_t pt = 0; pt < n.npoints(); ++pt)
        mx = std::max(mx, frob_norm(sym_outer(w.vec(pt), n.vec(pt))));
    return mx;
}
}  // namespace

double m_rule(const LimitContext& ctx, const Field& n, const Field& w) {
    const auto& b = ctx.qs.bulk;
    const double s = ctx.s;
    const double k = 2.0 * b.b * s + 2.0 * b.c * s * s;
    return std::max(1.0, 4.0 * nn_rate_max(n, w) * ctx.qs.J * k * hn_inverse_opnorm(b, s));
}

double energy_F(const LimitContext& ctx, const Field& p, const Field& vr, const Field& n) {
    const QSParams& q = ctx.qs;
    if (!(q.mu1 > 0.0)) fail(ErrorCode::invalid_argument, "energy_F: mu1 must be positive");
    const double eps = ctx.qs.eps;
    const double r = q.mu2 / (2.0 * q.mu1);
    std::vector<QTensor> q0(n.npoints());
    for (std::size_t pt = 0; pt < n.npoints(); ++pt) q0[pt] = uniaxial_q(n.vec(pt), ctx.s);
    const double cv = n.grid()->cell_volume();
    // |grad u|^2 + mu1 |pp - [Omega(u), Q0] + r D(u)|^2 integrated
    auto tier = [&](const Field& u, const Field& pp) {
        const auto du = gradient(u);
        const auto gu = velocity_gradient(du);
        double s = 0.0;
        for (const Field& d : du) s += inner(d, d);
        double us = 0.0;
        for (std::size_t pt = 0; pt < u.npoints(); ++pt) {
            const Mat3 x = pp.qtensor(pt) - commutator(skew_part(gu[pt]), q0[pt]) + r * sym_part(gu[pt]);
            us += ddot(x, x);
        }
        return s + q.mu1 * us * cv;
    };
    double f0 = tier(vr, p);
    double f1 = 0.0;
    const auto dv = gradient(vr);
    const auto dp = gradient(p);
    for (std::size_t i = 0; i < dv.size(); ++i) f1 += tier(dv[i], dp[i]);
    const double f2 = tier(laplacian(vr), laplacian(p));
    return f0 + eps * eps * f1 + std::pow(eps, 4) * f2;
}

double correction_A(const LimitContext& ctx, const Field& qr, const Field& p, const Field& n, const Field& w) {
    const auto& b = ctx.qs.bulk;
    const double s = ctx.s;
    double a = 0.0;
    for (std::size_t pt = 0; pt < qr.npoints(); ++pt) {
        const Vec3 nv = n.vec(pt);
        const Mat3 nnd = sym_outer(w.vec(pt), nv);
        const QTensor qin = projections(nv, qr.qtensor(pt)).in;
        const Mat3 arg = (2.0 * b.b * s) * matmul(nnd, qin) -
                         (2.0 * b.c * s * s * ddot(nnd, qin)) * (outer(nv, nv) - (1.0 / 3.0) * Mat3::identity());
        const QTensor x = hn_inverse(b, nv, s, project_sym_traceless(arg));
        a += ddot(x, p.qtensor(pt));
    }
    return ctx.qs.J * a * qr.grid()->cell_volume();
}

double correction_A_constant(const LimitContext& ctx, const Field& n, const Field& w) {
    const auto& b = ctx.qs.bulk;
    const double s = ctx.s;
    const double kappa = hn_inverse_opnorm(b, s) * nn_rate_max(n, w) *
                         (2.0 * b.b * s + 2.0 * b.c * s * s * std::sqrt(2.0 / 3.0));
    return 4.0 * ctx.qs.J * kappa * kappa;
}

}  // namespace qll
