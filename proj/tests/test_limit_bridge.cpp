// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qll/error.hpp"
#include "qll/experiments.hpp"
#include "qll/kinematics.hpp"
#include "qll/limit_bridge.hpp"
#include "test_util.hpp"

using namespace qll;

namespace {

ExperimentConfig small_config(int m, double eps) {
    ExperimentConfig cfg = default_config();
    cfg.grid.n = 16;
    cfg.m = m;
    cfg.params.m = m;
    cfg.params.eps = eps;
    cfg.params.beta5 = 0.5, cfg.params.beta6 = 1.0, cfg.params.beta7 = 1.0, cfg.params.mu2 = 0.5;
    cfg.scenario.name = "shear";
    cfg.scenario.amplitude = 0.3;
    return cfg;
}

struct Setup {
    LimitContext ctx;
    ELParams el;
    GridPtr g;
    ELState s;
};

Setup setup(int m, double eps) {
    const ExperimentConfig cfg = small_config(m, eps);
    Setup u;
    u.ctx = config_context(cfg, eps);
    u.el = coefficients_from_qs(u.ctx);
    u.g = Grid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.box_length);
    u.s = scenario_el_state(cfg, u.g, u.el);
    return u;
}

Perturbation small_perturbation(const GridPtr& g, std::uint64_t seed, double amp) {
    std::mt19937_64 rng(seed);
    Perturbation r;
    r.Q = dealias(testutil::random_smooth(g, FieldKind::qtensor, rng, amp));
    r.v = leray_project(dealias(testutil::random_smooth(g, FieldKind::vector3, rng, amp)));
    r.Qt = dealias(testutil::random_smooth(g, FieldKind::qtensor, rng, amp));
    return r;
}

double max_diff(const Field& a, const Field& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) e = std::max(e, std::abs(a.data()[i] - b.data()[i]));
    return e;
}

}  // namespace

TEST_CASE("coefficient map agrees with the oracle on random admissible sets") {
    oracle::Rng rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 1000) {
        QSParams q;
        q.bulk = {2.0 * u(rng), 2.0 * u(rng), 0.2 + 2.0 * u(rng)};
        q.elastic = {0.1 + u(rng), u(rng) - 0.5, u(rng) - 0.5};
        q.beta1 = 3.0 * u(rng);
        q.beta4 = 0.5 + 3.0 * u(rng);
        q.beta5 = 2.0 * u(rng) - 1.0;
        q.mu1 = 0.1 + 2.0 * u(rng);
        q.mu2 = 2.0 * u(rng) - 1.0;
        q.beta6 = q.beta5 + q.mu2;
        q.beta7 = 3.0 * u(rng);
        q.J = 0.1 + 2.0 * u(rng);
        q.m = u(rng) < 0.5 ? 0 : 2;
        if (!beta_admissible(q).admissible) continue;
        try {
            q.bulk.validate();
            q.elastic.validate();
        } catch (const Error&) {
            continue;
        }
        ++tested;
        const LimitContext ctx = LimitContext::from_qs(q);
        CHECK_NOTHROW(ctx.validate());
        const ELParams e = coefficients_from_qs(ctx);
        const double s = oracle::critical_s(q.bulk.a, q.bulk.b, q.bulk.c)[0];
        CHECK(ctx.s == doctest::Approx(s).epsilon(1e-12));
        const oracle::ELRow o = oracle::map_coefficients(q.beta1, q.beta4, q.beta5, q.beta6, q.beta7, q.mu1, q.mu2, q.J,
                                                         q.elastic.L1, q.elastic.L2, q.elastic.L3, s, q.m);
        const double got[] = {e.alpha1, e.alpha2, e.alpha3, e.alpha4, e.alpha5, e.alpha6, e.gamma1,
                              e.gamma2, e.I,      e.k1,     e.k2,     e.k3,     e.k4};
        const double want[] = {o.alpha[0], o.alpha[1], o.alpha[2], o.alpha[3], o.alpha[4], o.alpha[5], o.gamma1,
                               o.gamma2,   o.I,        o.k1,       o.k2,       o.k3,       o.k4};
        for (int i = 0; i < 13; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11).scale(1.0));
        const double sc = 1e-13 * std::max(1.0, std::abs(e.alpha3) + std::abs(e.alpha2) + std::abs(e.alpha6));
        CHECK(std::abs((e.alpha2 + e.alpha3) - q.mu2 * ctx.s) < sc);
        CHECK(std::abs((e.alpha6 - e.alpha5) - q.mu2 * ctx.s) < sc);
        CHECK(std::abs(e.gamma1 - (e.alpha3 - e.alpha2)) < sc);
        CHECK(std::abs(e.gamma1 - 2.0 * q.mu1 * ctx.s * ctx.s) < sc);
        CHECK(std::abs(e.gamma2 - (e.alpha6 - e.alpha5)) < sc);
        if (q.m != 0) CHECK(e.I == 0.0);
        CHECK_NOTHROW(e.validate());
    }
}

TEST_CASE("worked example row") {
    QSParams q;
    q.beta5 = 0.5, q.beta6 = 1.0, q.beta7 = 1.0, q.mu2 = 0.5;
    q.elastic = {1.0, 0.0, 0.0};
    const LimitContext ctx = LimitContext::from_qs(q);
    CHECK(ctx.s == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(ctx.chi == 1);
    const ELParams e = coefficients_from_qs(ctx);
    CHECK(e.alpha1 == doctest::Approx(2.25));
    CHECK(e.alpha2 == doctest::Approx(-1.875));
    CHECK(e.alpha3 == doctest::Approx(2.625));
    CHECK(e.alpha4 == doctest::Approx(1.75));
    CHECK(e.alpha5 == doctest::Approx(1.5));
    CHECK(e.alpha6 == doctest::Approx(2.25));
    CHECK(e.gamma1 == doctest::Approx(4.5));
    CHECK(e.gamma2 == doctest::Approx(0.75));
    CHECK(e.I == doctest::Approx(4.5));
    CHECK(e.k1 == doctest::Approx(4.5));
    CHECK(e.k2 == doctest::Approx(4.5));
    CHECK(e.k3 == doctest::Approx(4.5));
    CHECK(e.k4 == 0.0);
    q.m = 2;
    const LimitContext c2 = LimitContext::from_qs(q);
    CHECK(c2.chi == 0);
    CHECK(coefficients_from_qs(c2).I == 0.0);
    LimitContext bad = c2;
    bad.chi = 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = c2;
    bad.s = 1.4;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("expansion residuals") {
    for (int m : {0, 2}) {
        const Setup u = setup(m, 0.1);
        const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s);
        double scale = 0.0;
        for (std::size_t pt = 0; pt < u.g->npoints(); ++pt) scale = std::max(scale, frob_norm(b.Q1perp.qtensor(pt)));
        CHECK(scale > 1e-3);
        CHECK_MESSAGE(b.out_residual < 1e-12, "m=" << m);
        // the kernel part of the source vanishes along Ericksen-Leslie flows
        CHECK_MESSAGE(b.kernel_residual < 1e-9, "m=" << m);
        for (std::size_t pt = 0; pt < u.g->npoints(); ++pt) {
            const Vec3 n = b.n.vec(pt);
            CHECK(frob_norm(projections(n, b.Q1perp.qtensor(pt)).in) < 1e-12);
            CHECK(frob_norm(b.Q0.qtensor(pt) - oracle::uniaxial(n, u.ctx.s)) < 1e-14);
        }
        CHECK(b.Q1perp_t.empty());

        ELParams wrong = u.el;
        wrong.alpha1 += 0.1;
        CHECK_THROWS_AS(build_expansion(u.ctx, wrong, u.s), Error);
        ELState same = u.s;
        CHECK_THROWS_AS(build_expansion(u.ctx, u.el, u.s, &same), Error);
    }
}

TEST_CASE("well-prepared data and remainder extraction round trip") {
    for (int m : {0, 2}) {
        const Setup u = setup(m, 0.1);
        ELStepper st(u.el);
        const ELState next = st.step(u.s, 1e-3);
        const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s, &next);
        REQUIRE_FALSE(b.Q1perp_t.empty());
        const Perturbation r = small_perturbation(u.g, 62, 0.05);
        for (int order : {1, 3}) {
            const QSState s = well_prepared_initial_data(u.ctx, b, r, 1e6, order);
            CHECK(s.t == b.t);
            const Remainder rr = extract_remainder(u.ctx, s, b, order);
            const double k = std::pow(u.ctx.qs.eps, order);
            // roundoff of O(1) fields amplified by eps^-order
            const double tol = 1e-12 * std::max(1.0, 1e-3 / k);
            CHECK(max_diff(rr.Q, r.Q) < tol);
            CHECK(max_diff(rr.v, r.v) < tol);
            CHECK(max_diff(rr.Qt, r.Qt) < tol);
        }
        // an empty perturbation reproduces the truncated expansion
        const QSState s0 = well_prepared_initial_data(u.ctx, b, Perturbation{}, 1.0);
        Field d = s0.Q;
        d -= b.Q0;
        d.axpy(-u.ctx.qs.eps, b.Q1perp);
        CHECK(max_abs(d) < 1e-15);
    }
}

TEST_CASE("well-prepared data guards") {
    Setup u = setup(2, 0.1);
    const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s);
    const Perturbation r = small_perturbation(u.g, 63, 0.05);
    const double size = perturbation_size(u.ctx, b, r);
    CHECK(size > 0.0);
    CHECK_THROWS_AS(well_prepared_initial_data(u.ctx, b, r, 0.5 * size), Error);
    CHECK_NOTHROW(well_prepared_initial_data(u.ctx, b, r, 2.0 * size));
    CHECK_THROWS_AS(well_prepared_initial_data(u.ctx, b, r, 2.0 * size, 0), Error);
    // a purely out-of-kernel perturbation is penalised by 1/eps
    Perturbation po;
    po.Q = b.Q1perp;
    CHECK(perturbation_size(u.ctx, b, po) > sobolev_norm(b.Q1perp, 3));

    LimitContext z = u.ctx;
    z.qs.eps = 0.0;
    std::vector<std::string> warnings;
    const QSState s0 = well_prepared_initial_data(z, b, r, 1.0, 3, &warnings);
    CHECK(warnings.size() == 1);
    CHECK(max_diff(s0.Q, b.Q0) == 0.0);

    QSState s = well_prepared_initial_data(u.ctx, b, r, 1e6);
    s.t += 1e-6;
    CHECK_THROWS_AS(extract_remainder(u.ctx, s, b), Error);
    s.t = b.t + 1e-13;
    CHECK_NOTHROW(extract_remainder(u.ctx, s, b));
}

TEST_CASE("remainder energies") {
    const Setup u = setup(0, 0.1);
    const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s);
    const Perturbation r = small_perturbation(u.g, 64, 0.1);
    const Field zq(u.g, FieldKind::qtensor), zv(u.g, FieldKind::vector3);
    CHECK(energy_tilde_Em(u.ctx, zq, zq, zv, b.n) == 0.0);
    const double e1 = energy_tilde_Em(u.ctx, r.Q, r.Qt, r.v, b.n);
    CHECK(e1 > 0.0);
    // quadratic in the fields
    CHECK(energy_tilde_Em(u.ctx, 2.0 * r.Q, 2.0 * r.Qt, 2.0 * r.v, b.n) == doctest::Approx(4.0 * e1).epsilon(1e-12));
    const double em = energy_Em(u.ctx, r.Q, r.Qt, r.v, b.n, 1.0);
    CHECK(em > 0.0);
    CHECK(energy_Em(u.ctx, r.Q, r.Qt, r.v, b.n, 3.0) ==
          doctest::Approx(em + inner(r.Q, r.Q)).epsilon(1e-12));

    // velocity only: |v|^2 + eps^2 |grad v|^2 + eps^4 |lap v|^2
    const double eps = u.ctx.qs.eps;
    double g2 = 0.0;
    for (const Field& d : gradient(r.v)) g2 += inner(d, d);
    const Field lv = laplacian(r.v);
    CHECK(energy_tilde_Em(u.ctx, zq, Field(), r.v, b.n) ==
          doctest::Approx(inner(r.v, r.v) + eps * eps * g2 + std::pow(eps, 4) * inner(lv, lv)).epsilon(1e-12));

    const Field p = remainder_rate(r.Qt, r.Q, r.v, b.v0, b.Q0);
    Field chk = r.Qt;
    chk += advect(b.v0, gradient(r.Q));
    chk += advect(r.v, gradient(b.Q0));
    CHECK(max_diff(p, chk) < 1e-14);

    CHECK(energy_F(u.ctx, p, r.v, b.n) > 0.0);
    LimitContext bad = u.ctx;
    bad.qs.mu1 = 0.0;
    CHECK_THROWS_AS(energy_F(bad, p, r.v, b.n), Error);
    LimitContext z = u.ctx;
    z.qs.eps = 0.0;
    CHECK_THROWS_AS(energy_tilde_Em(z, r.Q, r.Qt, r.v, b.n), Error);
}

TEST_CASE("correction term bound and m rule") {
    for (int m : {0, 2}) {
        const Setup u = setup(m, 0.1);
        const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s);
        const double C1 = correction_A_constant(u.ctx, b.n, b.w);
        CHECK(C1 >= 0.0);
        const double mr = m_rule(u.ctx, b.n, b.w);
        CHECK(mr >= 1.0);
        for (std::uint64_t seed = 70; seed < 80; ++seed) {
            const Perturbation r = small_perturbation(u.g, seed, 0.3);
            const double A = correction_A(u.ctx, r.Q, r.Qt, b.n, b.w);
            const double bound = 0.25 * (u.ctx.qs.J * inner(r.Qt, r.Qt) + C1 * inner(r.Q, r.Q));
            CHECK(std::abs(A) <= bound * (1.0 + 1e-12));
        }
        // a static director makes the correction vanish
        const Field w0(u.g, FieldKind::vector3);
        const Perturbation r = small_perturbation(u.g, 81, 0.3);
        CHECK(correction_A(u.ctx, r.Q, r.Qt, b.n, w0) == 0.0);
        CHECK(m_rule(u.ctx, b.n, w0) == 1.0);
    }
}

namespace {

// sum over points of |f|^2 times the cell volume, read entry by entry
double sq(const Field& f) {
    double s = 0.0;
    for (std::size_t pt = 0; pt < f.npoints(); ++pt) {
        if (f.kind() == FieldKind::qtensor) {
            const double x = oracle::frob(f.qtensor(pt));
            s += x * x;
        } else {
            const Vec3 v = f.vec(pt);
            s += v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        }
    }
    return s * f.grid()->cell_volume();
}

// int H_n(x):x + eps <L x, x>, with <L x, x> = 2 x elastic energy
double oracle_heps(const LimitContext& ctx, const Field& n, const Field& x) {
    const auto& b = ctx.qs.bulk;
    const auto& L = ctx.qs.elastic;
    const auto dx = gradient(x);
    double h = 0.0, el = 0.0;
    for (std::size_t pt = 0; pt < x.npoints(); ++pt) {
        const Mat3 q = x.qtensor(pt);
        const Mat3 hq = oracle::hn_apply(b.b, b.c, ctx.s, n.vec(pt), q);
        for (int k = 0; k < 9; ++k) h += hq.a[k] * q.a[k];
        std::vector<Mat3> m;
        for (const Field& d : dx) m.push_back(d.qtensor(pt));
        el += oracle::elastic_density(L.L1, L.L2, L.L3, m);
    }
    const double cv = x.grid()->cell_volume();
    return h * cv + ctx.qs.eps * 2.0 * el * cv;
}

double oracle_Em(const LimitContext& ctx, const Field& q, const Field& p, const Field& v, const Field& n, double M) {
    const double eps = ctx.qs.eps, ej = std::pow(eps, ctx.m) * ctx.qs.J;
    const double t0 = sq(v) + ej * sq(p) + oracle_heps(ctx, n, q) / eps;
    double t1 = 0.0;
    const auto dq = gradient(q), dp = gradient(p), dv = gradient(v);
    for (std::size_t k = 0; k < dq.size(); ++k) t1 += sq(dv[k]) + ej * sq(dp[k]) + oracle_heps(ctx, n, dq[k]) / eps;
    const double t2 = sq(laplacian(v)) + ej * sq(laplacian(p)) + oracle_heps(ctx, n, laplacian(q)) / eps;
    return 0.5 * (t0 + M * sq(q)) + eps * eps * t1 + std::pow(eps, 4) * t2;
}

// |grad u|^2 + mu1 |pp - [Omega(u), Q0] + mu2/(2 mu1) D(u)|^2
double oracle_F_tier(const LimitContext& ctx, const Field& u, const Field& pp, const Field& n) {
    const double r = ctx.qs.mu2 / (2 * ctx.qs.mu1);
    const auto du = gradient(u);
    double g2 = 0.0;
    for (const Field& d : du) g2 += sq(d);
    double us = 0.0;
    for (std::size_t pt = 0; pt < u.npoints(); ++pt) {
        Mat3 G, D, W;
        for (std::size_t j = 0; j < du.size(); ++j)
            for (int i = 0; i < 3; ++i) G(i, static_cast<int>(j)) = du[j].vec(pt)[i];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) D(i, j) = 0.5 * (G(i, j) + G(j, i)), W(i, j) = 0.5 * (G(i, j) - G(j, i));
        const Mat3 q0 = oracle::uniaxial(n.vec(pt), ctx.s);
        const Mat3 wq = oracle::mul(W, q0), qw = oracle::mul(q0, W), P = pp.qtensor(pt);
        for (int k = 0; k < 9; ++k) {
            const double x = P.a[k] - (wq.a[k] - qw.a[k]) + r * D.a[k];
            us += x * x;
        }
    }
    return g2 + ctx.qs.mu1 * us * u.grid()->cell_volume();
}

double oracle_F(const LimitContext& ctx, const Field& p, const Field& v, const Field& n) {
    const double eps = ctx.qs.eps;
    double f1 = 0.0;
    const auto dv = gradient(v), dp = gradient(p);
    for (std::size_t k = 0; k < dv.size(); ++k) f1 += oracle_F_tier(ctx, dv[k], dp[k], n);
    return oracle_F_tier(ctx, v, p, n) + eps * eps * f1 +
           std::pow(eps, 4) * oracle_F_tier(ctx, laplacian(v), laplacian(p), n);
}

double oracle_A(const LimitContext& ctx, const Field& qr, const Field& p, const Field& n, const Field& w) {
    const auto& b = ctx.qs.bulk;
    const double s = ctx.s;
    double a = 0.0;
    for (std::size_t pt = 0; pt < qr.npoints(); ++pt) {
        const Vec3 nv = n.vec(pt), wv = w.vec(pt);
        Mat3 nnd, nn;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) nnd(i, j) = wv[i] * nv[j] + nv[i] * wv[j], nn(i, j) = nv[i] * nv[j];
        const Mat3 qin = oracle::kernel_part(nv, qr.qtensor(pt));
        double c = 0.0;
        for (int k = 0; k < 9; ++k) c += nnd.a[k] * qin.a[k];
        Mat3 arg = oracle::mul(nnd, qin);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                arg(i, j) = 2 * b.b * s * arg(i, j) - 2 * b.c * s * s * c * (nn(i, j) - (i == j ? 1.0 / 3.0 : 0.0));
        // symmetric traceless part
        Mat3 st;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) st(i, j) = 0.5 * (arg(i, j) + arg(j, i));
        const double t = oracle::tr(st) / 3.0;
        for (int i = 0; i < 3; ++i) st(i, i) -= t;
        const Mat3 x = oracle::hn_pinv_apply(b.b, b.c, s, nv, st);
        const Mat3 P = p.qtensor(pt);
        for (int k = 0; k < 9; ++k) a += x.a[k] * P.a[k];
    }
    return ctx.qs.J * a * qr.grid()->cell_volume();
}

}  // namespace

TEST_CASE("remainder functionals match quadrature oracles") {
    for (int m : {0, 2}) {
        Setup u = setup(m, 0.1);
        u.ctx.qs.elastic = {1.0, 0.7, -0.4};
        const ExpansionBundle b = build_expansion(u.ctx, coefficients_from_qs(u.ctx), u.s);
        for (std::uint64_t seed = 90; seed < 93; ++seed) {
            const Perturbation r = small_perturbation(u.g, seed, 0.3);
            const double M = m_rule(u.ctx, b.n, b.w);
            CHECK(energy_Em(u.ctx, r.Q, r.Qt, r.v, b.n, M) ==
                  doctest::Approx(oracle_Em(u.ctx, r.Q, r.Qt, r.v, b.n, M)).epsilon(1e-10));
            CHECK(energy_F(u.ctx, r.Qt, r.v, b.n) == doctest::Approx(oracle_F(u.ctx, r.Qt, r.v, b.n)).epsilon(1e-10));
            const double A = correction_A(u.ctx, r.Q, r.Qt, b.n, b.w);
            CHECK(A == doctest::Approx(oracle_A(u.ctx, r.Q, r.Qt, b.n, b.w)).epsilon(1e-10).scale(1e-12));
            // the correction is controlled by half the energy
            CHECK_MESSAGE(std::abs(A) <= 0.5 * energy_Em(u.ctx, r.Q, r.Qt, r.v, b.n, M), "m=" << m);
        }
    }
}

TEST_CASE("special cases of the bridge operations") {
    // constant director at rest: every source term vanishes
    for (int m : {0, 2}) {
        const Setup u = setup(m, 0.1);
        const ELState c = el_constant_state(u.g, u.el, {0.0, 1.0, 0.0});
        const ExpansionBundle b = build_expansion(u.ctx, u.el, c);
        CHECK(max_abs(b.Q1perp) < 1e-14);
    }
    // without director inertia Q1perp does not depend on J
    {
        const Setup u = setup(2, 0.1);
        LimitContext c3 = u.ctx;
        c3.qs.J = 3.0;
        const ELParams e3 = coefficients_from_qs(c3);
        CHECK(e3.I == 0.0);
        const ExpansionBundle a = build_expansion(u.ctx, u.el, u.s), b = build_expansion(c3, e3, u.s);
        CHECK(max_diff(a.Q1perp, b.Q1perp) < 1e-14);
    }
    // the map is linear in (mu1, mu2)
    {
        QSParams q;
        q.mu1 = 0.0, q.mu2 = 0.0, q.beta5 = 0.5, q.beta6 = 0.5, q.beta7 = 1.0;
        const ELParams e = coefficients_from_qs(LimitContext::from_qs(q));
        CHECK(e.alpha2 == 0.0);
        CHECK(e.alpha3 == 0.0);
        CHECK(e.gamma1 == 0.0);
        CHECK(e.gamma2 == 0.0);
        CHECK(e.alpha1 == doctest::Approx(2.25));
        CHECK(e.alpha5 == doctest::Approx(0.5 * 1.5 + 2.25 / 3.0));
    }

    // constant director, kernel-valued Q: the bulk tier only sees L and M
    const Setup u = setup(0, 0.1);
    const Vec3 n0{1.0, 0.0, 0.0};
    const ELState c = el_constant_state(u.g, u.el, n0);
    std::mt19937_64 rng(95);
    const Field mf = testutil::random_smooth(u.g, FieldKind::vector3, rng, 0.5);
    Field q(u.g, FieldKind::qtensor);
    for (std::size_t pt = 0; pt < u.g->npoints(); ++pt) {
        Vec3 m = mf.vec(pt);
        m[0] = 0.0;
        Mat3 k;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k(i, j) = n0[i] * m[j] + m[i] * n0[j];
        q.set_qtensor(pt, k);
    }
    const Field zq(u.g, FieldKind::qtensor), zv(u.g, FieldKind::vector3);
    const double M = 2.0, eps = u.ctx.qs.eps;
    auto lpair = [&](const Field& x) { return inner(l_operator(u.ctx.qs.elastic, x), x); };
    double l1 = 0.0;
    for (const Field& d : gradient(q)) l1 += lpair(d);
    const double want =
        0.5 * (M * sq(q) + lpair(q)) + eps * eps * l1 + std::pow(eps, 4) * lpair(laplacian(q));
    CHECK(energy_Em(u.ctx, q, zq, zv, c.n, M) == doctest::Approx(want).epsilon(1e-10));

    // Q_R with no kernel part gives no correction
    Field qo(u.g, FieldKind::qtensor);
    const Field raw = testutil::random_smooth(u.g, FieldKind::qtensor, rng, 0.5);
    const ExpansionBundle b = build_expansion(u.ctx, u.el, u.s);
    for (std::size_t pt = 0; pt < u.g->npoints(); ++pt) qo.set_qtensor(pt, projections(b.n.vec(pt), raw.qtensor(pt)).out);
    CHECK(std::abs(correction_A(u.ctx, qo, raw, b.n, b.w)) < 1e-14);

    // P = [Omega_R, Q0] with constant Q0 leaves only the mu2 coupling in F
    LimitContext fc = u.ctx;
    fc.qs.mu2 = 0.5;
    fc.qs.beta6 = fc.qs.beta5 + 0.5;
    const Field v = leray_project(dealias(testutil::random_smooth(u.g, FieldKind::vector3, rng, 0.5)));
    const auto gv = velocity_gradient(gradient(v));
    Field p(u.g, FieldKind::qtensor);
    const Mat3 q0 = oracle::uniaxial(n0, fc.s);
    for (std::size_t pt = 0; pt < u.g->npoints(); ++pt) p.set_qtensor(pt, commutator(skew_part(gv[pt]), q0));
    const double r = 0.5 / (2 * fc.qs.mu1);
    auto dtier = [&](const Field& w) {
        double g2 = 0.0;
        for (const Field& d : gradient(w)) g2 += sq(d);
        const auto gw = velocity_gradient(gradient(w));
        double d2 = 0.0;
        for (const Mat3& x : gw) d2 += std::pow(oracle::frob(sym_part(x)), 2);
        return g2 + fc.qs.mu1 * r * r * d2 * u.g->cell_volume();
    };
    double f1 = 0.0;
    for (const Field& d : gradient(v)) f1 += dtier(d);
    const double fwant = dtier(v) + eps * eps * f1 + std::pow(eps, 4) * dtier(laplacian(v));
    CHECK(energy_F(fc, p, v, c.n) == doctest::Approx(fwant).epsilon(1e-10));
}
