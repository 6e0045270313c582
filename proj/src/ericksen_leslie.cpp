// SPDX-License-Identifier: Apache-2.0
#include "qll/ericksen_leslie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qll/error.hpp"
#include "qll/kinematics.hpp"

namespace qll {

namespace {

constexpr double kRelTol = 1e-12;

double levi(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((i + 1) % 3 == j) ? 1.0 : -1.0;
}

bool close(double x, double y) { return std::abs(x - y) <= kRelTol * std::max(1.0, std::max(std::abs(x), std::abs(y))); }

Vec3 project_tangent(const Vec3& n, const Vec3& x) { return x - dot(n, x) * n; }

Vec3 normalized(const Vec3& x) {
    const double r = norm(x);
    if (!(r > 0.0)) fail(ErrorCode::numerical, "director normalization: zero vector");
    return (1.0 / r) * x;
}

void check_growth(const char* name, double before, double after, double floor) {
    if (!std::isfinite(after)) fail(ErrorCode::numerical, std::string("instability detector: non-finite ") + name);
    if (after > 10.0 * std::max(before, floor))
        fail(ErrorCode::numerical, std::string("instability detector: ") + name + " grew more than 10x in one step");
}

}  // namespace

void ELParams::validate() const {
    auto bad = [](const char* what) { fail(ErrorCode::invariant, what); };
    if (!close(alpha2 + alpha3, alpha6 - alpha5)) bad("Parodi relation violated: alpha2 + alpha3 != alpha6 - alpha5");
    if (!close(gamma1, alpha3 - alpha2)) bad("Leslie coefficients: gamma1 != alpha3 - alpha2");
    if (!close(gamma2, alpha6 - alpha5)) bad("Leslie coefficients: gamma2 != alpha6 - alpha5");
    if (!(gamma1 > 0.0)) bad("Leslie coefficients: gamma1 > 0 violated");
    if (!(alpha4 > 0.0)) bad("Leslie coefficients: alpha4 > 0 violated");
    if (!(2.0 * alpha4 + alpha5 + alpha6 - gamma2 * gamma2 / gamma1 > 0.0))
        bad("Leslie coefficients: 2 alpha4 + alpha5 + alpha6 - gamma2^2/gamma1 > 0 violated");
    if (!(alpha1 + 1.5 * alpha4 + alpha5 + alpha6 > 0.0))
        bad("alpha relation violated: alpha1 + 3/2 alpha4 + alpha5 + alpha6 > 0");
    if (!(I >= 0.0)) bad("director inertia I must be nonnegative");
    if (!(k1 > 0.0 && k2 > 0.0 && k3 > 0.0)) bad("Frank constants k1, k2, k3 must be positive");
}

void require_unit_field(const Field& n, double tol) {
    if (n.kind() != FieldKind::vector3) fail(ErrorCode::invalid_argument, "director field must be vector3");
    for (std::size_t pt = 0; pt < n.npoints(); ++pt) {
        const double r = norm(n.vec(pt));
        if (!(std::abs(r - 1.0) < tol)) {
            std::ostringstream os;
            os << "director field is not unit: |n| = " << r << " at point " << pt;
            fail(ErrorCode::invalid_argument, os.str());
        }
    }
}

FrankPoint frank_point(const ELParams& p, const Vec3& n, const Mat3& g) {
    FrankPoint r;
    const double div = trace(g);
    const Vec3 c{g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1)};
    const double tau = dot(n, c);
    const Vec3 b = cross(n, c);
    double trg2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) trg2 += g(i, j) * g(j, i);
    const double k24 = p.k2 + p.k4;
    r.energy = 0.5 * (p.k1 * div * div + p.k2 * tau * tau + p.k3 * dot(b, b) + k24 * (trg2 - div * div));
    r.dn = p.k2 * tau * c + p.k3 * cross(c, b);
    const Vec3 bxn = cross(b, n);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = k24 * g(j, i);
            if (i == j) v += (p.k1 - k24) * div;
            for (int a = 0; a < 3; ++a) v += levi(a, j, i) * (p.k2 * tau * n[a] + p.k3 * bxn[a]);
            r.pi(i, j) = v;
        }
    return r;
}

double oseen_frank_energy(const ELParams& p, const Field& n) {
    require_unit_field(n);
    const auto g = velocity_gradient(gradient(n));
    double e = 0.0;
    for (std::size_t pt = 0; pt < n.npoints(); ++pt) e += frank_point(p, n.vec(pt), g[pt]).energy;
    return e * n.grid()->cell_volume();
}

namespace {
// h and, optionally, the pointwise pi and grad n for reuse.
Field molecular_field_impl(const ELParams& p, const Field& n, const std::vector<Mat3>& g, std::vector<Mat3>* pis) {
    Field pi(n.grid(), FieldKind::matrix);
    Field dn(n.grid(), FieldKind::vector3);
    if (pis) pis->resize(n.npoints());
    for (std::size_t pt = 0; pt < n.npoints(); ++pt) {
        const FrankPoint f = frank_point(p, n.vec(pt), g[pt]);
        pi.set_mat(pt, f.pi);
        dn.set_vec(pt, f.dn);
        if (pis) (*pis)[pt] = f.pi;
    }
    // Undealiased so that h is the exact discrete variational derivative.
    Field h = divergence_rows(pi, false);
    h -= dn;
    return h;
}
}  // namespace

Field molecular_field_h(const ELParams& p, const Field& n) {
    require_unit_field(n);
    return molecular_field_impl(p, n, velocity_gradient(gradient(n)), nullptr);
}

Mat3 leslie_stress_point(const ELParams& p, const Vec3& n, const Mat3& gv, const Vec3& N) {
    const Mat3 d = sym_part(gv);
    const Vec3 dn = matvec(d, n);
    const double nnd = dot(n, dn);
    Mat3 s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            s(i, j) = p.alpha1 * nnd * n[i] * n[j] + p.alpha2 * N[i] * n[j] + p.alpha3 * n[i] * N[j] +
                      p.alpha4 * d(i, j) + p.alpha5 * dn[i] * n[j] + p.alpha6 * n[i] * dn[j];
    return s;
}

Mat3 ericksen_stress_point(const Mat3& pi, const Mat3& gn) {
    Mat3 s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) v += pi(k, j) * gn(k, i);
            s(i, j) = -v;
        }
    return s;
}

namespace {
struct RatesWork {
    ELRates r;
    std::vector<Mat3> gn, gv, pis;
    Field vgn;  // v.grad n
};

RatesWork rates_work(const ELParams& p, const ELState& s) {
    RatesWork w;
    require_unit_field(s.n);
    const auto dnf = gradient(s.n);
    w.gn = velocity_gradient(dnf);
    w.gv = velocity_gradient(gradient(s.v));
    w.vgn = advect(s.v, dnf);
    w.r.h = molecular_field_impl(p, s.n, w.gn, &w.pis);
    const GridPtr& g = s.n.grid();
    w.r.w = Field(g, FieldKind::vector3);
    w.r.N = Field(g, FieldKind::vector3);
    if (p.inertial()) {
        if (s.ndot.empty()) fail(ErrorCode::invalid_argument, "inertial state requires ndot");
        w.r.wd = Field(g, FieldKind::vector3);
    }
    for (std::size_t pt = 0; pt < s.n.npoints(); ++pt) {
        const Vec3 n = s.n.vec(pt);
        const Mat3 d = sym_part(w.gv[pt]);
        const Vec3 omn = matvec(skew_part(w.gv[pt]), n);
        const Vec3 drive = project_tangent(n, w.r.h.vec(pt) - p.gamma2 * matvec(d, n));
        Vec3 rate, N;
        if (p.inertial()) {
            rate = s.ndot.vec(pt) + w.vgn.vec(pt);
            N = rate - omn;
            const Vec3 acc = (1.0 / p.I) * (drive - p.gamma1 * N) - dot(rate, rate) * n;
            w.r.wd.set_vec(pt, acc);
        } else {
            N = (1.0 / p.gamma1) * drive;
            rate = N + omn;
        }
        w.r.w.set_vec(pt, rate);
        w.r.N.set_vec(pt, N);
    }
    return w;
}
}  // namespace

ELRates el_rates(const ELParams& p, const ELState& s) { return rates_work(p, s).r; }

Field leslie_ericksen_stress(const ELParams& p, const ELState& s) {
    const RatesWork w = rates_work(p, s);
    Field out(s.n.grid(), FieldKind::matrix);
    for (std::size_t pt = 0; pt < s.n.npoints(); ++pt)
        out.set_mat(pt, leslie_stress_point(p, s.n.vec(pt), w.gv[pt], w.r.N.vec(pt)) +
                            ericksen_stress_point(w.pis[pt], w.gn[pt]));
    return out;
}

double el_dissipation_density(const ELParams& p, const Vec3& n, const Mat3& gv, const Vec3& N) {
    const Mat3 d = sym_part(gv);
    const Vec3 dn = matvec(d, n);
    const double nnd = dot(n, dn);
    const double g22 = p.gamma2 * p.gamma2 / p.gamma1;
    const Vec3 u = p.gamma1 * N + p.gamma2 * project_tangent(n, dn);
    return (p.alpha1 + g22) * nnd * nnd + p.alpha4 * ddot(d, d) + (p.alpha5 + p.alpha6 - g22) * dot(dn, dn) +
           dot(u, u) / p.gamma1;
}

ELEnergy el_energy_audit(const ELParams& p, const ELState& s) {
    const RatesWork w = rates_work(p, s);
    const double cv = s.n.grid()->cell_volume();
    ELEnergy e;
    double fr = 0.0, diss = 0.0;
    for (std::size_t pt = 0; pt < s.n.npoints(); ++pt) {
        const Vec3 n = s.n.vec(pt);
        fr += frank_point(p, n, w.gn[pt]).energy;
        diss += el_dissipation_density(p, n, w.gv[pt], w.r.N.vec(pt));
    }
    e.kinetic = 0.5 * inner(s.v, s.v);
    e.director_kinetic = p.inertial() ? 0.5 * p.I * inner(w.r.w, w.r.w) : 0.0;
    e.frank = fr * cv;
    e.total = e.kinetic + e.director_kinetic + e.frank;
    e.dissipation_rate = -diss * cv;
    return e;
}

namespace {
double frank_max(const ELParams& p) { return std::max({p.k1, p.k2, p.k3, std::abs(p.k2 + p.k4)}); }
}  // namespace

double el_stability_bound(const ELParams& p, const ELState& s) {
    const auto& g = *s.n.grid();
    const double h = g.spacing();
    double bound = std::numeric_limits<double>::infinity();
    const double vmax = max_pointwise_norm(s.v);
    if (vmax > 0.0) bound = std::min(bound, 0.25 * h / vmax);
    const double g22 = p.gamma2 * p.gamma2 / p.gamma1;
    const double nu = std::max({p.alpha4, std::abs(p.alpha1), std::abs(p.alpha2), std::abs(p.alpha3),
                                std::abs(p.alpha5), std::abs(p.alpha6), g22});
    bound = std::min(bound, 0.5 * h * h / nu);
    if (p.inertial()) {
        const double kd = g.k_dealiased();
        const double kappa = frank_max(p) * kd * kd;
        bound = std::min(bound, (p.gamma1 + std::sqrt(p.gamma1 * p.gamma1 + 8.0 * p.I * kappa)) / (2.0 * kappa));
    }
    return bound;
}

ELStepper::ELStepper(ELParams p) : p_(p) { p_.validate(); }

ELState ELStepper::step(const ELState& s, double dt) const {
    const ELParams& p = p_;
    if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "el_step: dt must be positive");
    if (enforce_bound) {
        const double b = el_stability_bound(p, s);
        if (dt > b * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "el_step: dt = " << dt << " exceeds the stability bound " << b;
            fail(ErrorCode::numerical, os.str());
        }
    }
    RatesWork w = rates_work(p, s);
    const GridPtr& gp = s.n.grid();
    const auto& g = *gp;
    const std::size_t np = g.npoints();

    ELState out;
    out.t = s.t + dt;
    out.n = Field(gp, FieldKind::vector3);
    Field nflux(gp, FieldKind::vector3);  // N used in the stress
    if (p.inertial()) {
        const Field wadv = advect(s.v, gradient(w.r.w));
        Field inc(gp, FieldKind::vector3);
        const double den = p.I / dt + p.gamma1;
        for (std::size_t pt = 0; pt < np; ++pt) {
            const Vec3 n = s.n.vec(pt);
            const Vec3 wo = w.r.w.vec(pt);
            const Mat3 d = sym_part(w.gv[pt]);
            const Vec3 omn = matvec(skew_part(w.gv[pt]), n);
            const Vec3 drive = project_tangent(n, w.r.h.vec(pt) - p.gamma2 * matvec(d, n));
            const Vec3 wn = (1.0 / den) * ((p.I / dt) * wo - p.I * wadv.vec(pt) + drive + p.gamma1 * omn -
                                           (p.I * dot(wo, wo)) * n);
            nflux.set_vec(pt, wn - omn);
            inc.set_vec(pt, wn - w.vgn.vec(pt));
        }
        inc = dealias(inc);
        out.ndot = Field(gp, FieldKind::vector3);
        for (std::size_t pt = 0; pt < np; ++pt) {
            const Vec3 nn = normalized(s.n.vec(pt) + dt * inc.vec(pt));
            out.n.set_vec(pt, nn);
            out.ndot.set_vec(pt, project_tangent(nn, inc.vec(pt)));
        }
    } else {
        Field f(gp, FieldKind::vector3);
        for (std::size_t pt = 0; pt < np; ++pt) {
            nflux.set_vec(pt, w.r.N.vec(pt));
            f.set_vec(pt, w.r.w.vec(pt) - w.vgn.vec(pt));
        }
        Spectral fh = to_spectral(f);
        apply_mask(fh);
        const double ks = std::max({p.k1, p.k2, p.k3}) / p.gamma1;
        const auto& k2 = g.k2();
        for (std::size_t i = 0; i < g.nspec(); ++i) {
            const double den = 1.0 + dt * ks * k2[i];
            for (int c = 0; c < 3; ++c) fh.comp(c)[i] *= dt / den;
        }
        const Field delta = to_real(fh);
        for (std::size_t pt = 0; pt < np; ++pt) out.n.set_vec(pt, normalized(s.n.vec(pt) + delta.vec(pt)));
    }

    // momentum: alpha4 D implicit, everything else explicit at level n
    Field sigma(gp, FieldKind::matrix);
    for (std::size_t pt = 0; pt < np; ++pt) {
        const Vec3 n = s.n.vec(pt);
        Mat3 sg = leslie_stress_point(p, n, w.gv[pt], nflux.vec(pt)) + ericksen_stress_point(w.pis[pt], w.gn[pt]);
        sg -= p.alpha4 * sym_part(w.gv[pt]);
        sigma.set_mat(pt, sg);
    }
    Field force = divergence_rows(sigma, true);
    force -= advect(s.v, gradient(s.v));
    Spectral fh = to_spectral(force);
    apply_mask(fh);
    leray_project(fh);
    Spectral vh = to_spectral(s.v);
    const auto& kd = g.dwavevector();
    for (std::size_t i = 0; i < g.nspec(); ++i) {
        const double k2 = dot(kd[i], kd[i]);
        if (k2 == 0.0) continue;  // mean velocity is conserved
        const double den = 1.0 + dt * 0.5 * p.alpha4 * k2;
        for (int c = 0; c < 3; ++c) vh.comp(c)[i] = (vh.comp(c)[i] + dt * fh.comp(c)[i]) / den;
    }
    out.v = to_real(vh);

    const double floor = std::sqrt(g.volume());  // RMS value 1
    check_growth("v", l2_norm(s.v), l2_norm(out.v), floor);
    if (p.inertial()) check_growth("dn/dt", l2_norm(s.ndot), l2_norm(out.ndot), floor);
    return out;
}

ELState el_step(const ELParams& p, const ELState& s, double dt) { return ELStepper(p).step(s, dt); }

ELState el_constant_state(const GridPtr& g, const ELParams& p, const Director& n) {
    if (!is_unit(n)) fail(ErrorCode::invalid_argument, "el_constant_state: director must be unit");
    ELState s;
    s.n = Field(g, FieldKind::vector3);
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) s.n.set_vec(pt, n);
    s.v = Field(g, FieldKind::vector3);
    if (p.inertial()) s.ndot = Field(g, FieldKind::vector3);
    return s;
}

double dissipation_form(double b1, double b2, double b3, const Vec3& n, const Mat3& d) {
    const Vec3 dn = matvec(d, n);
    const double nnd = dot(n, dn);
    return b1 * nnd * nnd + b2 * ddot(d, d) + b3 * dot(dn, dn);
}

bool dissipation_criterion(double b1, double b2, double b3) {
    // With n = e3 the form splits into the in-plane traceless block (weight
    // b2), the D13, D23 block (2 b2 + b3) and D33, whose smallest |D|^2
    // completion gives (b1 + 3/2 b2 + b3) D33^2.
    return b2 >= 0.0 && 2.0 * b2 + b3 >= 0.0 && 1.5 * b2 + b3 + b1 >= 0.0;
}

}  // namespace qll
