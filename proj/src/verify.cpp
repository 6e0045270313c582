// SPDX-License-Identifier: Apache-2.0
// Property suites behind `verify-algebra`.
#include <cmath>
#include <random>
#include <sstream>

#include "qll/bulk.hpp"
#include "qll/elastic.hpp"
#include "qll/experiments.hpp"

namespace qll {

namespace {

using Rng = std::mt19937_64;

Vec3 random_unit(Rng& rng) {
    std::normal_distribution<double> g;
    for (;;) {
        const Vec3 x{g(rng), g(rng), g(rng)};
        const double r = norm(x);
        if (r > 1e-3) return (1.0 / r) * x;
    }
}

QTensor random_q(Rng& rng) {
    std::normal_distribution<double> g;
    Mat3 m;
    for (double& x : m.a) x = g(rng);
    return project_sym_traceless(m);
}

Vec3 perp_unit(const Vec3& n, Rng& rng) {
    for (;;) {
        const Vec3 r = random_unit(rng);
        const Vec3 m = r - dot(r, n) * n;
        const double l = norm(m);
        if (l > 1e-3) return (1.0 / l) * m;
    }
}

// Smooth random field from a handful of low Fourier modes per component.
Field random_smooth(const GridPtr& g, FieldKind kind, Rng& rng, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g, kind);
    const double k0 = 2.0 * M_PI / g->box_length();
    for (int c = 0; c < f.ncomp(); ++c) {
        double* d = f.comp(c);
        for (int mode = 0; mode < 4; ++mode) {
            const double ax = std::round(2.0 * u(rng)), ay = std::round(2.0 * u(rng));
            const double az = g->dim() == 3 ? std::round(2.0 * u(rng)) : 0.0;
            const double a = amp * u(rng), ph = M_PI * u(rng);
            for (std::size_t p = 0; p < g->npoints(); ++p) {
                const Vec3 x = g->position(p);
                d[p] += a * std::sin(k0 * (ax * x[0] + ay * x[1] + az * x[2]) + ph);
            }
        }
    }
    return f;
}

Field normalize_field(const Field& n) {
    Field out = n;
    for (std::size_t p = 0; p < n.npoints(); ++p) {
        const Vec3 x = n.vec(p);
        out.set_vec(p, (1.0 / norm(x)) * x);
    }
    return out;
}

std::string ratio(int ok, int total) {
    std::ostringstream s;
    s << ok << "/" << total;
    return s.str();
}

}  // namespace

Report verify_algebra(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    Rng rng(cfg.seed);
    const BulkParams& bp = cfg.params.bulk;
    const ElasticParams& ep = cfg.params.elastic;
    const OrderParameterRoots r = critical_order_parameters(bp);
    const double s = r.s1;

    {
        const double res = std::max(std::abs(2 * bp.c * s * s - bp.b * s - 3 * bp.a),
                                    std::abs(2 * bp.c * r.s2 * r.s2 - bp.b * r.s2 - 3 * bp.a));
        rep.add("critical_points.roots", res < 1e-12 && r.s1 >= r.s2, res, "s1=" + std::to_string(r.s1) +
                                                                              " s2=" + std::to_string(r.s2));
    }
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vec3 n = random_unit(rng);
            const double e = frob_norm(bulk_gradient(bp, uniaxial_q(n, s)));
            worst = std::max(worst, e);
            ok += e < 1e-12;
        }
        rep.add("critical_points.gradient_vanishes", ok == 100, worst, ratio(ok, 100));
    }
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vec3 n = random_unit(rng);
            const Vec3 m = perp_unit(n, rng);
            const double e = frob_norm(hessian_Hn(bp, n, s, outer(n, m) + outer(m, n)));
            worst = std::max(worst, e);
            ok += e < 1e-12;
        }
        rep.add("linearized.kernel_annihilated", ok == 100, worst, ratio(ok, 100));
    }
    {
        int ok = 0;
        double c0min = 1e300;
        for (int i = 0; i < 100; ++i) {
            const Vec3 n = random_unit(rng);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(hn_matrix(bp, n, s));
            const auto& ev = es.eigenvalues();
            const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
            int zeros = 0;
            double cmin = 1e300;
            for (int k = 0; k < 5; ++k) {
                if (std::abs(ev(k)) < 1e-10 * scale)
                    ++zeros;
                else
                    cmin = std::min(cmin, ev(k));
            }
            c0min = std::min(c0min, cmin);
            ok += zeros == 2 && cmin > 0.0;
        }
        rep.add("linearized.null_space_and_C0", ok == 100, c0min, ratio(ok, 100) + " C0=" + std::to_string(c0min));
    }
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vec3 n = random_unit(rng);
            const QTensor q = projections(n, random_q(rng)).out;
            const double e = frob_norm(hn_inverse(bp, n, s, hessian_Hn(bp, n, s, q)) - q) / frob_norm(q);
            worst = std::max(worst, e);
            ok += e < 1e-11;
        }
        rep.add("linearized.inverse", ok == 100, worst, ratio(ok, 100));
    }
    {
        // tensor forms stay in the symmetric traceless space
        int ok = 0;
        for (int i = 0; i < 100; ++i) {
            const QTensor a = random_q(rng), b = random_q(rng), c = random_q(rng);
            ok += is_qtensor(bform_B(a, b), 1e-12 * (1 + frob_norm(a) * frob_norm(b))) &&
                  is_qtensor(cform_C(a, b, c), 1e-12 * (1 + frob_norm(a) * frob_norm(b) * frob_norm(c))) &&
                  frob_norm(from_coords(to_coords(a)) - a) < 1e-12 * (1 + frob_norm(a));
        }
        rep.add("tensor.closure", ok == 100, ok, ratio(ok, 100));
    }
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const QTensor q = random_q(rng), d = random_q(rng);
            const double h = 1e-5;
            const double fd =
                (bulk_energy_density(bp, q + h * d) - bulk_energy_density(bp, q - h * d)) / (2 * h);
            const double an = ddot(bulk_gradient(bp, q), d);
            const double e = std::abs(fd - an) / std::max(1.0, std::abs(an));
            worst = std::max(worst, e);
            ok += e < 1e-5;
        }
        rep.add("variational.bulk_gradient", ok == 20, worst, ratio(ok, 20));
    }
    const GridPtr g = Grid::create(cfg.grid.dim, 16, cfg.grid.box_length);
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Field q = random_smooth(g, FieldKind::qtensor, rng, 0.5);
            const Field d = random_smooth(g, FieldKind::qtensor, rng, 0.5);
            const double h = 1e-4;
            const double fd = (elastic_energy(ep, q + h * d) - elastic_energy(ep, q - h * d)) / (2 * h);
            const double an = inner(l_operator(ep, q), d);
            const double e = std::abs(fd - an) / std::max(1e-12, std::abs(an));
            worst = std::max(worst, e);
            ok += e < 1e-5;
        }
        rep.add("variational.l_operator", ok == 20, worst, ratio(ok, 20));
    }
    {
        ELParams el;
        const double s2 = s * s;
        el.k1 = el.k3 = (2 * ep.L1 + ep.L2 + ep.L3) * s2;
        el.k2 = 2 * ep.L1 * s2;
        el.k4 = ep.L3 * s2;
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            Field n = random_smooth(g, FieldKind::vector3, rng, 0.3);
            for (std::size_t p = 0; p < n.npoints(); ++p) n.set_vec(p, n.vec(p) + Vec3{1.0, 0.0, 0.0});
            n = normalize_field(n);
            Field d = random_smooth(g, FieldKind::vector3, rng, 0.5);
            for (std::size_t p = 0; p < n.npoints(); ++p) {
                const Vec3 a = n.vec(p), x = d.vec(p);
                d.set_vec(p, x - dot(a, x) * a);
            }
            const double h = 1e-5;
            const double fd = (oseen_frank_energy(el, normalize_field(n + h * d)) -
                               oseen_frank_energy(el, normalize_field(n - h * d))) /
                              (2 * h);
            const double an = -inner(molecular_field_h(el, n), d);
            const double e = std::abs(fd - an) / std::max(1e-12, std::abs(an));
            worst = std::max(worst, e);
            ok += e < 1e-5;
        }
        rep.add("variational.molecular_field_h", ok == 20, worst, ratio(ok, 20));
    }
    {
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Field v = leray_project(dealias(random_smooth(g, FieldKind::vector3, rng, 1.0)));
            const Field q = dealias(random_smooth(g, FieldKind::qtensor, rng, 1.0));
            const PairingResult pr = transport_pairing(v, q, ep);
            const double e = std::abs(pr.lhs - pr.rhs) / std::max(1e-12, std::abs(pr.lhs));
            worst = std::max(worst, e);
            ok += e < 1e-9;
        }
        rep.add("elastic.transport_pairing", ok == 20, worst, ratio(ok, 20));
    }
    return rep;
}

}  // namespace qll
