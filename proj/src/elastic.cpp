// SPDX-License-Identifier: Apache-2.0
#include "qll/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qll/error.hpp"

namespace qll {

void ElasticParams::validate() const {
    if (!(L1 > 0.0)) fail(ErrorCode::invariant, "elastic parameters: L1 > 0 violated");
    if (!(L1 + L2 + L3 > 0.0)) fail(ErrorCode::invariant, "elastic parameters: L1 + L2 + L3 > 0 violated");
}

std::vector<std::vector<Mat3>> qtensor_gradient_mats(const std::vector<Field>& dq) {
    std::vector<std::vector<Mat3>> out(dq.size());
    for (std::size_t a = 0; a < dq.size(); ++a) {
        out[a].resize(dq[a].npoints());
        for (std::size_t p = 0; p < dq[a].npoints(); ++p) out[a][p] = dq[a].qtensor(p);
    }
    return out;
}

double elastic_density(const ElasticParams& p, const std::vector<Mat3>& g) {
    const int dim = static_cast<int>(g.size());
    double t1 = 0.0;
    for (const auto& m : g) t1 += ddot(m, m);
    // (div Q)_i = sum_j dQ_ij/dx_j
    Vec3 div{0.0, 0.0, 0.0};
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < 3; ++i) div[i] += g[j](i, j);
    const double t2 = dot(div, div);
    // Q_ij,k Q_ik,j
    double t3 = 0.0;
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < 3; ++i) t3 += g[k](i, j) * g[j](i, k);
    return 0.5 * (p.L1 * t1 + p.L2 * t2 + p.L3 * t3);
}

double elastic_energy(const ElasticParams& p, const Field& q) {
    if (q.kind() != FieldKind::qtensor) fail(ErrorCode::invalid_argument, "elastic_energy: qtensor field required");
    const auto g = qtensor_gradient_mats(gradient(q));
    const int dim = q.grid()->dim();
    double s = 0.0;
    std::vector<Mat3> gp(dim);
    for (std::size_t pt = 0; pt < q.npoints(); ++pt) {
        for (int a = 0; a < dim; ++a) gp[a] = g[a][pt];
        s += elastic_density(p, gp);
    }
    return s * q.grid()->cell_volume();
}

Eigen::Matrix<double, 5, 5> l_symbol(const ElasticParams& p, const Vec3& k) {
    const auto& e = qbasis();
    std::array<Vec3, 5> u;
    for (int a = 0; a < 5; ++a) u[a] = matvec(e[a], k);
    const double kk = dot(k, k);
    const double l23 = p.L2 + p.L3;
    Eigen::Matrix<double, 5, 5> m;
    for (int a = 0; a < 5; ++a)
        for (int b = a; b < 5; ++b) {
            double v = l23 * dot(u[a], u[b]);
            if (a == b) v += p.L1 * kk;
            m(a, b) = v;
            m(b, a) = v;
        }
    return m;
}

Spectral l_operator(const ElasticParams& p, const Spectral& q) {
    if (q.kind() != FieldKind::qtensor) fail(ErrorCode::invalid_argument, "l_operator: qtensor field required");
    const auto& g = *q.grid();
    Spectral r(q.grid(), FieldKind::qtensor);
    const auto& kd = g.dwavevector();
    const bool scalar = p.L2 + p.L3 == 0.0;
    for (std::size_t i = 0; i < g.nspec(); ++i) {
        if (scalar) {
            const double s = p.L1 * dot(kd[i], kd[i]);
            for (int a = 0; a < 5; ++a) r.comp(a)[i] = s * q.comp(a)[i];
            continue;
        }
        const auto m = l_symbol(p, kd[i]);
        for (int a = 0; a < 5; ++a) {
            cplx acc = 0.0;
            for (int b = 0; b < 5; ++b) acc += m(a, b) * q.comp(b)[i];
            r.comp(a)[i] = acc;
        }
    }
    return r;
}

Field l_operator(const ElasticParams& p, const Field& q) { return to_real(l_operator(p, to_spectral(q))); }

Field distortion_stress(const ElasticParams& p, const std::vector<Field>& dq, const std::vector<Field>& dqt) {
    if (dq.empty() || dq.size() != dqt.size())
        fail(ErrorCode::invalid_argument, "distortion_stress: gradient size mismatch");
    const int dim = static_cast<int>(dq.size());
    const auto gq = qtensor_gradient_mats(dq);
    const auto gt = qtensor_gradient_mats(dqt);
    Field out(dq[0].grid(), FieldKind::matrix);
    const std::size_t np = out.npoints();
    for (std::size_t pt = 0; pt < np; ++pt) {
        Vec3 div{0.0, 0.0, 0.0};
        for (int m = 0; m < dim; ++m)
            for (int k = 0; k < 3; ++k) div[k] += gq[m][pt](k, m);
        Mat3 s;
        for (int i = 0; i < dim; ++i) {
            const Mat3& ti = gt[i][pt];
            for (int j = 0; j < 3; ++j) {
                double v = 0.0;
                if (j < dim) v += p.L1 * ddot(gq[j][pt], ti);
                for (int k = 0; k < 3; ++k) v += p.L2 * div[k] * ti(k, j);
                // L3 Q_kj,l Qt_kl,i
                for (int l = 0; l < dim; ++l)
                    for (int k = 0; k < 3; ++k) v += p.L3 * gq[l][pt](k, j) * ti(k, l);
                s(i, j) = -v;
            }
        }
        out.set_mat(pt, s);
    }
    return out;
}

Field distortion_stress(const ElasticParams& p, const Field& q, const Field& qt) {
    check_same_grid(q, qt, "distortion_stress");
    return distortion_stress(p, gradient(q), gradient(qt));
}

namespace {
template <class F>
void fibonacci_sweep(int count, F&& f) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        f(Vec3{r * std::cos(phi), r * std::sin(phi), z});
    }
}
constexpr int kSweepPoints = 2048;
}  // namespace

double elastic_coercivity(const ElasticParams& p) {
    double mn = std::numeric_limits<double>::infinity();
    fibonacci_sweep(kSweepPoints, [&](const Vec3& k) {
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(l_symbol(p, k));
        mn = std::min(mn, es.eigenvalues()(0));
    });
    if (!(mn > 0.0)) fail(ErrorCode::invariant, "elastic coercivity: symbol minimum is not positive");
    return 0.5 * mn;
}

double elastic_symbol_max(const ElasticParams& p) {
    double mx = 0.0;
    fibonacci_sweep(kSweepPoints, [&](const Vec3& k) {
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(l_symbol(p, k));
        mx = std::max(mx, es.eigenvalues()(4));
    });
    return mx;
}

PairingResult transport_pairing(const Field& v, const Field& q, const ElasticParams& p) {
    if (v.kind() != FieldKind::vector3 || q.kind() != FieldKind::qtensor)
        fail(ErrorCode::invalid_argument, "transport_pairing: expects a vector3 and a qtensor field");
    if (v.grid() != q.grid()) fail(ErrorCode::invalid_argument, "transport_pairing: grid mismatch");
    if (max_abs(divergence(v)) > 1e-10) fail(ErrorCode::invalid_argument, "transport_pairing: v is not solenoidal");
    const int dim = q.grid()->dim();
    const auto dqf = gradient(q);
    const auto dv = gradient(v);
    const auto gq = qtensor_gradient_mats(dqf);
    Field adv(q.grid(), FieldKind::qtensor);
    for (std::size_t pt = 0; pt < q.npoints(); ++pt) {
        const Vec3 vp = v.vec(pt);
        QCoords c{};
        for (int a = 0; a < dim; ++a)
            for (int k = 0; k < 5; ++k) c[k] += vp[a] * dqf[a].comp(k)[pt];
        adv.set_qcoords(pt, c);
    }
    PairingResult r;
    r.lhs = -inner(adv, l_operator(p, q));

    const double l23 = 0.5 * (p.L2 + p.L3);
    double s = 0.0;
    for (std::size_t pt = 0; pt < q.npoints(); ++pt) {
        // gv(j, m) = v_j,m
        Mat3 gv;
        for (int m = 0; m < dim; ++m) {
            const Vec3 d = dv[m].vec(pt);
            for (int j = 0; j < 3; ++j) gv(j, m) = d[j];
        }
        Vec3 div{0.0, 0.0, 0.0};
        for (int m = 0; m < dim; ++m)
            for (int k = 0; k < 3; ++k) div[k] += gq[m][pt](k, m);
        double t1 = 0.0;
        for (int j = 0; j < dim; ++j)
            for (int m = 0; m < dim; ++m) t1 += gv(j, m) * ddot(gq[j][pt], gq[m][pt]);
        // v_j,l Q_kl,j Q_km,m + v_j,k Q_kl,j Q_lm,m
        double t2 = 0.0;
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double qj = gq[j][pt](k, l);
                    t2 += (l < dim ? gv(j, l) : 0.0) * qj * div[k] + (k < dim ? gv(j, k) : 0.0) * qj * div[l];
                }
        s += p.L1 * t1 + l23 * t2;
    }
    r.rhs = -s * q.grid()->cell_volume();
    return r;
}

}  // namespace qll
