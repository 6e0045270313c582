// SPDX-License-Identifier: Apache-2.0
#include "qll/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "qll/error.hpp"

namespace qll {

namespace {
// fftw planning is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

int signed_index(int i, int n) { return i <= n / 2 ? i : i - n; }
}  // namespace

GridPtr Grid::create(int dim, int n, double box_length) {
    if (dim != 2 && dim != 3) fail(ErrorCode::invalid_argument, "grid: dim must be 2 or 3");
    if (n < 8 || n % 2 != 0) fail(ErrorCode::invalid_argument, "grid: n_per_axis must be even and >= 8");
    if (!(box_length > 0.0)) fail(ErrorCode::invalid_argument, "grid: box_length must be positive");
    return GridPtr(new Grid(dim, n, box_length));
}

Grid::Grid(int dim, int n, double box_length) : dim_(dim), n_(n), box_(box_length) {
    const int nh = n / 2 + 1;
    npoints_ = dim == 2 ? std::size_t(n) * n : std::size_t(n) * n * n;
    nspec_ = dim == 2 ? std::size_t(n) * nh : std::size_t(n) * n * nh;
    const double k0 = 2.0 * std::numbers::pi / box_length;
    const double kcut = (2.0 / 3.0) * k_max();
    k_.resize(nspec_);
    kd_.resize(nspec_);
    k2_.resize(nspec_);
    mask_.resize(nspec_);
    weight_.resize(nspec_);
    std::size_t idx = 0;
    const int n0 = n, n1 = dim == 2 ? nh : n, n2 = dim == 2 ? 1 : nh;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                std::array<int, 3> ii{i0, i1, i2};
                Vec3 k{0.0, 0.0, 0.0}, kd{0.0, 0.0, 0.0};
                for (int a = 0; a < dim; ++a) {
                    const bool last = a == dim - 1;
                    const int si = last ? ii[a] : signed_index(ii[a], n);
                    k[a] = k0 * si;
                    kd[a] = (std::abs(si) == n / 2) ? 0.0 : k[a];
                }
                k_[idx] = k;
                kd_[idx] = kd;
                k2_[idx] = dot(k, k);
                mask_[idx] = std::sqrt(k2_[idx]) <= kcut * (1.0 + 1e-12) ? 1 : 0;
                const int il = ii[dim - 1];
                weight_[idx] = (il == 0 || il == n / 2) ? 1.0 : 2.0;
            }

    std::vector<double> rbuf(npoints_);
    std::vector<cplx> cbuf(nspec_);
    auto* r = rbuf.data();
    auto* c = reinterpret_cast<fftw_complex*>(cbuf.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (dim == 2) {
        plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
        plan_inv_ = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
    } else {
        plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
        plan_inv_ = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
    }
    if (!plan_fwd_ || !plan_inv_) fail(ErrorCode::numerical, "grid: FFTW plan creation failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

double Grid::volume() const { return std::pow(box_, dim_); }
double Grid::k_max() const { return (n_ / 2) * 2.0 * std::numbers::pi / box_; }
double Grid::k_dealiased() const {
    double m = 0.0;
    for (std::size_t i = 0; i < nspec_; ++i)
        if (mask_[i]) m = std::max(m, std::sqrt(k2_[i]));
    return m;
}

Vec3 Grid::position(std::size_t p) const {
    const double h = spacing();
    if (dim_ == 2) return {h * double(p / n_), h * double(p % n_), 0.0};
    const std::size_t nn = std::size_t(n_) * n_;
    return {h * double(p / nn), h * double((p / n_) % n_), h * double(p % n_)};
}

void Grid::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / static_cast<double>(npoints_);
    for (std::size_t i = 0; i < nspec_; ++i) out[i] *= s;
}

void Grid::inverse(const cplx* in, double* out) const {
    thread_local std::vector<cplx> scratch;
    scratch.assign(in, in + nspec_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_), reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

int components(FieldKind kind) {
    switch (kind) {
        case FieldKind::scalar: return 1;
        case FieldKind::vector3: return 3;
        case FieldKind::qtensor: return 5;
        case FieldKind::matrix: return 9;
    }
    return 0;
}

Field::Field(GridPtr grid, FieldKind kind)
    : grid_(std::move(grid)), kind_(kind), ncomp_(components(kind)), data_(std::size_t(ncomp_) * grid_->npoints(), 0.0) {}

Vec3 Field::vec(std::size_t p) const {
    const std::size_t n = npoints();
    return {data_[p], data_[n + p], data_[2 * n + p]};
}

void Field::set_vec(std::size_t p, const Vec3& x) {
    const std::size_t n = npoints();
    data_[p] = x[0];
    data_[n + p] = x[1];
    data_[2 * n + p] = x[2];
}

QCoords Field::qcoords(std::size_t p) const {
    const std::size_t n = npoints();
    return {data_[p], data_[n + p], data_[2 * n + p], data_[3 * n + p], data_[4 * n + p]};
}

void Field::set_qcoords(std::size_t p, const QCoords& c) {
    const std::size_t n = npoints();
    for (int k = 0; k < 5; ++k) data_[k * n + p] = c[k];
}

Mat3 Field::mat(std::size_t p) const {
    const std::size_t n = npoints();
    Mat3 m;
    for (int k = 0; k < 9; ++k) m.a[k] = data_[k * n + p];
    return m;
}

void Field::set_mat(std::size_t p, const Mat3& m) {
    const std::size_t n = npoints();
    for (int k = 0; k < 9; ++k) data_[k * n + p] = m.a[k];
}

void check_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.grid() != b.grid() || a.kind() != b.kind())
        fail(ErrorCode::invalid_argument, std::string(what) + ": grid or kind mismatch");
}

Field& Field::operator+=(const Field& o) {
    check_same_grid(*this, o, "field +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    check_same_grid(*this, o, "field -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
}

Field& Field::axpy(double s, const Field& o) {
    check_same_grid(*this, o, "field axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Spectral::Spectral(GridPtr grid, FieldKind kind)
    : grid_(std::move(grid)), kind_(kind), ncomp_(components(kind)), data_(std::size_t(ncomp_) * grid_->nspec()) {}

Spectral to_spectral(const Field& f) {
    Spectral s(f.grid(), f.kind());
    for (int c = 0; c < f.ncomp(); ++c) f.grid()->forward(f.comp(c), s.comp(c));
    return s;
}

Field to_real(const Spectral& s) {
    Field f(s.grid(), s.kind());
    for (int c = 0; c < s.ncomp(); ++c) s.grid()->inverse(s.comp(c), f.comp(c));
    return f;
}

void apply_mask(Spectral& s) {
    const auto& m = s.grid()->mask();
    const std::size_t ns = s.grid()->nspec();
    for (int c = 0; c < s.ncomp(); ++c) {
        cplx* d = s.comp(c);
        for (std::size_t i = 0; i < ns; ++i)
            if (!m[i]) d[i] = 0.0;
    }
}

Spectral derivative(const Spectral& s, int axis) {
    const auto& g = *s.grid();
    if (axis < 0 || axis >= g.dim()) fail(ErrorCode::invalid_argument, "derivative: axis out of range");
    Spectral r(s.grid(), s.kind());
    const auto& kd = g.dwavevector();
    for (int c = 0; c < s.ncomp(); ++c) {
        const cplx* in = s.comp(c);
        cplx* out = r.comp(c);
        for (std::size_t i = 0; i < g.nspec(); ++i) out[i] = cplx(0.0, kd[i][axis]) * in[i];
    }
    return r;
}

Field derivative(const Field& f, int axis) { return to_real(derivative(to_spectral(f), axis)); }

std::vector<Field> gradient(const Spectral& s) {
    std::vector<Field> out;
    for (int a = 0; a < s.grid()->dim(); ++a) out.push_back(to_real(derivative(s, a)));
    return out;
}

std::vector<Field> gradient(const Field& f) { return gradient(to_spectral(f)); }

Field laplacian(const Field& f) {
    Spectral s = to_spectral(f);
    const auto& k2 = f.grid()->k2();
    for (int c = 0; c < s.ncomp(); ++c) {
        cplx* d = s.comp(c);
        for (std::size_t i = 0; i < k2.size(); ++i) d[i] *= -k2[i];
    }
    return to_real(s);
}

void leray_project(Spectral& v) {
    if (v.kind() != FieldKind::vector3) fail(ErrorCode::invalid_argument, "leray_project: vector3 field required");
    const auto& g = *v.grid();
    const auto& kd = g.dwavevector();
    cplx* vx = v.comp(0);
    cplx* vy = v.comp(1);
    cplx* vz = v.comp(2);
    for (std::size_t i = 0; i < g.nspec(); ++i) {
        const Vec3& k = kd[i];
        const double kk = dot(k, k);
        if (kk == 0.0) continue;
        const cplx kv = k[0] * vx[i] + k[1] * vy[i] + k[2] * vz[i];
        vx[i] -= k[0] * kv / kk;
        vy[i] -= k[1] * kv / kk;
        vz[i] -= k[2] * kv / kk;
    }
}

Field leray_project(const Field& v) {
    Spectral s = to_spectral(v);
    leray_project(s);
    return to_real(s);
}

Field divergence(const Field& v) {
    if (v.kind() != FieldKind::vector3) fail(ErrorCode::invalid_argument, "divergence: vector3 field required");
    const Spectral s = to_spectral(v);
    const auto& g = *v.grid();
    Spectral d(v.grid(), FieldKind::scalar);
    const auto& kd = g.dwavevector();
    for (std::size_t i = 0; i < g.nspec(); ++i)
        d.comp(0)[i] = cplx(0.0, 1.0) * (kd[i][0] * s.comp(0)[i] + kd[i][1] * s.comp(1)[i] + kd[i][2] * s.comp(2)[i]);
    return to_real(d);
}

Field divergence_rows(const Field& sigma, bool dealias_products) {
    if (sigma.kind() != FieldKind::matrix) fail(ErrorCode::invalid_argument, "divergence_rows: matrix field required");
    const auto& g = *sigma.grid();
    Spectral s = to_spectral(sigma);
    if (dealias_products) apply_mask(s);
    Spectral f(sigma.grid(), FieldKind::vector3);
    const auto& kd = g.dwavevector();
    for (int i = 0; i < 3; ++i) {
        cplx* out = f.comp(i);
        for (std::size_t q = 0; q < g.nspec(); ++q) {
            cplx acc = 0.0;
            for (int j = 0; j < g.dim(); ++j) acc += kd[q][j] * s.comp(3 * i + j)[q];
            out[q] = cplx(0.0, 1.0) * acc;
        }
    }
    return to_real(f);
}

Field dealias(const Field& f) {
    Spectral s = to_spectral(f);
    apply_mask(s);
    return to_real(s);
}

double sobolev_norm(const Field& f, int order) {
    if (order < 0 || order > 3) fail(ErrorCode::invalid_argument, "sobolev_norm: order must be 0..3");
    const Spectral s = to_spectral(f);
    const auto& g = *f.grid();
    const auto& k2 = g.k2();
    const auto& w = g.weight();
    double sum = 0.0;
    for (int c = 0; c < s.ncomp(); ++c) {
        const cplx* d = s.comp(c);
        for (std::size_t i = 0; i < g.nspec(); ++i) {
            double mult = 1.0, kp = 1.0;
            for (int j = 1; j <= order; ++j) {
                kp *= k2[i];
                mult += kp;
            }
            sum += w[i] * mult * std::norm(d[i]);
        }
    }
    return std::sqrt(g.volume() * sum);
}

double inner(const Field& f, const Field& g) {
    check_same_grid(f, g, "inner");
    double s = 0.0;
    const auto& a = f.data();
    const auto& b = g.data();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * f.grid()->cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.data()) m = std::max(m, std::abs(x));
    return m;
}

double max_pointwise_norm(const Field& f) {
    double m = 0.0;
    const std::size_t n = f.npoints();
    for (std::size_t p = 0; p < n; ++p) {
        double s = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) s += f.comp(c)[p] * f.comp(c)[p];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

std::vector<double> component_means(const Field& f) {
    std::vector<double> m(f.ncomp(), 0.0);
    for (int c = 0; c < f.ncomp(); ++c) {
        double s = 0.0;
        for (std::size_t p = 0; p < f.npoints(); ++p) s += f.comp(c)[p];
        m[c] = s / double(f.npoints());
    }
    return m;
}

}  // namespace qll
