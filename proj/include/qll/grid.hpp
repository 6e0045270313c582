// SPDX-License-Identifier: Apache-2.0
// Periodic torus grid, fields sampled on it, and the Fourier-space operators
// used by both solvers (derivatives, dealiasing, Leray projection, norms).
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "qll/tensor.hpp"

namespace qll {

using cplx = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
public:
    // dim in {2,3}; n even and >= 8; box_length > 0.
    static GridPtr create(int dim, int n, double box_length);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box_length() const { return box_; }
    double spacing() const { return box_ / n_; }
    std::size_t npoints() const { return npoints_; }
    std::size_t nspec() const { return nspec_; }
    double volume() const;
    double cell_volume() const { return volume() / static_cast<double>(npoints_); }
    double k_max() const;
    // Largest retained |k| after dealiasing.
    double k_dealiased() const;

    // Position of grid point p.
    Vec3 position(std::size_t p) const;

    // Per spectral index: wavevector (zero third entry in 2-D), the same with
    // Nyquist entries zeroed for odd derivatives, |k|^2, dealiasing mask and
    // Parseval weight of the half spectrum.
    const std::vector<Vec3>& wavevector() const { return k_; }
    const std::vector<Vec3>& dwavevector() const { return kd_; }
    const std::vector<double>& k2() const { return k2_; }
    const std::vector<unsigned char>& mask() const { return mask_; }
    const std::vector<double>& weight() const { return weight_; }

    // Forward transform normalized by 1/N; inverse unnormalized. The
    // inverse does not modify its input.
    void forward(const double* in, cplx* out) const;
    void inverse(const cplx* in, double* out) const;

private:
    Grid(int dim, int n, double box_length);
    int dim_;
    int n_;
    double box_;
    std::size_t npoints_;
    std::size_t nspec_;
    std::vector<Vec3> k_, kd_;
    std::vector<double> k2_, weight_;
    std::vector<unsigned char> mask_;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

enum class FieldKind : int { scalar = 0, vector3 = 1, qtensor = 2, matrix = 3 };

// scalar 1, vector3 3, qtensor 5 (qbasis coordinates), matrix 9 (row-major)
int components(FieldKind kind);

class Field {
public:
    Field() = default;
    Field(GridPtr grid, FieldKind kind);

    bool empty() const { return !grid_; }
    const GridPtr& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }
    int ncomp() const { return ncomp_; }
    std::size_t npoints() const { return grid_ ? grid_->npoints() : 0; }

    double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * npoints(); }
    const double* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * npoints(); }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    Vec3 vec(std::size_t p) const;
    void set_vec(std::size_t p, const Vec3& x);
    QCoords qcoords(std::size_t p) const;
    void set_qcoords(std::size_t p, const QCoords& c);
    QTensor qtensor(std::size_t p) const { return from_coords(qcoords(p)); }
    // Stores the symmetric traceless part of q.
    void set_qtensor(std::size_t p, const QTensor& q) { set_qcoords(p, to_coords(q)); }
    Mat3 mat(std::size_t p) const;
    void set_mat(std::size_t p, const Mat3& m);

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
    // this += s * o
    Field& axpy(double s, const Field& o);

private:
    GridPtr grid_;
    FieldKind kind_ = FieldKind::scalar;
    int ncomp_ = 0;
    std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

class Spectral {
public:
    Spectral() = default;
    Spectral(GridPtr grid, FieldKind kind);
    const GridPtr& grid() const { return grid_; }
    FieldKind kind() const { return kind_; }
    int ncomp() const { return ncomp_; }
    cplx* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * grid_->nspec(); }
    const cplx* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * grid_->nspec(); }

private:
    GridPtr grid_;
    FieldKind kind_ = FieldKind::scalar;
    int ncomp_ = 0;
    std::vector<cplx> data_;
};

Spectral to_spectral(const Field& f);
Field to_real(const Spectral& s);
void apply_mask(Spectral& s);

// Spectral derivative along axis (0..dim-1).
Field derivative(const Field& f, int axis);
Spectral derivative(const Spectral& s, int axis);
// One derivative per axis, dim entries.
std::vector<Field> gradient(const Field& f);
std::vector<Field> gradient(const Spectral& s);
Field laplacian(const Field& f);

Field leray_project(const Field& v);
void leray_project(Spectral& v);
// div v for a vector3 field.
Field divergence(const Field& v);
// f_i = d_j sigma_ij for a matrix field (row index = force component),
// optionally dealiased.
Field divergence_rows(const Field& sigma, bool dealias_products = true);

Field dealias(const Field& f);

// (sum_{j<=order} ||grad^j f||^2)^{1/2}, order in 0..3.
double sobolev_norm(const Field& f, int order);

// L2 pairing  int sum_c f_c g_c dx  (Frobenius for qtensor and matrix kinds).
double inner(const Field& f, const Field& g);
double l2_norm(const Field& f);
double max_abs(const Field& f);
// max over points of the pointwise Euclidean norm of the components
double max_pointwise_norm(const Field& f);
// Mean of every component (the k = 0 mode).
std::vector<double> component_means(const Field& f);

void check_same_grid(const Field& a, const Field& b, const char* what);

}  // namespace qll
