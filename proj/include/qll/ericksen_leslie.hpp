// SPDX-License-Identifier: Apache-2.0
// Ericksen-Leslie system with optional director inertia: Oseen-Frank energy,
// molecular field, Leslie and Ericksen stresses, energy audit and steppers.
#pragma once

#include <vector>

#include "qll/grid.hpp"

namespace qll {

struct ELParams {
    double alpha1 = 0.0;
    double alpha2 = -1.0;
    double alpha3 = 0.0;
    double alpha4 = 1.0;
    double alpha5 = 0.0;
    double alpha6 = 0.0;
    double gamma1 = 1.0;
    double gamma2 = -1.0;
    double I = 0.0;
    double k1 = 1.0;
    double k2 = 1.0;
    double k3 = 1.0;
    double k4 = 0.0;

    // Parodi, gamma definitions, alpha4 > 0, 2 alpha4 + alpha5 + alpha6 -
    // gamma2^2/gamma1 > 0, alpha1 + 3/2 alpha4 + alpha5 + alpha6 > 0,
    // gamma1 > 0, I >= 0 and positive k1, k2, k3.
    void validate() const;
    bool inertial() const { return I > 0.0; }
};

struct ELState {
    Field n;     // unit director
    Field ndot;  // partial time derivative of n; empty when I = 0
    Field v;
    double t = 0.0;
};

// Throws ErrorCode::invalid_argument unless ||n| - 1| < tol everywhere.
void require_unit_field(const Field& n, double tol = 1e-10);

// Pointwise Oseen-Frank quantities from n and G_ij = d_j n_i.
struct FrankPoint {
    double energy = 0.0;
    Vec3 dn{0.0, 0.0, 0.0};  // partial derivative of the density in n
    Mat3 pi;                  // pi_ij = partial derivative in G_ij
};
FrankPoint frank_point(const ELParams& p, const Vec3& n, const Mat3& grad_n);

// int k1/2 (div n)^2 + k2/2 (n.curl n)^2 + k3/2 |n x curl n|^2
//   + (k2+k4)/2 (tr(grad n)^2 - (div n)^2) dx
double oseen_frank_energy(const ELParams& p, const Field& n);

// h = -dE/dn + div(dE/d grad n)
Field molecular_field_h(const ELParams& p, const Field& n);

// Leslie stress with co-rotational flux N (vector3 field):
// sigma_ij = a1 (nn:D) n_i n_j + a2 N_i n_j + a3 n_i N_j + a4 D_ij
//          + a5 D_ik n_k n_j + a6 n_i n_k D_kj
Mat3 leslie_stress_point(const ELParams& p, const Vec3& n, const Mat3& grad_v, const Vec3& N);
// sigma^E_ij = -pi_kj d_i n_k
Mat3 ericksen_stress_point(const Mat3& pi, const Mat3& grad_n);

// Material rate of n and co-rotational flux. Inertial states use the stored
// ndot; noninertial states solve gamma1 N = P_n(h - gamma2 D n).
struct ELRates {
    Field h;
    Field w;   // dn/dt + v.grad n
    Field N;   // w - Omega n
    Field wd;  // material second derivative (inertial only)
};
ELRates el_rates(const ELParams& p, const ELState& s);

// sigma^L + sigma^E for the state, rates as in el_rates.
Field leslie_ericksen_stress(const ELParams& p, const ELState& s);

struct ELEnergy {
    double kinetic = 0.0;
    double director_kinetic = 0.0;  // I/2 |w|^2
    double frank = 0.0;
    double total = 0.0;
    double dissipation_rate = 0.0;
};

// Dissipation density
// (a1 + g2^2/g1)(D:nn)^2 + a4|D|^2 + (a5 + a6 - g2^2/g1)|Dn|^2 + |g1 N + g2 P_n D n|^2 / g1
double el_dissipation_density(const ELParams& p, const Vec3& n, const Mat3& grad_v, const Vec3& N);
ELEnergy el_energy_audit(const ELParams& p, const ELState& s);

// min(0.25 h/|v|_inf, 0.5 h^2/nu_max, inertial elastic bound)
double el_stability_bound(const ELParams& p, const ELState& s);

class ELStepper {
public:
    explicit ELStepper(ELParams p);
    const ELParams& params() const { return p_; }
    ELState step(const ELState& s, double dt) const;
    bool enforce_bound = true;

private:
    ELParams p_;
};

ELState el_step(const ELParams& p, const ELState& s, double dt);

// Constant director, zero velocity (and zero rate when inertial).
ELState el_constant_state(const GridPtr& g, const ELParams& p, const Director& n);

// b1 |nn:D|^2 + b2 |D|^2 + b3 |D n|^2
double dissipation_form(double b1, double b2, double b3, const Vec3& n, const Mat3& d);
// True iff the form is nonnegative for every unit n and symmetric traceless D:
// b2 >= 0, 2 b2 + b3 >= 0 and 3/2 b2 + b3 + b1 >= 0.
bool dissipation_criterion(double b1, double b2, double b3);

}  // namespace qll
