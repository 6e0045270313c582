// SPDX-License-Identifier: Apache-2.0
// Velocity-gradient bookkeeping shared by both solvers.
//
// Convention: (grad v)_ij = d_j v_i, D = sym(grad v), Omega = skew(grad v),
// and a stress field sigma acts on the momentum through f_i = d_j sigma_ij.
#pragma once

#include <vector>

#include "qll/grid.hpp"

namespace qll {

inline Mat3 sym_part(const Mat3& g) { return 0.5 * (g + transpose(g)); }
inline Mat3 skew_part(const Mat3& g) { return 0.5 * (g - transpose(g)); }

// Per point (grad v)_ij = d_j v_i from dim derivative fields of v.
std::vector<Mat3> velocity_gradient(const std::vector<Field>& dv);

// (v . grad) f for any field kind, from dim derivative fields of f.
Field advect(const Field& v, const std::vector<Field>& df);

}  // namespace qll
