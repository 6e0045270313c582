// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "qll/grid.hpp"

namespace testutil {

using qll::operator*;
using qll::operator+;
using qll::operator-;

// Sum of a few random low Fourier modes per component.
inline qll::Field random_smooth(const qll::GridPtr& g, qll::FieldKind kind, std::mt19937_64& rng, double amp,
                                int modes = 4, int kmax = 2) {
    std::uniform_int_distribution<int> wave(-kmax, kmax);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    qll::Field f(g, kind);
    const double k0 = 2.0 * M_PI / g->box_length();
    for (int c = 0; c < f.ncomp(); ++c) {
        double* d = f.comp(c);
        for (int m = 0; m < modes; ++m) {
            const int ax = wave(rng), ay = wave(rng), az = g->dim() == 3 ? wave(rng) : 0;
            const double a = amp * u(rng), ph = M_PI * u(rng);
            for (std::size_t p = 0; p < g->npoints(); ++p) {
                const qll::Vec3 x = g->position(p);
                d[p] += a * std::sin(k0 * (ax * x[0] + ay * x[1] + az * x[2]) + ph);
            }
        }
    }
    return f;
}

// Unit director field close to e1.
inline qll::Field random_director(const qll::GridPtr& g, std::mt19937_64& rng, double amp) {
    qll::Field n = random_smooth(g, qll::FieldKind::vector3, rng, amp);
    for (std::size_t p = 0; p < n.npoints(); ++p) {
        qll::Vec3 x = n.vec(p);
        x[0] += 1.0;
        n.set_vec(p, (1.0 / qll::norm(x)) * x);
    }
    return n;
}

inline qll::Field normalized(const qll::Field& n) {
    qll::Field out = n;
    for (std::size_t p = 0; p < n.npoints(); ++p) out.set_vec(p, (1.0 / qll::norm(n.vec(p))) * n.vec(p));
    return out;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace testutil
