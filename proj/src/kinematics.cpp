// SPDX-License-Identifier: Apache-2.0
#include "qll/kinematics.hpp"

#include "qll/error.hpp"

namespace qll {

std::vector<Mat3> velocity_gradient(const std::vector<Field>& dv) {
    if (dv.empty()) fail(ErrorCode::invalid_argument, "velocity_gradient: no derivatives");
    const std::size_t np = dv[0].npoints();
    std::vector<Mat3> g(np);
    for (std::size_t a = 0; a < dv.size(); ++a) {
        const double* x = dv[a].comp(0);
        const double* y = dv[a].comp(1);
        const double* z = dv[a].comp(2);
        for (std::size_t p = 0; p < np; ++p) {
            g[p](0, a) = x[p];
            g[p](1, a) = y[p];
            g[p](2, a) = z[p];
        }
    }
    return g;
}

Field advect(const Field& v, const std::vector<Field>& df) {
    if (df.empty()) fail(ErrorCode::invalid_argument, "advect: no derivatives");
    Field out(df[0].grid(), df[0].kind());
    const std::size_t np = out.npoints();
    for (std::size_t a = 0; a < df.size(); ++a) {
        const double* va = v.comp(static_cast<int>(a));
        for (int c = 0; c < out.ncomp(); ++c) {
            const double* d = df[a].comp(c);
            double* o = out.comp(c);
            for (std::size_t p = 0; p < np; ++p) o[p] += va[p] * d[p];
        }
    }
    return out;
}

}  // namespace qll
