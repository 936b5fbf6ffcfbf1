#pragma once

#include <cmath>

#include "rdfpot/fourier.hpp"
#include "rdfpot/grid.hpp"
#include "rdfpot/state.hpp"

namespace rdfpot {

struct LjParams {
    double epsilon = 1.0;
    double sigma = 1.0;
    double r_cut = 2.5; ///< cutoff of the truncated-shifted variant
};

inline double lj(double r, const LjParams& p = {}) {
    const double s6 = std::pow(p.sigma / r, 6);
    return 4.0 * p.epsilon * (s6 * s6 - s6);
}

/// Lennard-Jones shifted to vanish at r_cut and extended by zero beyond it.
inline double truncated_shifted_lj(double r, const LjParams& p = {}) {
    if (r >= p.r_cut) return 0.0;
    return lj(r, p) - lj(p.r_cut, p);
}

/// Kirkwood-Buff compressibility route: rho0 kappa_T / beta =
/// 1 + 4 pi rho0 dr sum_j (g(r_j) - 1) r_j^2, which is the omega = 0
/// structure-factor limit of the same quadrature.
inline double kirkwood_buff_compressibility(const Tabulated& g, const StatePoint& state) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double r = g.grid.r_at(i);
        sum += (g.values[i] - 1.0) * r * r;
    }
    return 1.0 + 4.0 * detail::pi * state.rho0 * g.grid.dr * sum;
}

} // namespace rdfpot
