#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/spline.hpp"

namespace rdfpot {

/// Equidistant radial mesh r_j = j*dr, j = 1..m. The first n points carry
/// tabulated potentials; every potential on this grid is extended by zero
/// for r > r_n, so r_n acts as the interaction cutoff.
struct RadialGrid {
    double dr = 0.0;
    int m = 0; ///< number of RDF grid points
    int n = 0; ///< number of potential grid points, n <= m

    double r(int j) const { return static_cast<double>(j) * dr; } ///< 1-based node
    double r_at(std::size_t i) const { return static_cast<double>(i + 1) * dr; }
    double r_max() const { return r(m); }
    double r_cut() const { return r(n); }

    bool operator==(const RadialGrid&) const = default;
};

inline RadialGrid make_grid(double dr, int m, int n) {
    if (!(dr > 0.0)) throw ConfigError("grid spacing must be positive");
    if (n < 1 || n > m) throw ConfigError("grid requires 1 <= n <= m");
    return RadialGrid{dr, m, n};
}

enum class Kind { potential, rdf, correlation, generic };

/// A real function sampled on a RadialGrid: m values for rdf/correlation/
/// generic data, n values for potentials (zero beyond r_n by convention).
struct Tabulated {
    RadialGrid grid;
    std::vector<double> values;
    Kind kind = Kind::generic;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

inline Tabulated make_potential(const RadialGrid& grid, std::vector<double> values) {
    if (static_cast<int>(values.size()) != grid.n)
        throw ConfigError("potential table must hold n values");
    return Tabulated{grid, std::move(values), Kind::potential};
}

inline Tabulated make_rdf(const RadialGrid& grid, std::vector<double> values) {
    if (static_cast<int>(values.size()) != grid.m)
        throw ConfigError("rdf table must hold m values");
    for (double v : values)
        if (v < 0.0) throw ConfigError("rdf values must be nonnegative");
    return Tabulated{grid, std::move(values), Kind::rdf};
}

/// Tabulate u(r) on the potential subgrid of `grid`.
template <class F>
Tabulated tabulate_potential(const RadialGrid& grid, F&& u) {
    std::vector<double> v(static_cast<std::size_t>(grid.n));
    for (int j = 1; j <= grid.n; ++j) v[static_cast<std::size_t>(j - 1)] = u(grid.r(j));
    return Tabulated{grid, std::move(v), Kind::potential};
}

/// First j0 grid points are the core region; sampled RDFs vanish there and
/// the potential must be extrapolated. j0 = 0 means no core.
struct CoreRegion {
    int j0 = 0;
};

/// Smallest j0 such that min(g, g_k) stays above `threshold` on every grid
/// point past j0.
inline CoreRegion detect_core_region(const Tabulated& g, const Tabulated& g_k,
                                     double threshold) {
    if (g.grid.m != g_k.grid.m || g.grid.dr != g_k.grid.dr)
        throw ConfigError("detect_core_region: tables on different grids");
    const std::size_t m = g.values.size();
    int j0 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::min(g.values[i], g_k.values[i]) <= threshold)
            j0 = static_cast<int>(i) + 1;
    }
    if (j0 >= g.grid.m)
        throw DegenerateRdf("no grid point past which both RDFs stay positive");
    return CoreRegion{j0};
}

/// Replace the core-region values of a potential by the power law
/// a' r^(-alpha'), with (a', alpha') fitted by linear least squares of
/// log u against log r over the first min(5, n - j0) points past the core.
inline Tabulated extrapolate_core(const Tabulated& u, const CoreRegion& core) {
    const int n = static_cast<int>(u.values.size());
    const int j0 = core.j0;
    if (j0 <= 0) return u;
    const int window = std::min(5, n - j0);
    if (window < 2)
        throw CoreFitFailure("fewer than two points available past the core");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int j = j0 + 1; j <= j0 + window; ++j) {
        const double uj = u.values[static_cast<std::size_t>(j - 1)];
        if (!(uj > 0.0))
            throw CoreFitFailure("nonpositive potential value in the core fit window");
        const double x = std::log(u.grid.r(j));
        const double y = std::log(uj);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double w = static_cast<double>(window);
    const double slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / w;
    const double alpha = -slope;
    if (!(alpha > 0.0)) throw CoreFitFailure("core fit produced a nonpositive exponent");
    const double a = std::exp(intercept);
    Tabulated out = u;
    for (int j = 1; j <= j0; ++j)
        out.values[static_cast<std::size_t>(j - 1)] = a * std::pow(u.grid.r(j), -alpha);
    return out;
}

/// Shift a potential by a constant so that u(r_n) = 0 exactly; the zero
/// extension beyond r_n is then continuous.
inline Tabulated shift_to_zero_tail(const Tabulated& u) {
    Tabulated out = u;
    if (out.values.empty()) return out;
    const double tail = out.values.back();
    for (double& v : out.values) v -= tail;
    out.values.back() = 0.0;
    return out;
}

/// Interpolate a potential onto a grid ten times finer over (0, r_n],
/// using a not-a-knot cubic spline. Values at the original nodes are
/// reproduced exactly; points below r_1 come from the first segment.
inline Tabulated refine_tenfold(const Tabulated& u) {
    const int n = static_cast<int>(u.values.size());
    const double dr = u.grid.dr;
    const double h = dr / 10.0;
    const int nfine = 10 * n;
    std::vector<double> fine(static_cast<std::size_t>(nfine));
    if (n == 1) {
        // single node: constant continuation
        for (int i = 0; i < nfine; ++i) fine[static_cast<std::size_t>(i)] = u.values[0];
    } else {
        const CubicSpline spline(dr, dr, u.values);
        for (int i = 1; i <= nfine; ++i) {
            const int seg1 = i / 10; // node index the point is measured from
            double v;
            if (i % 10 == 0) {
                v = u.values[static_cast<std::size_t>(seg1 - 1)];
            } else if (seg1 == 0) {
                v = spline.eval_segment(0, static_cast<double>(i - 10) * h);
            } else {
                v = spline.eval_segment(static_cast<std::size_t>(seg1 - 1),
                                        static_cast<double>(i % 10) * h);
            }
            fine[static_cast<std::size_t>(i - 1)] = v;
        }
    }
    RadialGrid g{h, nfine, nfine};
    return Tabulated{g, std::move(fine), Kind::potential};
}

/// Canonical post-processing of every potential update: shift the tail to
/// zero, then extrapolate the core region. Idempotent in this order.
inline Tabulated normalize_potential(const Tabulated& u, const CoreRegion& core) {
    return extrapolate_core(shift_to_zero_tail(u), core);
}

} // namespace rdfpot
