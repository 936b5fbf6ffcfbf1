#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/fourier.hpp"
#include "rdfpot/grid.hpp"
#include "rdfpot/state.hpp"

namespace rdfpot {

inline constexpr double kDefaultSMin = 1e-8;
inline constexpr double kDefaultCoreThreshold = 1e-6;

/// Ornstein-Zernike working set for one RDF at one state point: the
/// transform of h = g - 1 and the structure factor S = 1 + rho0*hhat,
/// which must stay strictly positive for any of the Newton-type
/// corrections to exist.
struct OzContext {
    StatePoint state;
    RadialGrid grid;
    SpectralField h_hat;
    std::vector<double> S; ///< S(omega_l), l = 1..m
    double S0 = 1.0;       ///< omega = 0 limit
};

inline OzContext make_oz_context(const Tabulated& g, const StatePoint& state,
                                 double s_min = kDefaultSMin) {
    if (g.kind != Kind::rdf && g.kind != Kind::generic)
        throw ConfigError("make_oz_context: expected an rdf table");
    if (static_cast<int>(g.values.size()) != g.grid.m)
        throw ConfigError("make_oz_context: rdf must cover the full grid");
    Tabulated h{g.grid, g.values, Kind::correlation};
    for (double& v : h.values) v -= 1.0;
    OzContext ctx{state, g.grid, radial_fft_forward(h), {}, 1.0};
    const std::size_t m = ctx.h_hat.values.size();
    ctx.S.resize(m);
    for (std::size_t l = 0; l < m; ++l) {
        ctx.S[l] = 1.0 + state.rho0 * ctx.h_hat.values[l];
        if (ctx.S[l] <= s_min)
            throw SingularStructureFactor("structure factor not positive at omega_" +
                                          std::to_string(l + 1));
    }
    ctx.S0 = 1.0 + state.rho0 * ctx.h_hat.zero_limit;
    if (ctx.S0 <= s_min)
        throw SingularStructureFactor("structure factor not positive at omega = 0");
    return ctx;
}

/// Direct correlation function from the Wiener identity
/// chat = hhat / (1 + rho0 hhat); satisfies the discrete OZ relation
/// chat + rho0 hhat chat = hhat pointwise by construction.
inline Tabulated direct_correlation(const OzContext& ctx) {
    SpectralField c_hat = ctx.h_hat;
    for (std::size_t l = 0; l < c_hat.values.size(); ++l) c_hat.values[l] /= ctx.S[l];
    c_hat.zero_limit /= ctx.S0;
    Tabulated c = radial_fft_inverse(c_hat);
    c.kind = Kind::correlation;
    return c;
}

/// Fourier symbol of T = (I+A)^{-2} (2I+A) A with A = rho0 h * (.):
///   t(omega) = (2 + rho0 hhat) rho0 hhat / (1 + rho0 hhat)^2.
inline SpectralField t_symbol(const OzContext& ctx) {
    SpectralField t = ctx.h_hat;
    for (std::size_t l = 0; l < t.values.size(); ++l) {
        const double a = ctx.state.rho0 * ctx.h_hat.values[l];
        t.values[l] = (2.0 + a) * a / (ctx.S[l] * ctx.S[l]);
    }
    const double a0 = ctx.state.rho0 * ctx.h_hat.zero_limit;
    t.zero_limit = (2.0 + a0) * a0 / (ctx.S0 * ctx.S0);
    return t;
}

/// Apply T spectrally: transform f, multiply by the symbol, transform back.
inline Tabulated apply_T(const OzContext& ctx, const Tabulated& f) {
    if (f.grid.m != ctx.grid.m || f.grid.dr != ctx.grid.dr)
        throw ConfigError("apply_T: table grid does not match the context");
    SpectralField fhat = radial_fft_forward(f);
    const SpectralField t = t_symbol(ctx);
    for (std::size_t l = 0; l < fhat.values.size(); ++l) fhat.values[l] *= t.values[l];
    fhat.zero_limit *= t.zero_limit;
    Tabulated out = radial_fft_inverse(fhat);
    out.kind = Kind::generic;
    return out;
}

/// Dense matrix representation T = F^{-1} diag(t) F. Folding the transform
/// prefactors gives
///   T_jj' = (2/(m+1)) (r_j'/r_j) sum_l t_l sin(pi j l/(m+1)) sin(pi j' l/(m+1)).
inline Eigen::MatrixXd assemble_T_matrix(const OzContext& ctx) {
    const int m = ctx.grid.m;
    const SpectralField t = t_symbol(ctx);
    Eigen::MatrixXd sine(m, m);
    for (int j = 1; j <= m; ++j)
        for (int l = 1; l <= m; ++l)
            sine(j - 1, l - 1) = std::sin(detail::pi * static_cast<double>(j) *
                                          static_cast<double>(l) / static_cast<double>(m + 1));
    Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(t.values.data(), m);
    Eigen::MatrixXd T = sine * tv.asDiagonal() * sine.transpose();
    T *= 2.0 / static_cast<double>(m + 1);
    for (int j = 0; j < m; ++j) {
        const double rj = ctx.grid.r_at(static_cast<std::size_t>(j));
        for (int k = 0; k < m; ++k)
            T(j, k) *= ctx.grid.r_at(static_cast<std::size_t>(k)) / rj;
    }
    return T;
}

/// Extend a potential table onto the full grid with the zero-tail rule.
inline std::vector<double> potential_on_full_grid(const Tabulated& u) {
    std::vector<double> out(static_cast<std::size_t>(u.grid.m), 0.0);
    for (std::size_t i = 0; i < u.values.size(); ++i) out[i] = u.values[i];
    return out;
}

/// Hypernetted-chain closure solved for the potential,
///   u = -(1/beta) log g + (1/beta)(h - c),
/// evaluated on the potential subgrid with no tail or core processing.
/// Core nodes where g <= 0 come out non-finite and must be repaired by
/// the caller (hnc_potential does).
inline Tabulated hnc_potential_raw(const Tabulated& g, const StatePoint& state,
                                   double s_min = kDefaultSMin) {
    const OzContext ctx = make_oz_context(g, state, s_min);
    const Tabulated c = direct_correlation(ctx);
    const double beta = state.beta();
    std::vector<double> u(static_cast<std::size_t>(g.grid.n));
    for (int j = 0; j < g.grid.n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double h = g.values[i] - 1.0;
        u[i] = (-std::log(g.values[i]) + h - c.values[i]) / beta;
    }
    return Tabulated{g.grid, std::move(u), Kind::potential};
}

/// hnc_potential_raw followed by the canonical tail shift and core
/// extrapolation.
inline Tabulated hnc_potential(const Tabulated& g, const StatePoint& state,
                               double core_threshold = kDefaultCoreThreshold,
                               double s_min = kDefaultSMin) {
    const CoreRegion core = detect_core_region(g, g, core_threshold);
    if (core.j0 >= g.grid.n)
        throw DegenerateRdf("core region covers the whole potential subgrid");
    return normalize_potential(hnc_potential_raw(g, state, s_min), core);
}

namespace detail {

/// One Picard stage of the HNC solver at fixed density, mixing on the
/// indirect correlation gamma = h - c. `gamma` carries the warm start in
/// and the converged field out. Stops once the successive-residual error
/// estimate delta * q/(1-q) puts the iterate within tol of the fixed
/// point, so the returned g is accurate to tol, not merely stalled.
inline std::vector<double> hnc_picard_stage(const std::vector<double>& boltz,
                                            const RadialGrid& grid, double rho0, double mix,
                                            double tol, int max_iter, double s_min,
                                            std::vector<double>& gamma) {
    const std::size_t m = boltz.size();
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = boltz[i] * std::exp(gamma[i]);
    Tabulated cwork{grid, std::vector<double>(m), Kind::correlation};
    double delta_prev = -1.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < m; ++i) cwork.values[i] = g[i] - 1.0 - gamma[i];
        SpectralField c_hat = radial_fft_forward(cwork);
        // gammahat = rho0 chat^2 / (1 - rho0 chat); the denominator is 1/S
        for (std::size_t l = 0; l < m; ++l) {
            const double denom = 1.0 - rho0 * c_hat.values[l];
            if (denom <= s_min)
                throw SingularStructureFactor(
                    "structure factor not positive during the HNC iteration");
            c_hat.values[l] = rho0 * c_hat.values[l] * c_hat.values[l] / denom;
        }
        c_hat.zero_limit = 0.0; // unused by the inverse transform
        const Tabulated gamma_new = radial_fft_inverse(c_hat);
        double delta = 0.0, gmax = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            gamma[i] += mix * (gamma_new.values[i] - gamma[i]);
            const double gi = boltz[i] * std::exp(gamma[i]);
            delta = std::max(delta, std::abs(gi - g[i]));
            gmax = std::max(gmax, std::abs(gamma[i]));
            g[i] = gi;
        }
        if (!std::isfinite(delta) || gmax > 1e8)
            throw SingularStructureFactor("HNC iteration diverged");
        if (delta <= tol) {
            double q = (delta_prev > 0.0) ? delta / delta_prev : 0.0;
            q = std::min(q, 0.999);
            if (delta == 0.0 || delta * q / (1.0 - q) <= tol) return g;
        }
        delta_prev = delta;
    }
    throw NoConvergence("HNC stage did not reach tolerance within " +
                        std::to_string(max_iter) + " iterations");
}

} // namespace detail

/// Deterministic HNC forward operator: solves the coupled system
///   g = exp(-beta u + gamma),  chat = hhat/(1 + rho0 hhat),  gamma = h - c
/// by Picard iteration on gamma with fixed linear mixing. A cold start can
/// sit on the wrong side of the OZ singularity at liquid-like densities,
/// so failed stages trigger a density-continuation ladder that warm-starts
/// gamma from the highest density solved so far. Returns the RDF on the
/// full grid of u.
inline Tabulated hnc_forward_solve(const Tabulated& u, const StatePoint& state, double mix,
                                   double tol, int max_iter, double s_min = kDefaultSMin) {
    if (!(mix > 0.0 && mix <= 1.0))
        throw ConfigError("hnc_forward_solve: mixing parameter must lie in (0, 1]");
    if (!(tol > 0.0)) throw ConfigError("hnc_forward_solve: tolerance must be positive");
    const std::size_t m = static_cast<std::size_t>(u.grid.m);
    const double beta = state.beta();
    const std::vector<double> ufull = potential_on_full_grid(u);
    std::vector<double> boltz(m);
    for (std::size_t i = 0; i < m; ++i) boltz[i] = std::exp(-beta * ufull[i]);

    std::vector<double> gamma(m, 0.0);
    std::vector<double> g;
    double rho_done = 0.0;
    double rho_try = state.rho0;
    while (true) {
        std::vector<double> gamma_try = gamma;
        try {
            g = detail::hnc_picard_stage(boltz, u.grid, rho_try, mix, tol, max_iter, s_min,
                                         gamma_try);
        } catch (const Error&) {
            const double step = rho_try - rho_done;
            if (step <= 1e-3 * state.rho0 || state.rho0 == 0.0) throw;
            rho_try = rho_done + 0.5 * step;
            continue;
        }
        gamma = std::move(gamma_try);
        rho_done = rho_try;
        if (rho_try == state.rho0) break;
        rho_try = state.rho0;
    }
    return Tabulated{u.grid, std::move(g), Kind::rdf};
}

} // namespace rdfpot
