#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/grid.hpp"
#include "rdfpot/spline.hpp"
#include "rdfpot/state.hpp"

namespace rdfpot {

/// Knobs of one NVT run. Defaults follow common reduced-unit practice:
/// dt = 0.002, thermostat time constant 100 dt, and enough production
/// frames for the RDF statistics (production/stride >= 3500 by default).
struct MdParams {
    double dt = 0.002;
    long equilibration_steps = 50000;
    long production_steps = 35000;
    long sampling_stride = 10;
    double tau_T = 0.2;
    bool thermostat = true; ///< applies to production; equilibration is always coupled
    std::uint64_t seed = 1;
    double blowup_factor = 1e4; ///< abort when T_inst exceeds this multiple of T
    std::string trajectory_path; ///< empty: no trajectory output

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("MD timestep must be positive");
        if (equilibration_steps < 0 || production_steps < 1)
            throw ConfigError("MD step counts invalid");
        if (sampling_stride < 1 || production_steps < sampling_stride)
            throw ConfigError("MD production must cover at least one sampling stride");
        if (!(tau_T > 0.0)) throw ConfigError("thermostat time constant must be positive");
    }
};

struct MdResult {
    Tabulated g;             ///< RDF estimate on the requested grid
    double pressure = 0.0;   ///< virial pressure averaged over sampled frames
    double pressure_se = 0.0;
    double mean_temperature = 0.0;
    long frames = 0;
    std::vector<double> g_se;    ///< per-bin standard error (Poisson counts)
    double max_net_momentum = 0.0; ///< worst |sum v| component over sampled frames
    double energy_first = 0.0;   ///< total energy at first/last sampled frame
    double energy_last = 0.0;
};

namespace detail {

/// Pair potential and force lookup backed by the tenfold-refined table of
/// Remark-style preprocessing: cubic interpolant, analytic derivative,
/// both identically zero beyond the cutoff r_n.
class TabulatedForceField {
public:
    TabulatedForceField(const Tabulated& u) : cutoff_(u.grid.r_cut()) {
        zero_ = std::all_of(u.values.begin(), u.values.end(),
                            [](double v) { return v == 0.0; });
        if (zero_) return;
        const Tabulated fine = refine_tenfold(u);
        spline_.emplace(fine.grid.dr, fine.grid.dr, fine.values);
    }

    bool is_zero() const { return zero_; }
    double cutoff() const { return cutoff_; }

    double energy(double r) const {
        if (zero_ || r >= cutoff_) return 0.0;
        return (*spline_)(r);
    }

    double derivative(double r) const {
        if (zero_ || r >= cutoff_) return 0.0;
        return spline_->derivative(r);
    }

private:
    double cutoff_;
    bool zero_ = true;
    std::optional<CubicSpline> spline_;
};

struct CellIndexer {
    int nc = 0;
    double inv_cell = 0.0;
    int cell_of(double x) const {
        int c = static_cast<int>(x * inv_cell);
        if (c >= nc) c = nc - 1;
        if (c < 0) c = 0;
        return c;
    }
};

} // namespace detail

/// Virial pressure by trapezoidal quadrature over the grid,
///   p = rho0/beta - (2/3) pi rho0^2 \int u'(r) g(r) r^3 dr,
/// with u' from central finite differences on the tabulation and u = 0
/// beyond the cutoff.
inline double virial_pressure_quadrature(const Tabulated& u, const Tabulated& g,
                                         const StatePoint& state) {
    const int m = g.grid.m;
    const int n = static_cast<int>(u.values.size());
    const double dr = g.grid.dr;
    auto uval = [&](int j) -> double { // 1-based, zero outside (0, r_n]
        if (j < 1 || j > n) return 0.0;
        return u.values[static_cast<std::size_t>(j - 1)];
    };
    std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0); // w[j] at r_j, w[0] at r = 0
    for (int j = 1; j <= m; ++j) {
        double du;
        if (j == 1)
            du = (uval(2) - uval(1)) / dr;
        else
            du = (uval(j + 1) - uval(j - 1)) / (2.0 * dr);
        const double r = g.grid.r(j);
        w[static_cast<std::size_t>(j)] = du * g.values[static_cast<std::size_t>(j - 1)] * r * r * r;
    }
    double integral = 0.0;
    for (int j = 0; j < m; ++j)
        integral += 0.5 * (w[static_cast<std::size_t>(j)] + w[static_cast<std::size_t>(j) + 1]);
    integral *= dr;
    const double rho = state.rho0;
    return rho / state.beta() - (2.0 / 3.0) * std::numbers::pi * rho * rho * integral;
}

/// Canonical-ensemble molecular dynamics of N identical unit-mass particles
/// under the tabulated pair potential: velocity Verlet, cell-list forces,
/// stochastic velocity-rescaling thermostat, RDF histogram with bin width
/// dr and virial pressure from the sampled frames. Deterministic for a
/// fixed seed.
inline MdResult run_nvt(const Tabulated& u, const StatePoint& state, const MdParams& params) {
    state.validate_md();
    params.validate();
    if (u.kind != Kind::potential)
        throw ConfigError("run_nvt: expected a potential table");
    if (std::abs(u.values.back()) > 1e-12)
        throw ConfigError("run_nvt: potential must be tail-shifted (u(r_n) = 0)");

    const int N = state.N;
    const double V = static_cast<double>(N) / state.rho0;
    const double L = std::cbrt(V);
    const double rdf_range = u.grid.r_max();
    if (rdf_range > 0.5 * L * (1.0 + 1e-12))
        throw RdfRangeExceedsBox("RDF range " + std::to_string(rdf_range) +
                                 " exceeds half box length " + std::to_string(0.5 * L));

    const detail::TabulatedForceField field(u);
    const double cutoff = field.cutoff();
    const double cutoff2 = cutoff * cutoff;
    const double kBT = state.kB * state.T;

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // simple-cubic start, melted during equilibration
    std::vector<double> x(static_cast<std::size_t>(3 * N)), v(static_cast<std::size_t>(3 * N)),
        f(static_cast<std::size_t>(3 * N), 0.0);
    {
        int side = 1;
        while (side * side * side < N) ++side;
        const double a = L / static_cast<double>(side);
        int placed = 0;
        for (int ix = 0; ix < side && placed < N; ++ix)
            for (int iy = 0; iy < side && placed < N; ++iy)
                for (int iz = 0; iz < side && placed < N; ++iz) {
                    x[static_cast<std::size_t>(3 * placed)] = (ix + 0.5) * a;
                    x[static_cast<std::size_t>(3 * placed) + 1] = (iy + 0.5) * a;
                    x[static_cast<std::size_t>(3 * placed) + 2] = (iz + 0.5) * a;
                    ++placed;
                }
    }
    {
        const double sigma_v = std::sqrt(kBT);
        double p[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < 3 * N; ++i) {
            v[static_cast<std::size_t>(i)] = sigma_v * gauss(rng);
            p[i % 3] += v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < 3 * N; ++i) v[static_cast<std::size_t>(i)] -= p[i % 3] / N;
        double k2 = 0.0;
        for (double vi : v) k2 += vi * vi;
        const int nf = 3 * N - 3;
        const double scale = std::sqrt(nf * kBT / k2);
        for (double& vi : v) vi *= scale;
    }

    // cell list; falls back to all pairs when the box is too small
    detail::CellIndexer cells;
    cells.nc = (cutoff > 0.0) ? static_cast<int>(L / cutoff) : 0;
    const bool use_cells = cells.nc >= 3;
    if (use_cells) cells.inv_cell = cells.nc / L;
    std::vector<int> head, next(static_cast<std::size_t>(N));
    if (use_cells) head.assign(static_cast<std::size_t>(cells.nc) * cells.nc * cells.nc, -1);

    double e_pot = 0.0, virial = 0.0;

    auto min_image = [L](double d) {
        if (d > 0.5 * L) d -= L;
        else if (d < -0.5 * L) d += L;
        return d;
    };

    auto pair_interaction = [&](int i, int j) {
        const std::size_t a = static_cast<std::size_t>(3 * i), b = static_cast<std::size_t>(3 * j);
        const double dx = min_image(x[a] - x[b]);
        const double dy = min_image(x[a + 1] - x[b + 1]);
        const double dz = min_image(x[a + 2] - x[b + 2]);
        const double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 >= cutoff2) return;
        const double r = std::sqrt(r2);
        const double du = field.derivative(r);
        const double fac = -du / r;
        f[a] += fac * dx;
        f[a + 1] += fac * dy;
        f[a + 2] += fac * dz;
        f[b] -= fac * dx;
        f[b + 1] -= fac * dy;
        f[b + 2] -= fac * dz;
        e_pot += field.energy(r);
        virial += fac * r2; // = -u'(r) * r
    };

    auto compute_forces = [&]() {
        std::fill(f.begin(), f.end(), 0.0);
        e_pot = 0.0;
        virial = 0.0;
        if (field.is_zero()) return;
        if (!use_cells) {
            for (int i = 0; i < N; ++i)
                for (int j = i + 1; j < N; ++j) pair_interaction(i, j);
            return;
        }
        std::fill(head.begin(), head.end(), -1);
        const int nc = cells.nc;
        for (int i = 0; i < N; ++i) {
            const std::size_t a = static_cast<std::size_t>(3 * i);
            const int cx = cells.cell_of(x[a]);
            const int cy = cells.cell_of(x[a + 1]);
            const int cz = cells.cell_of(x[a + 2]);
            const std::size_t c =
                static_cast<std::size_t>((cx * nc + cy) * nc + cz);
            next[static_cast<std::size_t>(i)] = head[c];
            head[c] = i;
        }
        for (int cx = 0; cx < nc; ++cx)
            for (int cy = 0; cy < nc; ++cy)
                for (int cz = 0; cz < nc; ++cz) {
                    const std::size_t c =
                        static_cast<std::size_t>((cx * nc + cy) * nc + cz);
                    for (int i = head[c]; i >= 0; i = next[static_cast<std::size_t>(i)]) {
                        for (int ox = -1; ox <= 1; ++ox)
                            for (int oy = -1; oy <= 1; ++oy)
                                for (int oz = -1; oz <= 1; ++oz) {
                                    int nx = (cx + ox + nc) % nc;
                                    int ny = (cy + oy + nc) % nc;
                                    int nz = (cz + oz + nc) % nc;
                                    const std::size_t d = static_cast<std::size_t>(
                                        (nx * nc + ny) * nc + nz);
                                    for (int j = head[d]; j >= 0;
                                         j = next[static_cast<std::size_t>(j)])
                                        if (j > i) pair_interaction(i, j);
                                }
                    }
                }
    };

    auto kinetic = [&]() {
        double k = 0.0;
        for (double vi : v) k += vi * vi;
        return 0.5 * k;
    };

    const int nf = 3 * N - 3;
    const double target_kinetic = 0.5 * nf * kBT;
    std::gamma_distribution<double> chi2_rest(0.5 * (nf - 1), 2.0);

    auto thermostat_rescale = [&]() {
        const double K = kinetic();
        if (K <= 0.0) return;
        const double c = std::exp(-params.dt / params.tau_T);
        const double r1 = gauss(rng);
        const double sum2 = chi2_rest(rng);
        const double ratio = target_kinetic / (nf * K);
        const double alpha2 = c + (1.0 - c) * (r1 * r1 + sum2) * ratio +
                              2.0 * r1 * std::sqrt(c * (1.0 - c) * ratio);
        const double scale = std::sqrt(std::max(alpha2, 0.0));
        for (double& vi : v) vi *= scale;
    };

    // RDF histogram: centered bins of width dr around r_j = j dr
    const int m = u.grid.m;
    const double dr = u.grid.dr;
    std::vector<double> hist(static_cast<std::size_t>(m), 0.0);
    auto sample_rdf = [&]() {
        for (int i = 0; i < N; ++i) {
            const std::size_t a = static_cast<std::size_t>(3 * i);
            for (int j = i + 1; j < N; ++j) {
                const std::size_t b = static_cast<std::size_t>(3 * j);
                const double dx = min_image(x[a] - x[b]);
                const double dy = min_image(x[a + 1] - x[b + 1]);
                const double dz = min_image(x[a + 2] - x[b + 2]);
                const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                const int bin = static_cast<int>(r / dr + 0.5);
                if (bin >= 1 && bin <= m) ++hist[static_cast<std::size_t>(bin - 1)];
            }
        }
    };

    std::ofstream traj;
    if (!params.trajectory_path.empty()) {
        traj.open(params.trajectory_path);
        if (!traj) throw ConfigError("cannot write trajectory: " + params.trajectory_path);
    }

    compute_forces();
    long frames = 0;
    double p_sum = 0.0, p_sq = 0.0, t_sum = 0.0;
    double max_mom = 0.0, e_first = 0.0, e_last = 0.0;
    const long total = params.equilibration_steps + params.production_steps;
    for (long step = 0; step < total; ++step) {
        const bool production = step >= params.equilibration_steps;
        const double half = 0.5 * params.dt;
        for (int i = 0; i < 3 * N; ++i) v[static_cast<std::size_t>(i)] += half * f[static_cast<std::size_t>(i)];
        for (int i = 0; i < 3 * N; ++i) {
            double& xi = x[static_cast<std::size_t>(i)];
            xi += params.dt * v[static_cast<std::size_t>(i)];
            xi -= L * std::floor(xi / L);
        }
        compute_forces();
        for (int i = 0; i < 3 * N; ++i) v[static_cast<std::size_t>(i)] += half * f[static_cast<std::size_t>(i)];
        if (!production || params.thermostat) thermostat_rescale();

        if (production && (step - params.equilibration_steps + 1) % params.sampling_stride == 0) {
            const double K = kinetic();
            if (!std::isfinite(K) || 2.0 * K / nf > params.blowup_factor * kBT)
                throw BlowUp("kinetic energy exceeded the sanity bound at step " +
                             std::to_string(step));
            const double T_inst = 2.0 * K / (nf * state.kB);
            const double p_inst = (2.0 * K + virial) / (3.0 * V);
            p_sum += p_inst;
            p_sq += p_inst * p_inst;
            t_sum += T_inst;
            sample_rdf();
            double mom[3] = {0.0, 0.0, 0.0};
            for (int i = 0; i < 3 * N; ++i) mom[i % 3] += v[static_cast<std::size_t>(i)];
            for (double pc : mom) max_mom = std::max(max_mom, std::abs(pc));
            const double e_tot = K + e_pot;
            if (frames == 0) e_first = e_tot;
            e_last = e_tot;
            ++frames;
            if (traj.is_open()) {
                char buf[96];
                for (int i = 0; i < N; ++i) {
                    const std::size_t a = static_cast<std::size_t>(3 * i);
                    std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g\n", x[a], x[a + 1],
                                  x[a + 2]);
                    traj << buf;
                }
            }
        } else if ((step & 1023) == 0) {
            const double K = kinetic();
            if (!std::isfinite(K) || 2.0 * K / nf > params.blowup_factor * kBT)
                throw BlowUp("kinetic energy exceeded the sanity bound at step " +
                             std::to_string(step));
        }
    }

    MdResult res;
    res.frames = frames;
    res.mean_temperature = t_sum / frames;
    res.pressure = p_sum / frames;
    const double var = std::max(0.0, p_sq / frames - res.pressure * res.pressure);
    res.pressure_se = std::sqrt(var / frames);
    res.max_net_momentum = max_mom;
    res.energy_first = e_first;
    res.energy_last = e_last;

    std::vector<double> g(static_cast<std::size_t>(m)), gse(static_cast<std::size_t>(m));
    const double pairs = 0.5 * static_cast<double>(N) * (N - 1);
    for (int j = 1; j <= m; ++j) {
        const double lo = (j - 0.5) * dr;
        const double hi = (j + 0.5) * dr;
        const double shell = (4.0 / 3.0) * std::numbers::pi * (hi * hi * hi - lo * lo * lo);
        const double ideal = frames * pairs * shell / V;
        const double counts = hist[static_cast<std::size_t>(j - 1)];
        g[static_cast<std::size_t>(j - 1)] = counts / ideal;
        gse[static_cast<std::size_t>(j - 1)] = std::sqrt(std::max(counts, 1.0)) / ideal;
    }
    res.g = Tabulated{u.grid, std::move(g), Kind::rdf};
    res.g_se = std::move(gse);
    return res;
}

} // namespace rdfpot
