#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/grid.hpp"
#include "rdfpot/oz.hpp"
#include "rdfpot/state.hpp"

namespace rdfpot {

enum class Scheme { IBI, REL, IHNC, HNCN, LWR, PYV, HNCGN };

inline const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::IBI: return "IBI";
    case Scheme::REL: return "REL";
    case Scheme::IHNC: return "IHNC";
    case Scheme::HNCN: return "HNCN";
    case Scheme::LWR: return "LWR";
    case Scheme::PYV: return "PYV";
    case Scheme::HNCGN: return "HNCGN";
    }
    return "?";
}

inline Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::IBI, Scheme::REL, Scheme::IHNC, Scheme::HNCN, Scheme::LWR,
                     Scheme::PYV, Scheme::HNCGN})
        if (name == scheme_name(s)) return s;
    throw ConfigError("unknown scheme tag: " + name);
}

struct SchemeConfig {
    Scheme scheme = Scheme::IHNC;
    int max_iter = 30;
    double tol = 1e-6; ///< stop tolerance on the relative data fit
    double weight_exponent = 0.0; ///< gamma in w_jj = (1+r_j^2)^gamma; 0 means W = I
    std::optional<double> pressure_target; ///< HNCGN only
    double core_threshold = kDefaultCoreThreshold;
    double s_min = kDefaultSMin;

    void validate() const {
        if (pressure_target && scheme != Scheme::HNCGN)
            throw ConfigError("a pressure target is only legal with the HNCGN scheme");
        if (max_iter < 0) throw ConfigError("max_iter must be nonnegative");
        if (weight_exponent < 0.0) throw ConfigError("weighting exponent must be nonnegative");
    }
};

// ---------------------------------------------------------------------------
// diagnostics

/// Weighted L2 error between two potentials on the common subgrid,
///   eps = ( dr sum_i g(r_i) (u(r_i) - u_ref(r_i))^2 r_i^2 )^{1/2}.
inline double error_metric(const Tabulated& u, const Tabulated& u_ref, const Tabulated& g) {
    if (u.values.size() != u_ref.values.size() || u.grid.dr != u_ref.grid.dr)
        throw ConfigError("error_metric: potentials on different grids");
    double sum = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double r = u.grid.r_at(i);
        const double d = u.values[i] - u_ref.values[i];
        sum += g.values[i] * d * d * r * r;
    }
    return std::sqrt(u.grid.dr * sum);
}

/// Relative sup-norm data fit over all m data points.
inline double data_fit(const Tabulated& g_k, const Tabulated& g, double g0_fit) {
    double dev = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i)
        dev = std::max(dev, std::abs(g_k.values[i] - g.values[i]));
    if (g0_fit == 0.0) return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return dev / g0_fit;
}

// ---------------------------------------------------------------------------
// update rules

/// Potential of mean force, u0 = -(1/beta) log g, the standard initial guess.
inline Tabulated pmf_initial_guess(const Tabulated& g, double beta,
                                   double core_threshold = kDefaultCoreThreshold) {
    const CoreRegion core = detect_core_region(g, g, core_threshold);
    if (core.j0 >= g.grid.n)
        throw DegenerateRdf("core region covers the whole potential subgrid");
    Tabulated u{g.grid, std::vector<double>(static_cast<std::size_t>(g.grid.n), 0.0),
                Kind::potential};
    for (int j = core.j0; j < g.grid.n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        u.values[i] = -std::log(g.values[i]) / beta;
    }
    return normalize_potential(u, core);
}

namespace detail {

/// Shared scaffolding of the pointwise update rules: detect the joint core,
/// add the increment on the usable potential nodes, normalize.
template <class Increment>
Tabulated pointwise_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                         double core_threshold, Increment&& increment) {
    const CoreRegion core = detect_core_region(g, g_k, core_threshold);
    if (core.j0 >= g.grid.n)
        throw DegenerateRdf("core region covers the whole potential subgrid");
    Tabulated u_next = u_k;
    for (int j = core.j0; j < g.grid.n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        u_next.values[i] += increment(i);
    }
    return normalize_potential(u_next, core);
}

} // namespace detail

/// Iterative Boltzmann inversion: u_{k+1} = u_k + (1/beta) log(g_k/g).
inline Tabulated ibi_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                          double beta, double core_threshold = kDefaultCoreThreshold) {
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        return std::log(g_k.values[i] / g.values[i]) / beta;
    });
}

/// Relative variant with increment (1/beta)(g_k - g)/g, the low-density
/// tangent approximation of the IBI increment.
inline Tabulated relative_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                               double beta, double core_threshold = kDefaultCoreThreshold) {
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        return (g_k.values[i] - g.values[i]) / (g.values[i] * beta);
    });
}

namespace detail {

inline Tabulated correction_phi(const OzContext& ctx_g, const Tabulated& g_k,
                                const Tabulated& g) {
    Tabulated diff{g.grid, std::vector<double>(g.values.size()), Kind::generic};
    for (std::size_t i = 0; i < g.values.size(); ++i)
        diff.values[i] = g.values[i] - g_k.values[i];
    return apply_T(ctx_g, diff);
}

} // namespace detail

/// Inverse hypernetted-chain iteration:
///   u_{k+1} = u_k + (1/beta) log(g_k/g) + (1/beta) phi_k,
/// phi_k = T (g - g_k) with T built from the target RDF.
inline Tabulated ihnc_step(const OzContext& ctx_g, const Tabulated& u_k, const Tabulated& g_k,
                           const Tabulated& g, double core_threshold = kDefaultCoreThreshold) {
    const Tabulated phi = detail::correction_phi(ctx_g, g_k, g);
    const double beta = ctx_g.state.beta();
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        return (std::log(g_k.values[i] / g.values[i]) + phi.values[i]) / beta;
    });
}

inline Tabulated ihnc_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                           const StatePoint& state,
                           double core_threshold = kDefaultCoreThreshold,
                           double s_min = kDefaultSMin) {
    return ihnc_step(make_oz_context(g, state, s_min), u_k, g_k, g, core_threshold);
}

/// Hypernetted-chain Newton iteration: as IHNC with log(g_k/g) replaced by
/// its tangent (g_k - g)/g.
inline Tabulated hncn_step(const OzContext& ctx_g, const Tabulated& u_k, const Tabulated& g_k,
                           const Tabulated& g, double core_threshold = kDefaultCoreThreshold) {
    const Tabulated phi = detail::correction_phi(ctx_g, g_k, g);
    const double beta = ctx_g.state.beta();
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        return ((g_k.values[i] - g.values[i]) / g.values[i] + phi.values[i]) / beta;
    });
}

inline Tabulated hncn_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                           const StatePoint& state,
                           double core_threshold = kDefaultCoreThreshold,
                           double s_min = kDefaultSMin) {
    return hncn_step(make_oz_context(g, state, s_min), u_k, g_k, g, core_threshold);
}

/// Levesque-Weis-Reatto secant update:
///   u_{k+1} = u_k + (1/beta) log(g_k/g) + (1/beta)(g - g_k - c + c_k),
/// equivalently u_k + U(g) - U(g_k); needs the direct correlation of BOTH
/// ensembles, so both structure factors must be positive.
inline Tabulated lwr_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                          const StatePoint& state,
                          double core_threshold = kDefaultCoreThreshold,
                          double s_min = kDefaultSMin) {
    const Tabulated c = direct_correlation(make_oz_context(g, state, s_min));
    const Tabulated c_k = direct_correlation(make_oz_context(g_k, state, s_min));
    const double beta = state.beta();
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        return (std::log(g_k.values[i] / g.values[i]) + (g.values[i] - g_k.values[i]) -
                (c.values[i] - c_k.values[i])) /
               beta;
    });
}

/// Percus-Yevick variant: phi_k is divided by the cavity function
/// y_k = g_k exp(beta u_k) of the current iterate.
inline Tabulated pyv_step(const OzContext& ctx_g, const Tabulated& u_k, const Tabulated& g_k,
                          const Tabulated& g, double core_threshold = kDefaultCoreThreshold) {
    const Tabulated phi = detail::correction_phi(ctx_g, g_k, g);
    const double beta = ctx_g.state.beta();
    const CoreRegion core = detect_core_region(g, g_k, core_threshold);
    if (core.j0 >= g.grid.n)
        throw DegenerateRdf("core region covers the whole potential subgrid");
    for (int j = core.j0; j < g.grid.n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double y = g_k.values[i] * std::exp(beta * u_k.values[i]);
        if (y <= 1e-12)
            throw CavityUnderflow("cavity function vanished at r = " +
                                  std::to_string(g.grid.r(j + 1)));
    }
    return detail::pointwise_step(u_k, g_k, g, core_threshold, [&](std::size_t i) {
        const double y = g_k.values[i] * std::exp(beta * u_k.values[i]);
        return (std::log(g_k.values[i] / g.values[i]) + phi.values[i] / y) / beta;
    });
}

inline Tabulated pyv_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                          const StatePoint& state,
                          double core_threshold = kDefaultCoreThreshold,
                          double s_min = kDefaultSMin) {
    return pyv_step(make_oz_context(g, state, s_min), u_k, g_k, g, core_threshold);
}

// ---------------------------------------------------------------------------
// HNCGN: Gauss-Newton over antiderivative increments

/// Discrete negative antiderivative A0 in R^{m x (n-1)}: the upper n x (n-1)
/// block has entries dr for column >= row (last row zero), the rest is zero.
/// v = A0 w is piecewise linear with v(r_n) = 0 and slope -w_i on
/// (r_i, r_{i+1}).
inline Eigen::MatrixXd antiderivative_matrix(const RadialGrid& grid) {
    if (grid.n < 2) throw ConfigError("antiderivative_matrix requires n >= 2");
    Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(grid.m, grid.n - 1);
    for (int i = 0; i < grid.n - 1; ++i)
        for (int j = i; j < grid.n - 1; ++j) A0(i, j) = grid.dr;
    return A0;
}

/// Discretized pressure constraint l^T w = p - p_k with
///   l_i = (2/3) pi rho0^2 (g(r_i)+g(r_{i+1}))/2 (r_{i+1}^4 - r_i^4)/4.
inline std::vector<double> pressure_constraint_vector(const Tabulated& g,
                                                      const StatePoint& state) {
    const int n = g.grid.n;
    std::vector<double> ell(static_cast<std::size_t>(n - 1));
    const double pref = (2.0 / 3.0) * detail::pi * state.rho0 * state.rho0;
    for (int i = 1; i < n; ++i) {
        const double gi = g.values[static_cast<std::size_t>(i - 1)];
        const double gi1 = g.values[static_cast<std::size_t>(i)];
        const double ri = g.grid.r(i);
        const double ri1 = g.grid.r(i + 1);
        const double r4 = (ri1 * ri1 * ri1 * ri1 - ri * ri * ri * ri) / 4.0;
        ell[static_cast<std::size_t>(i - 1)] = pref * 0.5 * (gi + gi1) * r4;
    }
    return ell;
}

/// Per-inversion state of the HNCGN scheme. Both the data rows and the
/// update segments are restricted to grid points outside the target's core
/// region (inside it the RDF is numerically zero and the potential is
/// extrapolated anyway). The linearization U = (1/beta)(T - D^{-1}) is
/// built once on those rows and factored; only the residual changes per
/// step.
class HncgnWorkspace {
public:
    HncgnWorkspace(const Tabulated& g, const StatePoint& state, const SchemeConfig& cfg)
        : grid_(g.grid), beta_(state.beta()), cfg_(cfg) {
        if (grid_.n < 2) throw ConfigError("HNCGN requires n >= 2");
        core_ = detect_core_region(g, g, cfg.core_threshold);
        const int m = grid_.m;
        const int n = grid_.n;
        const int j0 = core_.j0;
        if (j0 >= n - 1)
            throw DegenerateRdf("core region leaves no potential segment to update");
        const int mc = m - j0;        // usable data rows
        const int cols = n - 1 - j0;  // usable derivative segments (r_i, r_{i+1}), i > j0
        const OzContext ctx = make_oz_context(g, state, cfg.s_min);
        const Eigen::MatrixXd T = assemble_T_matrix(ctx);
        Eigen::MatrixXd U(mc, mc);
        for (int a = 0; a < mc; ++a)
            for (int b = 0; b < mc; ++b) U(a, b) = T(j0 + a, j0 + b) / beta_;
        for (int a = 0; a < mc; ++a)
            U(a, a) -= 1.0 / (beta_ * g.values[static_cast<std::size_t>(j0 + a)]);
        Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(mc, cols);
        for (int a = 0; a < mc; ++a)
            for (int c = 0; c < cols; ++c)
                if (j0 + a <= j0 + c && j0 + a <= n - 2) A0(a, c) = grid_.dr;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(U);
        B_ = lu.solve(A0);

        weights_ = Eigen::VectorXd::Ones(mc);
        if (cfg.weight_exponent > 0.0)
            for (int a = 0; a < mc; ++a) {
                const double r = grid_.r(j0 + a + 1);
                weights_(a) = std::pow(1.0 + r * r, cfg.weight_exponent);
            }
        WB_ = weights_.asDiagonal() * B_;

        const std::vector<double> ellv = pressure_constraint_vector(g, state);
        ell_ = Eigen::Map<const Eigen::VectorXd>(ellv.data() + j0, cols);
        i0_ = 0;
        ell_zero_ = ell_.cwiseAbs().maxCoeff(&i0_) == 0.0;

        if (cfg.pressure_target && !ell_zero_ && cols > 1) {
            // eliminate w_{i0}: reduced columns  WB_j - (l_j/l_{i0}) WB_{i0}
            R_ = Eigen::MatrixXd(mc, cols - 1);
            int c = 0;
            for (int j = 0; j < cols; ++j) {
                if (j == static_cast<int>(i0_)) continue;
                R_.col(c++) = WB_.col(j) - (ell_(j) / ell_(i0_)) * WB_.col(i0_);
            }
            gram_ = factor_gram(R_);
        } else {
            gram_ = factor_gram(WB_);
        }
    }

    const CoreRegion& core() const { return core_; }

    /// Constraint coefficients for the usable segments (r_i, r_{i+1}),
    /// i = j0+1 .. n-1.
    const Eigen::VectorXd& constraint_vector() const { return ell_; }

    struct StepResult {
        Tabulated u_next;
        Eigen::VectorXd w; ///< derivative increments on the usable segments
        double constraint_residual = std::numeric_limits<double>::quiet_NaN();
    };

    /// One Gauss-Newton step from u_k given the simulated g_k (and the
    /// current pressure p_k when a target pressure is set).
    StepResult step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                    double p_k) const {
        const int j0 = core_.j0;
        const int mc = grid_.m - j0;
        const int cols = static_cast<int>(ell_.size());
        Eigen::VectorXd resid(mc);
        for (int a = 0; a < mc; ++a) {
            const std::size_t i = static_cast<std::size_t>(j0 + a);
            resid(a) = weights_(a) * (g.values[i] - g_k.values[i]);
        }
        Eigen::VectorXd w;
        double constraint_residual = std::numeric_limits<double>::quiet_NaN();
        if (cfg_.pressure_target) {
            const double dp = *cfg_.pressure_target - p_k;
            if (ell_zero_) {
                if (dp != 0.0)
                    throw ConstraintInfeasible(
                        "pressure constraint vector vanishes but p != p_k");
                w = solve_gram(WB_, resid);
                constraint_residual = 0.0;
            } else if (cols == 1) {
                w = Eigen::VectorXd::Constant(1, dp / ell_(0));
                constraint_residual = ell_.dot(w) - dp;
            } else {
                const Eigen::VectorXd shifted =
                    resid - (dp / ell_(i0_)) * WB_.col(i0_);
                const Eigen::VectorXd wr = solve_gram(R_, shifted);
                w = Eigen::VectorXd(cols);
                int c = 0;
                double acc = 0.0;
                for (int j = 0; j < cols; ++j) {
                    if (j == static_cast<int>(i0_)) continue;
                    w(j) = wr(c++);
                    acc += ell_(j) * w(j);
                }
                w(i0_) = (dp - acc) / ell_(i0_);
                constraint_residual = ell_.dot(w) - dp;
            }
        } else {
            w = solve_gram(WB_, resid);
        }

        Tabulated u_next = u_k;
        // u_{k+1} = u_k + A w: cumulative sums from the tail, zero at r_n
        double acc = 0.0;
        for (int c = cols - 1; c >= 0; --c) {
            acc += grid_.dr * w(c);
            u_next.values[static_cast<std::size_t>(j0 + c)] += acc;
        }
        const CoreRegion iter_core = detect_core_region(g, g_k, cfg_.core_threshold);
        if (iter_core.j0 >= grid_.n)
            throw DegenerateRdf("core region covers the whole potential subgrid");
        return {normalize_potential(u_next, iter_core), std::move(w), constraint_residual};
    }

private:
    /// Least-squares solver for one design matrix. Healthy problems go
    /// through plain normal equations. When the Gram condition estimate
    /// exceeds 1e12 the normal equations are numerically meaningless, and
    /// the exact least-squares solution itself rides near-null directions
    /// of the exponentially damped Jacobian (potential nodes where g is
    /// numerically zero buy residual at absurd amplitudes), so those
    /// directions are truncated in a rank-aware orthogonal solve.
    struct LsqSolver {
        Eigen::LDLT<Eigen::MatrixXd> ldlt;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        bool truncated = false;
    };

    static constexpr double kCondLimit = 1e12;
    static constexpr double kTruncation = 1e-4; ///< relative singular-value cutoff

    LsqSolver factor_gram(const Eigen::MatrixXd& M) const {
        LsqSolver s;
        Eigen::MatrixXd G = M.transpose() * M;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        const double lmax = es.eigenvalues().maxCoeff();
        const double lmin = es.eigenvalues().minCoeff();
        if (!(lmax > 0.0))
            throw SingularNormalEquations("Gauss-Newton design matrix is zero");
        if (lmin <= 0.0 || lmax / lmin > kCondLimit) {
            s.truncated = true;
            s.cod.setThreshold(kTruncation);
            s.cod.compute(M);
            return s;
        }
        s.ldlt.compute(G);
        if (s.ldlt.info() != Eigen::Success)
            throw SingularNormalEquations("normal equations could not be factored");
        return s;
    }

    Eigen::VectorXd solve_gram(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd w = gram_.truncated ? gram_.cod.solve(rhs).eval()
                                            : gram_.ldlt.solve(M.transpose() * rhs).eval();
        if (!w.allFinite())
            throw SingularNormalEquations("normal equations produced a non-finite step");
        return w;
    }

    RadialGrid grid_;
    double beta_;
    SchemeConfig cfg_;
    CoreRegion core_;
    Eigen::MatrixXd B_, WB_, R_;
    Eigen::VectorXd weights_, ell_;
    Eigen::Index i0_ = 0;
    bool ell_zero_ = false;
    LsqSolver gram_;
};

/// Single HNCGN step with a freshly assembled workspace (convenience; the
/// iteration driver keeps one workspace for the whole run).
inline Tabulated hncgn_step(const Tabulated& u_k, const Tabulated& g_k, const Tabulated& g,
                            const StatePoint& state, const SchemeConfig& cfg, double p_k) {
    cfg.validate();
    HncgnWorkspace ws(g, state, cfg);
    return ws.step(u_k, g_k, g, p_k).u_next;
}

// ---------------------------------------------------------------------------
// iteration driver

struct ForwardResult {
    Tabulated g;
    double pressure = 0.0;
};

using ForwardOperator = std::function<ForwardResult(const Tabulated& u)>;

struct IterationRecord {
    int k = 0;
    Tabulated u;
    double data_fit = 0.0;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double pressure = std::numeric_limits<double>::quiet_NaN();
    double constraint_residual = std::numeric_limits<double>::quiet_NaN();
};

struct IterationHistory {
    std::vector<IterationRecord> records;
    std::string error;        ///< nonempty if a step or forward call failed
    int failed_iteration = -1;

    /// Keep-best-iterate policy: index of the smallest data fit.
    int best_index() const {
        if (records.empty()) throw NoRuns("empty iteration history");
        int best = 0;
        for (std::size_t i = 1; i < records.size(); ++i)
            if (records[i].data_fit < records[static_cast<std::size_t>(best)].data_fit)
                best = static_cast<int>(i);
        return best;
    }
};

/// Run the selected scheme from the potential of mean force: simulate
/// g_k = G(u_k), record diagnostics, stop on the data-fit tolerance or the
/// iteration budget. Every produced potential is tail-normalized and
/// core-extrapolated before the next forward call. Failures of the forward
/// operator or of a step are recorded in the history, not rethrown.
inline IterationHistory run_inversion(const Tabulated& g_target, const StatePoint& state,
                                      const SchemeConfig& cfg, const ForwardOperator& forward,
                                      const std::optional<Tabulated>& u_ref = std::nullopt) {
    cfg.validate();
    IterationHistory history;
    std::optional<OzContext> ctx;          // target context for IHNC/HNCN/PYV
    std::optional<HncgnWorkspace> hncgn;   // factored linearization for HNCGN
    Tabulated u{};
    try {
        switch (cfg.scheme) {
        case Scheme::IHNC:
        case Scheme::HNCN:
        case Scheme::PYV:
            ctx = make_oz_context(g_target, state, cfg.s_min);
            break;
        case Scheme::HNCGN:
            hncgn.emplace(g_target, state, cfg);
            break;
        default:
            break;
        }
        u = pmf_initial_guess(g_target, state.beta(), cfg.core_threshold);
    } catch (const Error& e) {
        history.error = e.what();
        history.failed_iteration = 0;
        return history;
    }

    double g0_fit = 0.0;
    for (int k = 0;; ++k) {
        ForwardResult fr;
        try {
            fr = forward(u);
        } catch (const Error& e) {
            history.error = e.what();
            history.failed_iteration = k;
            return history;
        }
        if (k == 0) {
            double dev = 0.0;
            for (std::size_t i = 0; i < g_target.values.size(); ++i)
                dev = std::max(dev, std::abs(fr.g.values[i] - g_target.values[i]));
            g0_fit = dev;
        }
        IterationRecord rec;
        rec.k = k;
        rec.u = u;
        rec.data_fit = data_fit(fr.g, g_target, g0_fit);
        if (u_ref) rec.epsilon = error_metric(u, *u_ref, g_target);
        rec.pressure = fr.pressure;
        history.records.push_back(std::move(rec));

        if (history.records.back().data_fit <= cfg.tol || k >= cfg.max_iter) break;

        try {
            switch (cfg.scheme) {
            case Scheme::IBI:
                u = ibi_step(u, fr.g, g_target, state.beta(), cfg.core_threshold);
                break;
            case Scheme::REL:
                u = relative_step(u, fr.g, g_target, state.beta(), cfg.core_threshold);
                break;
            case Scheme::IHNC:
                u = ihnc_step(*ctx, u, fr.g, g_target, cfg.core_threshold);
                break;
            case Scheme::HNCN:
                u = hncn_step(*ctx, u, fr.g, g_target, cfg.core_threshold);
                break;
            case Scheme::LWR:
                u = lwr_step(u, fr.g, g_target, state, cfg.core_threshold, cfg.s_min);
                break;
            case Scheme::PYV:
                u = pyv_step(*ctx, u, fr.g, g_target, cfg.core_threshold);
                break;
            case Scheme::HNCGN: {
                auto res = hncgn->step(u, fr.g, g_target, fr.pressure);
                history.records.back().constraint_residual = res.constraint_residual;
                u = std::move(res.u_next);
                break;
            }
            }
        } catch (const Error& e) {
            history.error = e.what();
            history.failed_iteration = k;
            return history;
        }
    }
    return history;
}

} // namespace rdfpot
