#pragma once

#include "rdfpot/inversion.hpp"
#include "rdfpot/md.hpp"
#include "rdfpot/oz.hpp"

namespace rdfpot {

/// Deterministic forward operator G backed by the HNC integral-equation
/// solver; the pressure comes from the virial quadrature of (u, g).
struct HncForwardParams {
    double mix = 0.15;
    double tol = 1e-10;
    int max_iter = 100000;
    double s_min = kDefaultSMin;
};

inline ForwardOperator make_hnc_forward(const StatePoint& state,
                                        const HncForwardParams& params = {}) {
    return [state, params](const Tabulated& u) -> ForwardResult {
        Tabulated g = hnc_forward_solve(u, state, params.mix, params.tol, params.max_iter,
                                        params.s_min);
        const double p = virial_pressure_quadrature(u, g, state);
        return {std::move(g), p};
    };
}

/// Stochastic forward operator G backed by the built-in NVT engine; the
/// pressure is the virial average over the sampled frames.
inline ForwardOperator make_md_forward(const StatePoint& state, const MdParams& params) {
    return [state, params](const Tabulated& u) -> ForwardResult {
        MdResult res = run_nvt(u, state, params);
        return {std::move(res.g), res.pressure};
    };
}

} // namespace rdfpot
