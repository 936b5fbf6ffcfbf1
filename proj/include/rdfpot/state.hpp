#pragma once

#include "rdfpot/errors.hpp"

namespace rdfpot {

/// Thermodynamic state point of a homogeneous one-component fluid.
///
/// Reduced units (kB = 1) are the default; runs in physical units carry an
/// explicit Boltzmann constant so that beta = 1/(kB*T) stays consistent.
struct StatePoint {
    double rho0 = 0.0; ///< number density (particles per volume)
    double T = 0.0;    ///< temperature
    int N = 0;         ///< particle count (used by the MD forward operator)
    double kB = 1.0;

    double beta() const { return 1.0 / (kB * T); }

    void validate_thermo() const {
        if (!(T > 0.0)) throw ConfigError("temperature must be positive");
        if (rho0 < 0.0) throw ConfigError("density must be nonnegative");
        if (!(kB > 0.0)) throw ConfigError("kB must be positive");
    }

    void validate_md() const {
        validate_thermo();
        if (!(rho0 > 0.0)) throw ConfigError("MD requires positive density");
        if (N < 2) throw ConfigError("MD requires at least two particles");
    }
};

} // namespace rdfpot
