#pragma once

#include <stdexcept>
#include <string>

namespace rdfpot {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// RDF data is unusable: the core region swallows the whole usable range.
struct DegenerateRdf : Error {
    explicit DegenerateRdf(const std::string& what) : Error(what) {}
};

/// Power-law fit of the core region failed (too few points, nonpositive
/// values in the fit window, or a nonpositive exponent).
struct CoreFitFailure : Error {
    explicit CoreFitFailure(const std::string& what) : Error(what) {}
};

/// Structure factor dropped to or below the positivity threshold.
struct SingularStructureFactor : Error {
    explicit SingularStructureFactor(const std::string& what) : Error(what) {}
};

/// Fixed-point iteration exhausted its budget.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

/// Requested RDF range exceeds half the simulation box.
struct RdfRangeExceedsBox : Error {
    explicit RdfRangeExceedsBox(const std::string& what) : Error(what) {}
};

/// Kinetic energy exceeded the sanity bound (bad potential or timestep).
struct BlowUp : Error {
    explicit BlowUp(const std::string& what) : Error(what) {}
};

/// Cavity function underflowed at a node needed for the update.
struct CavityUnderflow : Error {
    explicit CavityUnderflow(const std::string& what) : Error(what) {}
};

/// Reduced Gram matrix numerically singular even after regularization.
struct SingularNormalEquations : Error {
    explicit SingularNormalEquations(const std::string& what) : Error(what) {}
};

/// Pressure constraint cannot be satisfied (zero constraint vector).
struct ConstraintInfeasible : Error {
    explicit ConstraintInfeasible(const std::string& what) : Error(what) {}
};

/// Malformed input file; carries a 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& what, int line_number)
        : Error(what + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
    int line;
};

/// Invalid or inconsistent run configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A run directory holds no usable iteration records.
struct NoRuns : Error {
    explicit NoRuns(const std::string& what) : Error(what) {}
};

} // namespace rdfpot
