#pragma once

// Umbrella header: pair-potential reconstruction from radial distribution
// functions via generalized Newton schemes, with deterministic (HNC) and
// stochastic (MD) forward operators.

#include "rdfpot/errors.hpp"
#include "rdfpot/forward.hpp"
#include "rdfpot/fourier.hpp"
#include "rdfpot/grid.hpp"
#include "rdfpot/inversion.hpp"
#include "rdfpot/io.hpp"
#include "rdfpot/md.hpp"
#include "rdfpot/oz.hpp"
#include "rdfpot/spline.hpp"
#include "rdfpot/state.hpp"
#include "rdfpot/thermo.hpp"
