#pragma once

namespace callspace {

// Global tolerance knobs.  Algebraic identities on piecewise-linear grids are
// held to `algebra`, root-finding in price space to `rootPrice`.  The algebra
// tolerance can be overridden with the CALLSPACE_TOL environment variable
// (read once, at first use).
struct Tolerances {
    double algebra = 1e-12;
    double rootPrice = 1e-8;
};

Tolerances& tolerances();

} // namespace callspace
