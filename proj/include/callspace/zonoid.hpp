#pragma once

#include "callspace/curve.hpp"

#include <vector>

namespace callspace {

// Lift zonoid of a nonnegative integrable random variable, represented by its
// lower/upper boundary curves on a shared probability grid.
struct LiftZonoid {
    std::vector<double> ps;
    std::vector<double> lower; // convex in p
    std::vector<double> upper; // concave in p
    double mean;
};

// Boundaries from the conjugate curve: upper(p) = mean - 1 + hat(C)(p),
// lower(p) = 1 - hat(C)(1-p).  The grid is the union of `ps` with the
// conjugate knots (and their reflections) when available.
LiftZonoid liftZonoidFromCurve(const CallCurve& curve, std::vector<double> ps);

// Independent construction by exact integrals of the descending step quantile
// function of a finite distribution.
LiftZonoid liftZonoidFromQuantiles(const DiscreteDistribution& dist, std::vector<double> ps);

// Membership with piecewise-linear interpolation between grid points.
bool contains(const LiftZonoid& z, double p, double q);

// Zonoid containment order; equivalent to the convex order of the primal
// representations.  Throws NotInC1 when either curve has C(inf) != 0.
bool zonoidLeq(const CallCurve& c1, const CallCurve& c2);

} // namespace callspace
