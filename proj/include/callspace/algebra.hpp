#pragma once

#include "callspace/curve.hpp"

namespace callspace {

// Concave conjugate  C^(p) = inf_{kappa >= 0} [ C(kappa) + p kappa ].
// Exact (knot-level) for grid curves, closed form F(F^{-1}(p)+y) for
// analytic curves.
HatCurve hat(const CallCurve& curve);

// Inverse transform  C(kappa) = max_{0<=p<=1} [ g(p) - p kappa ].
// Throws NotConcave if g fails the hat-curve invariants.
CallCurve unhat(const HatCurve& g);

// outer o inner; exact knot merge when both are grids.
HatCurve compose(const HatCurve& outer, const HatCurve& inner);

// Generalized inverse  inf { p >= 0 : g(p) >= q }.
double hatInverse(const HatCurve& g, double q);

// (C1 . C2)(kappa) = inf_{eta>0} [ C1(eta) + eta C2(kappa/eta) ],
// evaluated by bracketed golden-section search.  kappa = 0 gives 1.
double bulletDirect(const CallCurve& c1, const CallCurve& c2, double kappa);

// The binary operation through the conjugate isomorphism:
// unhat(hat(C1) o hat(C2)).  Exact for grid operands.
CallCurve bullet(const CallCurve& c1, const CallCurve& c2);

// Involution  C*(kappa) = 1 - kappa + kappa C(1/kappa); swaps the primal and
// dual representations.
CallCurve involute(const CallCurve& curve);

// Pointwise partial order on a merged sample grid.
bool leq(const CallCurve& c1, const CallCurve& c2);

} // namespace callspace
