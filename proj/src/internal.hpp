#pragma once

#include "callspace/curve.hpp"

#include <utility>
#include <vector>

namespace callspace::detail {

// Grid curve with the extrapolation tail materialised: the final knot value
// equals the effective limit C(inf) and the curve is constant afterwards.
struct ClosedKnots {
    std::vector<double> k;
    std::vector<double> v;
};

ClosedKnots closedKnots(const CallCurve::Grid& g);

// Piecewise-linear evaluation with constant extension outside the grid.
double plEval(const std::vector<double>& xs, const std::vector<double>& ys, double x);

// Golden-section maximisation of a concave function; returns (argmax, max).
std::pair<double, double> concaveMaximize(const std::function<double(double)>& f, double lo,
                                          double hi);

// Default strike sample grid for curves without knots: 0, a log-spaced sweep
// and a linear sweep, deduplicated ascending.
const std::vector<double>& sampleKappas();

// Knots for grid/special curves, sampleKappas() otherwise.
std::vector<double> evaluationKappas(const CallCurve& c);

// Quadrature route for the log-concave surface price; always available, used
// as the cross-check against the closed form.
double surfacePriceQuadrature(const LogConcaveDensity& f, double kappa, double y);

// Throws NotConcave unless the grid is a valid conjugate: domain [0,1],
// g(1) = 1, nonnegative, nondecreasing, concave.
void checkHatGrid(const HatCurve::Grid& g);

} // namespace callspace::detail
