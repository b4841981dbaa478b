#include "callspace/zonoid.hpp"

#include "callspace/algebra.hpp"
#include "callspace/errors.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace callspace {

namespace {

std::vector<double> mergedGrid(std::vector<double> ps, const HatCurve& h) {
    std::set<double> g(ps.begin(), ps.end());
    g.insert(0.0);
    g.insert(1.0);
    if (h.isGrid()) {
        for (double p : h.grid().ps) {
            g.insert(p);
            g.insert(1.0 - p);
        }
    }
    return {g.begin(), g.end()};
}

} // namespace

LiftZonoid liftZonoidFromCurve(const CallCurve& curve, std::vector<double> ps) {
    HatCurve h = hat(curve);
    LiftZonoid z;
    z.ps = mergedGrid(std::move(ps), h);
    z.mean = 1.0 - curve.cInf();
    z.lower.reserve(z.ps.size());
    z.upper.reserve(z.ps.size());
    for (double p : z.ps) {
        z.upper.push_back(z.mean - 1.0 + h(p));
        z.lower.push_back(1.0 - h(1.0 - p));
    }
    return z;
}

LiftZonoid liftZonoidFromQuantiles(const DiscreteDistribution& dist, std::vector<double> ps) {
    LiftZonoid z;
    std::set<double> grid(ps.begin(), ps.end());
    grid.insert(0.0);
    grid.insert(1.0);
    double cum = 0.0;
    for (double q : dist.probs) {
        cum += q;
        grid.insert(std::clamp(cum, 0.0, 1.0));
        grid.insert(std::clamp(1.0 - cum, 0.0, 1.0));
    }
    z.ps.assign(grid.begin(), grid.end());
    z.mean = dist.mean();
    // exact partial integrals of the descending (upper) and ascending (lower)
    // step quantile functions
    auto stepIntegral = [&](double p, bool descending) {
        double left = p, acc = 0.0;
        size_t n = dist.atoms.size();
        for (size_t j = 0; j < n && left > 0.0; ++j) {
            size_t idx = descending ? n - 1 - j : j;
            double take = std::min(left, dist.probs[idx]);
            acc += take * dist.atoms[idx];
            left -= take;
        }
        return acc;
    };
    z.upper.reserve(z.ps.size());
    z.lower.reserve(z.ps.size());
    for (double p : z.ps) {
        z.upper.push_back(stepIntegral(p, true));
        z.lower.push_back(stepIntegral(p, false));
    }
    return z;
}

bool contains(const LiftZonoid& z, double p, double q) {
    if (p < 0.0 || p > 1.0) return false;
    const double tol = 1e-12;
    double lo = detail::plEval(z.ps, z.lower, p);
    double hi = detail::plEval(z.ps, z.upper, p);
    return q >= lo - tol && q <= hi + tol;
}

bool zonoidLeq(const CallCurve& c1, const CallCurve& c2) {
    if (std::abs(c1.cInf()) > 1e-12 || std::abs(c2.cInf()) > 1e-12)
        throw NotInC1("zonoidLeq: both curves must have C(inf) = 0");
    std::vector<double> base;
    for (int i = 0; i <= 200; ++i) base.push_back(i / 200.0);
    LiftZonoid z1 = liftZonoidFromCurve(c1, base);
    LiftZonoid z2 = liftZonoidFromCurve(c2, base);
    std::set<double> grid(z1.ps.begin(), z1.ps.end());
    grid.insert(z2.ps.begin(), z2.ps.end());
    const double tol = 1e-10;
    for (double p : grid) {
        if (detail::plEval(z1.ps, z1.upper, p) > detail::plEval(z2.ps, z2.upper, p) + tol)
            return false;
        if (detail::plEval(z1.ps, z1.lower, p) < detail::plEval(z2.ps, z2.lower, p) - tol)
            return false;
    }
    return true;
}

} // namespace callspace
