#pragma once

#include "callspace/curve.hpp"
#include "callspace/density.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace callspace {

// A one-parameter family of analytic curves C_f(., Y(t)) along an increasing
// time grid.
struct PeacockFamily {
    LogConcaveDensity density;
    std::function<double(double)> Y; // nondecreasing time change
    std::vector<double> tGrid;       // increasing
};

// Pointwise price dominance, which for curves with C(inf) = 0 is exactly the
// convex order of the primal representations.  Throws NotInC1 otherwise.
bool convexOrderLeq(const CallCurve& c1, const CallCurve& c2);

struct PeacockResult {
    bool pass = true;
    double badT = 0.0;     // first violating time (valid when !pass)
    double badKappa = 0.0; // first violating strike
};

// Checks that the family is increasing in the convex order along tGrid.
PeacockResult verifyPeacock(const PeacockFamily& fam, const std::vector<double>& kappas);

// Primal representation of the Gumbel surface: e^y u^{e^y - 1} for u ~ U(0,1).
double gumbelPrimalSample(double y, double u);

struct McReport {
    struct Marginal {
        double t;
        double mean;
        double se; // standard error of the mean
        double ks; // two-sample KS statistic against the primal sampler
        double ksCritical;
        bool pass;
    };
    struct Increment {
        double t1, t2;
        // |sample mean of (S_{t2}-S_{t1}) g(S_{t1})| per test function g
        double statConst, seConst;
        double statLinear, seLinear;
        double statIndicator, seIndicator;
        bool pass;
    };
    long long nPaths = 0;
    std::vector<Marginal> marginals;
    std::vector<Increment> increments;
    bool pass = false;
};

// Exact-transition simulation of S_t = e^{t - |Z_t|^2} for the 2-d
// Ornstein-Uhlenbeck-type process; per-path deterministic substreams so the
// report is independent of the thread count.
McReport gumbelMartingaleSim(const std::vector<double>& tGrid, long long nPaths, std::uint64_t seed,
                             unsigned threads = 0);

} // namespace callspace
