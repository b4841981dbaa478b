#pragma once

#include "callspace/curve.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace callspace {

struct CheckResult {
    std::string name;
    double deviation; // worst observed deviation (order checks use 0/1)
    double tolerance;
    bool pass;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass;
};

struct SuiteOptions {
    std::string family = "normal";
    double y1 = 1.0;
    double y2 = 1.0;
    std::vector<double> kappas; // defaults to a 50-point grid on [0.1, 10]
    int samples = 1000;
    std::uint64_t seed = 0;
    std::string yfun = "log1p";
    double yscale = 1.0;
    std::vector<double> ts; // defaults to {0.25, 0.5, 1, 2}
};

// name in {semigroup, involution, isomorphism, zonoid, peacock, inequality}
SuiteReport runSuite(const std::string& name, const SuiteOptions& opt);

// Random test-case generators shared by the suites and the test binaries.
DiscreteDistribution randomDiscrete(std::mt19937_64& rng, int maxAtoms = 8);
CallCurve randomGridCurve(std::mt19937_64& rng);

} // namespace callspace
