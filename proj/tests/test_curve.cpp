#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "callspace/curve.hpp"
#include "callspace/errors.hpp"
#include "callspace/verify.hpp"
#include "oracle.hpp"

#include <random>

using namespace callspace;

namespace {
bool hasViolation(const std::vector<Violation>& vs, const std::string& name) {
    for (const auto& v : vs)
        if (v.invariant == name) return true;
    return false;
}
} // namespace

TEST_CASE("validate flags the broken invariants and passes good curves") {
    CHECK(validate(CallCurve::grid({0, 1, 2}, {1, 0.2, 0.1}, 0.1)).empty());
    auto vs = validate(CallCurve::grid({0, 1, 2}, {1, 0.1, 0.5}, 0.5));
    CHECK(hasViolation(vs, "nonincreasing"));
    CHECK(hasViolation(validate(CallCurve::grid({0, 1}, {0.9, 0.2}, 0.2)), "C(0)=1"));
    CHECK(hasViolation(validate(CallCurve::grid({0, 0.25, 2}, {1, 0.7, 0.5}, 0.5)), "slope >= -1"));
    CHECK(hasViolation(validate(CallCurve::grid({0, 1, 2}, {1, 0.9, 0.5}, 0.0)), "convex"));
    CHECK(validate(CallCurve::identity()).empty());
    CHECK(validate(CallCurve::absorbing()).empty());
    CHECK(validate(CallCurve::analytic(LogConcaveDensity::normal(), 1.0)).empty());
    CHECK(validate(CallCurve::analytic(LogConcaveDensity::laplace(), 0.7)).empty());
    CHECK(validate(CallCurve::analytic(LogConcaveDensity::uniform(), 0.4)).empty());
}

TEST_CASE("evaluation: specials, interpolation and the extrapolation tail") {
    CHECK(CallCurve::identity()(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(CallCurve::absorbing()(7.0) == 1.0);
    CallCurve g = CallCurve::grid({0, 1, 2}, {1, 0.2, 0.1}, 0.1);
    CHECK(g(1.5) == doctest::Approx(0.15).epsilon(1e-15));
    // final slope -0.1 continues until c_inf is hit at kappa = 2... already at
    // the limit value here, so constant beyond the last knot
    CHECK(g(2.0) == doctest::Approx(0.1));
    CHECK(g(50.0) == doctest::Approx(0.1));
    // a curve that still has to travel to c_inf
    CallCurve h = CallCurve::grid({0, 1}, {1, 0.5}, 0.25);
    CHECK(h(1.2) == doctest::Approx(0.4));
    CHECK(h(1.5) == doctest::Approx(0.25)); // reached the limit
    CHECK(h(9.0) == doctest::Approx(0.25));
}

TEST_CASE("right derivative conventions") {
    CallCurve e = CallCurve::identity();
    CHECK(e.rightDerivative(0.5) == -1.0);
    CHECK(e.rightDerivative(1.0) == 0.0); // right-continuous at the kink
    CHECK(CallCurve::absorbing().rightDerivative(3.0) == 0.0);
    CallCurve h = CallCurve::grid({0, 1}, {1, 0.5}, 0.25);
    CHECK(h.rightDerivative(1.2) == doctest::Approx(-0.5));
    CHECK(h.rightDerivative(2.0) == 0.0); // past the closing knot
}

TEST_CASE("primal survival matches the brute-force atom sum") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = randomDiscrete(rng);
        CallCurve c = curveOf(d);
        // off-atom strikes: exact match
        for (double k : {0.1234, 0.777, 1.3, 2.2}) {
            CHECK(primalSurvival(c, k) ==
                  doctest::Approx(oracle::discreteSurvival(d, k)).epsilon(1e-12));
        }
        // at atoms: right-continuous convention P(S > atom)
        for (double a : d.atoms)
            CHECK(primalSurvival(c, a) ==
                  doctest::Approx(oracle::discreteSurvival(d, a)).epsilon(1e-12));
    }
}

TEST_CASE("dual cdf examples and the defining identity") {
    CHECK(dualCdf(CallCurve::identity(), 2.0) == 0.0);
    CHECK(dualCdf(CallCurve::identity(), 0.5) == 1.0);
    CHECK(dualCdf(CallCurve::absorbing(), 1.0) == 1.0);
    // C(kappa) = P(S* < 1/kappa) - kappa P(S > kappa)
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        CallCurve c = randomGridCurve(rng);
        for (double k : {0.3, 0.9, 1.7}) {
            CHECK(c(k) ==
                  doctest::Approx(dualCdf(c, k) - k * primalSurvival(c, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("curve_of: exact piecewise-linear prices at the knots") {
    CallCurve e = curveOf(DiscreteDistribution({1.0}, {1.0}));
    for (double k : {0.0, 0.25, 1.0, 3.0})
        CHECK(e(k) == doctest::Approx(CallCurve::identity()(k)).epsilon(1e-15));

    CallCurve z = curveOf(DiscreteDistribution({0.0}, {1.0}));
    for (double k : {0.0, 1.0, 10.0}) CHECK(z(k) == 1.0);

    // two-atom case evaluated by hand: C(0.5) = 1 - E(S^0.5) = 0.5,
    // C(1.5) = 1 - E(S) = 0, c_inf = 0
    CallCurve c = curveOf(DiscreteDistribution({0.5, 1.5}, {0.5, 0.5}));
    CHECK(c(0.0) == 1.0);
    CHECK(c(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c(1.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.cInf() == doctest::Approx(0.0));

    CHECK_THROWS_AS(curveOf(DiscreteDistribution({2.0, 3.0}, {0.5, 0.5})), MeanExceedsOne);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = randomDiscrete(rng);
        CallCurve g = curveOf(d);
        CHECK(validate(g).empty());
        for (double k : {0.0, 0.21, 0.8, 1.9, 5.0})
            CHECK(g(k) == doctest::Approx(oracle::discretePrice(d, k)).epsilon(1e-13));
    }
}

TEST_CASE("class membership flags") {
    CHECK(isC1(CallCurve::identity()));
    CHECK(isCPlus(CallCurve::identity()));
    CHECK_FALSE(isC1(CallCurve::absorbing()));
    CallCurve n = CallCurve::analytic(LogConcaveDensity::normal(), 1.0);
    CHECK(isC1(n));
    CHECK(isCPlus(n));
    // bounded support: finite R kills the -1 slope at 0, finite L leaves
    // mass at infinity of the dual, so neither membership holds
    CallCurve u = CallCurve::analytic(LogConcaveDensity::uniform(), 0.5);
    CHECK_FALSE(isCPlus(u));
    CHECK_FALSE(isC1(u));
    // one-sided supports pick up exactly one of the two classes
    CHECK(isCPlus(CallCurve::analytic(LogConcaveDensity::exponential(), 0.5)));
    CHECK_FALSE(isC1(CallCurve::analytic(LogConcaveDensity::exponential(), 0.5)));
}

TEST_CASE("discrete distribution construction is validated") {
    CHECK_THROWS(DiscreteDistribution({1.0, 0.5}, {0.5, 0.5})); // unsorted
    CHECK_THROWS(DiscreteDistribution({-1.0}, {1.0}));          // negative atom
    CHECK_THROWS(DiscreteDistribution({1.0}, {0.9}));           // mass != 1
    CHECK_THROWS(DiscreteDistribution({0.5, 0.5}, {0.5, 0.5})); // duplicate atoms
}
