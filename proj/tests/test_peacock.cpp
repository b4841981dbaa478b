#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "callspace/errors.hpp"
#include "callspace/peacock.hpp"
#include "callspace/surface.hpp"

#include <cmath>
#include <random>

using namespace callspace;

namespace {

std::vector<double> kappaGrid() {
    std::vector<double> ks;
    for (int i = 0; i < 40; ++i) ks.push_back(0.1 * std::pow(100.0, i / 39.0));
    return ks;
}

} // namespace

TEST_CASE("convex order on analytic curves") {
    auto n = LogConcaveDensity::normal();
    CHECK(convexOrderLeq(CallCurve::analytic(n, 0.5), CallCurve::analytic(n, 1.0)));
    CHECK_FALSE(convexOrderLeq(CallCurve::analytic(n, 1.0), CallCurve::analytic(n, 0.5)));
    // same curve: the order is reflexive
    CHECK(convexOrderLeq(CallCurve::analytic(n, 0.7), CallCurve::analytic(n, 0.7)));
    // E is the minimum of the whole order
    CHECK(convexOrderLeq(CallCurve::identity(), CallCurve::analytic(n, 0.3)));
    // curves with mass at infinity in the dual are not comparable this way
    CHECK_THROWS_AS(convexOrderLeq(CallCurve::absorbing(), CallCurve::identity()), NotInC1);
    auto u = LogConcaveDensity::uniform();
    CHECK_THROWS_AS(
        convexOrderLeq(CallCurve::analytic(u, 0.2), CallCurve::analytic(u, 0.4)), NotInC1);
}

TEST_CASE("peacock families along a time grid") {
    std::vector<double> ts{0.1, 0.25, 0.5, 1.0, 2.0};
    PeacockFamily normalSqrt{LogConcaveDensity::normal(),
                             [](double t) { return std::sqrt(t); }, ts};
    CHECK(verifyPeacock(normalSqrt, kappaGrid()).pass);

    PeacockFamily gumbelLog{LogConcaveDensity::gumbel(),
                            [](double t) { return std::log1p(t); }, ts};
    CHECK(verifyPeacock(gumbelLog, kappaGrid()).pass);

    // a decreasing time change breaks the order
    PeacockFamily shrinking{LogConcaveDensity::normal(),
                            [](double t) { return 1.0 / (1.0 + t); }, ts};
    auto r = verifyPeacock(shrinking, kappaGrid());
    CHECK_FALSE(r.pass);
    CHECK(r.badT == 0.25); // first step down
}

TEST_CASE("gumbel primal sampler") {
    CHECK(gumbelPrimalSample(0.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    // y = log 2: exponent e^y - 1 = 1, so the sample is 2u
    CHECK(gumbelPrimalSample(std::log(2.0), 0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gumbelPrimalSample(std::log(2.0), 0.9) == doctest::Approx(1.8).epsilon(1e-14));
    // mean 1 for every y (martingale marginals): crude numeric integral
    for (double y : {0.25, 1.0}) {
        long double m = 0.0L;
        const int n = 2000000;
        for (int i = 0; i < n; ++i) m += gumbelPrimalSample(y, (i + 0.5) / double(n));
        CHECK(std::abs(double(m / n) - 1.0) < 1e-5);
    }
}

TEST_CASE("sampler law matches the gumbel surface price") {
    auto g = LogConcaveDensity::gumbel();
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int n = 200000;
    for (double y : {0.3, std::log(2.0)}) {
        std::vector<double> s(n);
        for (int i = 0; i < n; ++i) s[i] = gumbelPrimalSample(y, u01(rng));
        for (double k : {0.5, 1.0, 2.0}) {
            long double acc = 0.0L, acc2 = 0.0L;
            for (double v : s) {
                double x = 1.0 - std::min(v, k);
                acc += x;
                acc2 += (long double)x * x;
            }
            double mean = double(acc / n);
            double se = std::sqrt((double(acc2 / n) - mean * mean) / n);
            CHECK(std::abs(mean - surfacePrice(g, k, y)) < 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("martingale simulation: determinism and thread invariance") {
    std::vector<double> ts{0.25, 0.5, 1.0};
    auto a = gumbelMartingaleSim(ts, 20000, 42, 1);
    auto b = gumbelMartingaleSim(ts, 20000, 42, 4);
    REQUIRE(a.marginals.size() == 3);
    REQUIRE(a.marginals.size() == b.marginals.size());
    for (size_t i = 0; i < a.marginals.size(); ++i) {
        CHECK(a.marginals[i].mean == b.marginals[i].mean); // bit-identical
        CHECK(a.marginals[i].ks == b.marginals[i].ks);
    }
    REQUIRE(a.increments.size() == b.increments.size());
    for (size_t i = 0; i < a.increments.size(); ++i)
        CHECK(a.increments[i].statLinear == b.increments[i].statLinear);

    auto c = gumbelMartingaleSim(ts, 20000, 43, 1);
    CHECK(c.marginals[0].mean != a.marginals[0].mean); // the seed matters
}

TEST_CASE("martingale simulation: marginals and increments at moderate size") {
    std::vector<double> ts{0.25, 0.5, 1.0};
    auto r = gumbelMartingaleSim(ts, 100000, 7, 0);
    CHECK(r.nPaths == 100000);
    CHECK(r.pass);
    for (const auto& m : r.marginals) {
        CHECK(std::abs(m.mean - 1.0) < 3.0 * m.se);
        CHECK(m.ks < m.ksCritical);
        CHECK(m.pass);
    }
    REQUIRE(r.increments.size() == 2);
    for (const auto& inc : r.increments) {
        CHECK(inc.statConst < 3.0 * inc.seConst);
        CHECK(inc.statLinear < 3.0 * inc.seLinear);
        CHECK(inc.statIndicator < 3.0 * inc.seIndicator);
        CHECK(inc.pass);
    }
}
