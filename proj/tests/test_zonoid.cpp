#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "callspace/algebra.hpp"
#include "callspace/errors.hpp"
#include "callspace/peacock.hpp"
#include "callspace/verify.hpp"
#include "callspace/zonoid.hpp"

#include <cmath>
#include <random>

using namespace callspace;

namespace {

std::vector<double> defaultPs() {
    std::vector<double> ps;
    for (int i = 0; i <= 40; ++i) ps.push_back(i / 40.0);
    return ps;
}

double boundaryAt(const std::vector<double>& ps, const std::vector<double>& vs, double p) {
    for (size_t i = 0; i < ps.size(); ++i)
        if (std::abs(ps[i] - p) < 1e-15) return vs[i];
    REQUIRE(false);
    return 0.0;
}

} // namespace

TEST_CASE("special elements: diagonal and zero segment") {
    auto ze = liftZonoidFromCurve(CallCurve::identity(), defaultPs());
    CHECK(ze.mean == doctest::Approx(1.0));
    for (size_t i = 0; i < ze.ps.size(); ++i) {
        CHECK(std::abs(ze.upper[i] - ze.ps[i]) < 1e-14);
        CHECK(std::abs(ze.lower[i] - ze.ps[i]) < 1e-14);
    }
    auto zz = liftZonoidFromCurve(CallCurve::absorbing(), defaultPs());
    CHECK(zz.mean == doctest::Approx(0.0));
    for (size_t i = 0; i < zz.ps.size(); ++i) {
        CHECK(std::abs(zz.upper[i]) < 1e-14);
        CHECK(std::abs(zz.lower[i]) < 1e-14);
    }
}

TEST_CASE("two-atom boundaries by hand") {
    DiscreteDistribution d({0.5, 1.5}, {0.5, 0.5});
    auto z = liftZonoidFromCurve(curveOf(d), defaultPs());
    // best half of the mass is the 1.5 atom: E[S 1{S=1.5}] = 0.75
    CHECK(boundaryAt(z.ps, z.upper, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(boundaryAt(z.ps, z.lower, 0.5) == doctest::Approx(0.25).epsilon(1e-12));

    DiscreteDistribution d02({0.0, 2.0}, {0.5, 0.5});
    auto z2 = liftZonoidFromQuantiles(d02, defaultPs());
    CHECK(boundaryAt(z2.ps, z2.upper, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(boundaryAt(z2.ps, z2.upper, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(boundaryAt(z2.ps, z2.lower, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("containment with interpolation") {
    auto ze = liftZonoidFromCurve(CallCurve::identity(), defaultPs());
    CHECK(contains(ze, 0.5, 0.5));
    CHECK_FALSE(contains(ze, 0.5, 0.6));
    auto z = liftZonoidFromCurve(curveOf(DiscreteDistribution({0.5, 1.5}, {0.5, 0.5})),
                                 defaultPs());
    CHECK(contains(z, 0.5, 0.74));
    CHECK(contains(z, 0.5, 0.75));
    CHECK_FALSE(contains(z, 0.5, 0.76));
    CHECK(contains(z, 0.0, 0.0));
    CHECK(contains(z, 1.0, z.mean));
    CHECK_FALSE(contains(z, 1.0, z.mean - 0.01));
}

TEST_CASE("curve route agrees with the quantile-integral oracle") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 500; ++trial) {
        auto d = randomDiscrete(rng);
        auto a = liftZonoidFromCurve(curveOf(d), defaultPs());
        auto b = liftZonoidFromQuantiles(d, defaultPs());
        // both boundaries are piecewise linear with all kinks included in
        // their own grids, so cross-interpolation is exact
        auto interp = [](const std::vector<double>& xs, const std::vector<double>& ys, double x) {
            size_t i = size_t(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            if (i == 0) return ys.front();
            if (i == xs.size()) return ys.back();
            double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        };
        for (double p : a.ps) {
            CHECK(std::abs(interp(a.ps, a.upper, p) - interp(b.ps, b.upper, p)) < 1e-10);
            CHECK(std::abs(interp(a.ps, a.lower, p) - interp(b.ps, b.lower, p)) < 1e-10);
        }
        for (double p : b.ps) {
            CHECK(std::abs(interp(a.ps, a.upper, p) - interp(b.ps, b.upper, p)) < 1e-10);
            CHECK(std::abs(interp(a.ps, a.lower, p) - interp(b.ps, b.lower, p)) < 1e-10);
        }
    }
}

TEST_CASE("boundary symmetry and shape invariants") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = randomDiscrete(rng);
        auto z = liftZonoidFromCurve(curveOf(d), defaultPs());
        CHECK(std::abs(z.lower.front()) < 1e-12);
        CHECK(std::abs(z.upper.front()) < 1e-12);
        CHECK(std::abs(z.lower.back() - z.mean) < 1e-12);
        CHECK(std::abs(z.upper.back() - z.mean) < 1e-12);
        for (size_t i = 0; i < z.ps.size(); ++i) {
            CHECK(z.lower[i] <= z.upper[i] + 1e-12);
            // lower(p) = mean - upper(1-p); the grid is reflection-closed
            size_t j = z.ps.size() - 1 - i;
            if (std::abs(z.ps[i] + z.ps[j] - 1.0) < 1e-14)
                CHECK(std::abs(z.lower[i] - (z.mean - z.upper[j])) < 1e-10);
        }
    }
}

TEST_CASE("zonoid order is the convex order") {
    auto n = LogConcaveDensity::normal();
    CHECK(zonoidLeq(CallCurve::identity(), CallCurve::analytic(n, 1.0)));
    CHECK(zonoidLeq(CallCurve::analytic(n, 1.0), CallCurve::analytic(n, 1.0)));
    CHECK_FALSE(zonoidLeq(CallCurve::analytic(n, 1.0), CallCurve::identity()));
    CHECK_THROWS_AS(zonoidLeq(CallCurve::absorbing(), CallCurve::identity()), NotInC1);

    std::mt19937_64 rng(47);
    int comparable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        // rescale both to mean 1 so nontrivial comparable pairs actually occur
        auto mk = [&] {
            for (;;) {
                auto d = randomDiscrete(rng);
                double m = 0.0;
                for (size_t i = 0; i < d.atoms.size(); ++i) m += d.atoms[i] * d.probs[i];
                if (m < 1e-6) continue;
                std::vector<double> atoms;
                for (double a : d.atoms) atoms.push_back(a / m);
                return curveOf(DiscreteDistribution(atoms, d.probs));
            }
        };
        CallCurve c1 = mk(), c2 = mk();
        bool z12 = zonoidLeq(c1, c2);
        CHECK(z12 == convexOrderLeq(c1, c2));
        CHECK(zonoidLeq(c2, c1) == convexOrderLeq(c2, c1));
        if (z12) ++comparable;
        // means agree, so c1 is always below the bullet extension
        CHECK(zonoidLeq(c1, bullet(c1, c2)) == convexOrderLeq(c1, bullet(c1, c2)));
    }
    CHECK(comparable < 100); // the order is partial, not total
}
