#include "callspace/verify.hpp"

#include "callspace/algebra.hpp"
#include "callspace/blackscholes.hpp"
#include "callspace/errors.hpp"
#include "callspace/io.hpp"
#include "callspace/normal.hpp"
#include "callspace/peacock.hpp"
#include "callspace/surface.hpp"
#include "callspace/zonoid.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace callspace {

namespace {

std::vector<double> defaultKappas() { return parseGridSpec("0.1:10:50"); }

std::vector<double> pGrid() {
    std::vector<double> ps;
    for (int i = 1; i < 100; ++i) ps.push_back(i / 100.0);
    return ps;
}

} // namespace

DiscreteDistribution randomDiscrete(std::mt19937_64& rng, int maxAtoms) {
    std::uniform_int_distribution<int> nDist(1, maxAtoms);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    for (;;) {
        int n = nDist(rng);
        std::set<double> atomSet;
        // include a zero atom sometimes to exercise c_inf and slope corners
        if (n > 1 && unif(rng) < 0.3) atomSet.insert(0.0);
        while (int(atomSet.size()) < n) atomSet.insert(2.5 * unif(rng));
        std::vector<double> atoms(atomSet.begin(), atomSet.end());
        std::vector<double> probs(atoms.size());
        double total = 0.0;
        for (auto& p : probs) total += (p = expo(rng) + 1e-3);
        for (auto& p : probs) p /= total;
        double mean = 0.0;
        for (size_t i = 0; i < atoms.size(); ++i) mean += atoms[i] * probs[i];
        if (mean > 1.0) {
            double shrink = (0.2 + 0.8 * unif(rng)) / mean;
            for (auto& a : atoms) a *= shrink;
        }
        // rescaling can collapse distinct atoms; retry if it did
        bool ok = true;
        for (size_t i = 1; i < atoms.size(); ++i)
            if (!(atoms[i] > atoms[i - 1] + 1e-12)) ok = false;
        if (ok) return DiscreteDistribution(std::move(atoms), std::move(probs));
    }
}

CallCurve randomGridCurve(std::mt19937_64& rng) { return curveOf(randomDiscrete(rng, 8)); }

namespace {

SuiteReport semigroupSuite(const SuiteOptions& opt) {
    SuiteReport rep{"semigroup", {}, true};
    auto kappas = opt.kappas.empty() ? defaultKappas() : opt.kappas;
    auto f = LogConcaveDensity::byName(opt.family);
    CallCurve composed = bullet(CallCurve::analytic(f, opt.y1), CallCurve::analytic(f, opt.y2));
    double dev = 0.0;
    for (double k : kappas)
        dev = std::max(dev, std::abs(composed(k) - surfacePrice(f, k, opt.y1 + opt.y2)));
    rep.checks.push_back({"bullet equals flat surface at y1+y2", dev, 1e-8, dev < 1e-8});
    rep.pass = rep.checks.back().pass;
    return rep;
}

SuiteReport involutionSuite(const SuiteOptions& opt) {
    SuiteReport rep{"involution", {}, true};
    std::mt19937_64 rng(opt.seed);
    double devInv = 0.0;
    for (int s = 0; s < std::max(1, opt.samples / 10); ++s) {
        CallCurve c = randomGridCurve(rng);
        CallCurve cc = involute(involute(c));
        for (double k : detail::evaluationKappas(c)) devInv = std::max(devInv, std::abs(cc(k) - c(k)));
    }
    rep.checks.push_back({"involution is an involution", devInv, 1e-12, devInv < 1e-12});

    // put-call symmetry of the normal surface
    auto f = LogConcaveDensity::normal();
    CallCurve bsInv = involute(CallCurve::analytic(f, opt.y1));
    double devBs = 0.0;
    for (double k : (opt.kappas.empty() ? defaultKappas() : opt.kappas))
        devBs = std::max(devBs, std::abs(bsInv(k) - bs::callPrice(k, opt.y1)));
    rep.checks.push_back({"normal surface is self-dual", devBs, 1e-10, devBs < 1e-10});

    // anti-homomorphism on random grid pairs
    double devAnti = 0.0;
    for (int s = 0; s < std::max(1, opt.samples / 20); ++s) {
        CallCurve c1 = randomGridCurve(rng), c2 = randomGridCurve(rng);
        CallCurve lhs = involute(bullet(c1, c2));
        CallCurve rhs = bullet(involute(c2), involute(c1));
        for (double k : detail::evaluationKappas(lhs))
            devAnti = std::max(devAnti, std::abs(lhs(k) - rhs(k)));
    }
    rep.checks.push_back({"reverses the binary operation", devAnti, 1e-8, devAnti < 1e-8});
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

SuiteReport isomorphismSuite(const SuiteOptions& opt) {
    SuiteReport rep{"isomorphism", {}, true};
    std::mt19937_64 rng(opt.seed);
    double devRound = 0.0, devIso = 0.0;
    for (int s = 0; s < std::max(1, opt.samples / 10); ++s) {
        CallCurve c1 = randomGridCurve(rng), c2 = randomGridCurve(rng);
        CallCurve rt = unhat(hat(c1));
        for (double k : detail::evaluationKappas(c1)) devRound = std::max(devRound, std::abs(rt(k) - c1(k)));
        HatCurve lhs = hat(bullet(c1, c2));
        HatCurve rhs = compose(hat(c1), hat(c2));
        for (double p : pGrid()) devIso = std::max(devIso, std::abs(lhs(p) - rhs(p)));
    }
    rep.checks.push_back({"conjugate roundtrip", devRound, 1e-12, devRound < 1e-12});
    rep.checks.push_back({"conjugate turns bullet into composition", devIso, 1e-8, devIso < 1e-8});
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

SuiteReport zonoidSuite(const SuiteOptions& opt) {
    SuiteReport rep{"zonoid", {}, true};
    std::mt19937_64 rng(opt.seed);
    auto ps = pGrid();
    double devOracle = 0.0;
    for (int s = 0; s < std::max(1, opt.samples / 2); ++s) {
        auto d = randomDiscrete(rng, 10);
        LiftZonoid a = liftZonoidFromCurve(curveOf(d), ps);
        LiftZonoid b = liftZonoidFromQuantiles(d, ps);
        for (double p : ps) {
            devOracle = std::max(devOracle, std::abs(detail::plEval(a.ps, a.upper, p) -
                                                     detail::plEval(b.ps, b.upper, p)));
            devOracle = std::max(devOracle, std::abs(detail::plEval(a.ps, a.lower, p) -
                                                     detail::plEval(b.ps, b.lower, p)));
        }
    }
    rep.checks.push_back({"curve and quantile boundaries agree", devOracle, 1e-10,
                          devOracle < 1e-10});

    int disagreements = 0;
    for (int s = 0; s < std::max(1, opt.samples / 10); ++s) {
        auto d1 = randomDiscrete(rng, 6), d2 = randomDiscrete(rng, 6);
        // convex order needs matching means; rescale to mean 1 so both are in
        // the C(inf)=0 class
        auto rescale = [](DiscreteDistribution d) {
            double m = d.mean();
            if (!(m > 1e-9)) return DiscreteDistribution({1.0}, {1.0});
            for (auto& a : d.atoms) a /= m;
            return DiscreteDistribution(d.atoms, d.probs);
        };
        CallCurve c1 = curveOf(rescale(d1)), c2 = curveOf(rescale(d2));
        if (zonoidLeq(c1, c2) != convexOrderLeq(c1, c2)) ++disagreements;
    }
    rep.checks.push_back({"zonoid order matches convex order", double(disagreements), 0.5,
                          disagreements == 0});
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

SuiteReport peacockSuite(const SuiteOptions& opt) {
    SuiteReport rep{"peacock", {}, true};
    PeacockFamily fam{LogConcaveDensity::byName(opt.family), timeChange(opt.yfun, opt.yscale),
                      opt.ts.empty() ? std::vector<double>{0.25, 0.5, 1.0, 2.0} : opt.ts};
    auto res = verifyPeacock(fam, opt.kappas.empty() ? defaultKappas() : opt.kappas);
    rep.checks.push_back({"family increases in convex order", res.pass ? 0.0 : 1.0, 0.5, res.pass});
    rep.pass = res.pass;
    return rep;
}

SuiteReport inequalitySuite(const SuiteOptions& opt) {
    SuiteReport rep{"inequality", {}, true};
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto logUniform = [&](double lo, double hi) {
        return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unif(rng));
    };
    double minGap = 0.0, maxEq = 0.0, sifinWorst = 0.0, sifinEq = 0.0;
    for (int s = 0; s < std::max(1, opt.samples); ++s) {
        double k1 = logUniform(0.05, 20.0), k2 = logUniform(0.05, 20.0);
        double y1 = 0.05 + 4.95 * unif(rng), y2 = 0.05 + 4.95 * unif(rng);
        minGap = std::min(minGap, bs::subadditivityGap(k1, k2, y1, y2).gap);
        // enforce the equality condition d(k1,y1) = d(k2,y2) + y2 by choosing k1
        double k1eq = std::exp(-y1 * (bs::dMinus(k2, y2) + y2) - 0.5 * y1 * y1);
        if (k1eq > 1e-12 && std::isfinite(k1eq))
            maxEq = std::max(maxEq, std::abs(bs::subadditivityGap(k1eq, k2, y1, y2).gap));
        // tangent lower bound and its optimal-p equality
        double p = 0.001 + 0.998 * unif(rng);
        auto bound = bs::tangentLowerBound(k1, y1, p);
        sifinWorst = std::max(sifinWorst, bound.value - bs::callPrice(k1, y1));
        double pStar = normal::cdf(bs::dMinus(k1, y1));
        if (pStar > 1e-12 && pStar < 1.0 - 1e-12) {
            auto tight = bs::tangentLowerBound(k1, y1, pStar);
            sifinEq = std::max(sifinEq, std::abs(tight.value - bs::callPrice(k1, y1)));
        }
    }
    rep.checks.push_back({"subadditivity gap is nonnegative", -minGap, 1e-12, -minGap < 1e-12});
    rep.checks.push_back({"gap vanishes under the equality condition", maxEq, 1e-8, maxEq < 1e-8});
    rep.checks.push_back({"tangent bound never exceeds the price", sifinWorst, 1e-12,
                          sifinWorst < 1e-12});
    rep.checks.push_back({"tangent bound is tight at the optimal slope", sifinEq, 1e-10,
                          sifinEq < 1e-10});
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

} // namespace

SuiteReport runSuite(const std::string& name, const SuiteOptions& opt) {
    if (name == "semigroup") return semigroupSuite(opt);
    if (name == "involution") return involutionSuite(opt);
    if (name == "isomorphism") return isomorphismSuite(opt);
    if (name == "zonoid") return zonoidSuite(opt);
    if (name == "peacock") return peacockSuite(opt);
    if (name == "inequality") return inequalitySuite(opt);
    throw Error("unknown verification suite: " + name);
}

} // namespace callspace
