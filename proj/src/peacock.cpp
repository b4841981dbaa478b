#include "callspace/peacock.hpp"

#include "callspace/algebra.hpp"
#include "callspace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace callspace {

bool convexOrderLeq(const CallCurve& c1, const CallCurve& c2) {
    if (!isC1(c1) || !isC1(c2))
        throw NotInC1("convexOrderLeq: both curves must have C(inf) = 0");
    return leq(c1, c2);
}

PeacockResult verifyPeacock(const PeacockFamily& fam, const std::vector<double>& kappas) {
    PeacockResult res;
    const double tol = 1e-10;
    for (size_t i = 0; i + 1 < fam.tGrid.size(); ++i) {
        CallCurve a = CallCurve::analytic(fam.density, fam.Y(fam.tGrid[i]));
        CallCurve b = CallCurve::analytic(fam.density, fam.Y(fam.tGrid[i + 1]));
        if (!isC1(a) || !isC1(b))
            throw NotInC1("verifyPeacock: family curves must have C(inf) = 0");
        for (double k : kappas) {
            if (a(k) > b(k) + tol) {
                res.pass = false;
                res.badT = fam.tGrid[i + 1];
                res.badKappa = k;
                return res;
            }
        }
    }
    return res;
}

double gumbelPrimalSample(double y, double u) {
    // e^y u^{e^y - 1}, computed in log space to survive small u and large y
    return std::exp(y + std::expm1(y) * std::log(u));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic reduction order regardless of the thread count.
double pairwiseSum(const double* v, size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    size_t h = n / 2;
    return pairwiseSum(v, h) + pairwiseSum(v + h, n - h);
}

double pairwiseSum(const std::vector<double>& v) { return pairwiseSum(v.data(), v.size()); }

struct MeanSe {
    double mean;
    double se;
};

MeanSe meanSe(const std::vector<double>& v) {
    double n = double(v.size());
    double m = pairwiseSum(v) / n;
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    double var = pairwiseSum(sq) / (n - 1.0);
    return {m, std::sqrt(var / n)};
}

double ksTwoSample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

void runPaths(long long begin, long long end, std::uint64_t seed, const std::vector<double>& ts,
              std::vector<std::vector<double>>& sim, std::vector<std::vector<double>>& ref) {
    const size_t m = ts.size();
    for (long long path = begin; path < end; ++path) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(std::uint64_t(path))));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double z1 = 0.0, z2 = 0.0, t = 0.0;
        for (size_t k = 0; k < m; ++k) {
            double dt = ts[k] - t;
            if (dt > 0.0) {
                double decay = std::exp(0.5 * dt);
                double sd = std::sqrt(0.5 * std::expm1(dt));
                z1 = decay * z1 + sd * gauss(rng);
                z2 = decay * z2 + sd * gauss(rng);
                t = ts[k];
            }
            sim[k][size_t(path)] = std::exp(t - z1 * z1 - z2 * z2);
            double u = unif(rng);
            if (u <= 0.0) u = std::numeric_limits<double>::min();
            ref[k][size_t(path)] = gumbelPrimalSample(ts[k], u);
        }
    }
}

} // namespace

McReport gumbelMartingaleSim(const std::vector<double>& tGrid, long long nPaths, std::uint64_t seed,
                             unsigned threads) {
    if (nPaths < 2) throw Error("gumbelMartingaleSim: need at least 2 paths");
    for (size_t i = 0; i < tGrid.size(); ++i) {
        if (tGrid[i] < 0.0) throw Error("gumbelMartingaleSim: times must be nonnegative");
        if (i > 0 && !(tGrid[i] > tGrid[i - 1]))
            throw Error("gumbelMartingaleSim: times must be increasing");
    }
    const size_t m = tGrid.size();
    std::vector<std::vector<double>> sim(m, std::vector<double>(size_t(nPaths)));
    std::vector<std::vector<double>> ref(m, std::vector<double>(size_t(nPaths)));

    unsigned nThreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nThreads = std::min<unsigned>(nThreads, 64);
    if (nThreads <= 1) {
        runPaths(0, nPaths, seed, tGrid, sim, ref);
    } else {
        std::vector<std::thread> pool;
        long long chunk = (nPaths + nThreads - 1) / nThreads;
        for (unsigned w = 0; w < nThreads; ++w) {
            long long b = w * chunk, e = std::min<long long>(nPaths, b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e] { runPaths(b, e, seed, tGrid, sim, ref); });
        }
        for (auto& th : pool) th.join();
    }

    McReport rep;
    rep.nPaths = nPaths;
    const double ksCrit = 1.628 * std::sqrt(2.0 / double(nPaths));
    bool allPass = true;
    for (size_t k = 0; k < m; ++k) {
        auto [mean, se] = meanSe(sim[k]);
        double ks = tGrid[k] == 0.0 ? 0.0 : ksTwoSample(sim[k], ref[k]);
        bool pass = std::abs(mean - 1.0) < 3.0 * std::max(se, 1e-300) && ks < ksCrit;
        rep.marginals.push_back({tGrid[k], mean, se, ks, ksCrit, pass});
        allPass = allPass && pass;
    }
    for (size_t k = 0; k + 1 < m; ++k) {
        const auto& s1 = sim[k];
        const auto& s2 = sim[k + 1];
        std::vector<double> sorted = s1;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        double median = sorted[sorted.size() / 2];
        std::vector<double> xc(s1.size()), xl(s1.size()), xi(s1.size());
        for (size_t i = 0; i < s1.size(); ++i) {
            double inc = s2[i] - s1[i];
            xc[i] = inc;
            xl[i] = inc * s1[i];
            xi[i] = s1[i] > median ? inc : 0.0;
        }
        auto [mc, sc] = meanSe(xc);
        auto [ml, sl] = meanSe(xl);
        auto [mi, si] = meanSe(xi);
        bool pass = std::abs(mc) < 3.0 * sc && std::abs(ml) < 3.0 * sl && std::abs(mi) < 3.0 * si;
        rep.increments.push_back(
            {tGrid[k], tGrid[k + 1], std::abs(mc), sc, std::abs(ml), sl, std::abs(mi), si, pass});
        allPass = allPass && pass;
    }
    rep.pass = allPass;
    return rep;
}

} // namespace callspace
