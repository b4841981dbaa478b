#include "callspace/surface.hpp"

#include "callspace/blackscholes.hpp"
#include "callspace/errors.hpp"
#include "internal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace callspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double integrate(const std::function<double(double)>& g, double a, double b,
                 double tol = 1e-13) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    double v = GK::integrate(g, a, b, 12, tol, &err);
    if (!std::isfinite(v)) throw QuadratureFailure("quadrature returned a non-finite value");
    return v;
}

// accuracy target for the generator-reconstruction integrals; the public
// contract for reconstructed densities is 1e-6
constexpr double kReconTol = 1e-9;

} // namespace

namespace detail {

// 1 - integral of min(f(z+y), kappa f(z)), split at log-density kinks and at
// crossing points of the two integrands.
double surfacePriceQuadrature(const LogConcaveDensity& f, double kappa, double y) {
    const double eps = 1e-15;
    double qLo = f.quantile(eps), qHi = f.quantile(1.0 - eps);
    double A = std::min(qLo, qLo - y);
    double B = std::max(qHi, qHi - y);
    double sl = f.supportLower(), su = f.supportUpper();
    A = std::max(A, std::min(sl, sl - y));
    B = std::min(B, std::max(su, su - y));
    if (!(B > A)) return 1.0; // disjoint supports

    std::set<double> cuts{A, B};
    auto addCut = [&](double x) {
        if (x > A && x < B) cuts.insert(x);
    };
    for (double x : f.logPdfKinks()) {
        addCut(x);
        addCut(x - y);
    }
    addCut(sl);
    addCut(su);
    addCut(sl - y);
    addCut(su - y);

    auto diff = [&](double z) { return f.pdf(z + y) - kappa * f.pdf(z); };
    // localise crossings of the two branches on a scan grid, refine by bisection
    std::vector<double> base(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < base.size(); ++i) {
        const int n = 64;
        double prev = base[i];
        double dPrev = diff(prev);
        for (int j = 1; j <= n; ++j) {
            double z = base[i] + (base[i + 1] - base[i]) * j / n;
            double d = diff(z);
            if ((dPrev < 0.0) != (d < 0.0)) {
                double lo = prev, hi = z;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    ((diff(mid) < 0.0) == (dPrev < 0.0) ? lo : hi) = mid;
                }
                addCut(0.5 * (lo + hi));
            }
            prev = z;
            dPrev = d;
        }
    }

    std::vector<double> pts(cuts.begin(), cuts.end());
    auto integrand = [&](double z) { return std::min(f.pdf(z + y), kappa * f.pdf(z)); };
    double acc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        acc += integrate(integrand, pts[i], pts[i + 1]);
    return std::clamp(1.0 - acc, 0.0, 1.0);
}

} // namespace detail

double dRoot(const LogConcaveDensity& f, double kappa, double y) {
    if (!(kappa > 0.0) || y == 0.0)
        throw NotApplicable("dRoot: needs kappa > 0 and y != 0");
    if (!f.strictlyMonotoneRatio() || !f.hasFullSupport())
        throw NotApplicable("dRoot: likelihood ratio is not strictly monotone");
    const double target = std::log(kappa);
    if (f.family() == DensityFamily::Normal) {
        auto ps = f.params();
        double mu = ps.at("mu"), sigma = ps.at("sigma");
        return mu - sigma * sigma * target / y - 0.5 * y;
    }
    auto h = [&](double z) { return f.logPdf(z + y) - f.logPdf(z); };
    // h is strictly decreasing for y > 0, increasing for y < 0, range all of R
    const double sgn = y > 0.0 ? -1.0 : 1.0;
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 200 && sgn * (h(lo) - target) > 0.0; ++i) lo = 2.0 * lo - 1.0;
    for (int i = 0; i < 200 && sgn * (h(hi) - target) < 0.0; ++i) hi = 2.0 * hi + 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        (sgn * (h(mid) - target) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double surfacePrice(const LogConcaveDensity& f, double kappa, double y) {
    if (kappa < 0.0) throw Error("surfacePrice: negative moneyness");
    if (kappa == 0.0) return 1.0;
    if (y == 0.0) return std::max(1.0 - kappa, 0.0);
    if (f.strictlyMonotoneRatio() && f.hasFullSupport()) {
        double d = dRoot(f, kappa, y);
        if (y > 0.0) return f.cdf(d + y) - kappa * f.cdf(d);
        return (1.0 - f.cdf(d + y)) - kappa * (1.0 - f.cdf(d));
    }
    return detail::surfacePriceQuadrature(f, kappa, y);
}

double hatSurface(const LogConcaveDensity& f, double p, double y) {
    p = std::clamp(p, 0.0, 1.0);
    return f.cdf(f.quantile(p) + y);
}

std::function<double(double)> generatorHat(const LogConcaveDensity& f) {
    LogConcaveDensity d = f;
    return [d](double p) {
        if (p <= 0.0) {
            double l = d.supportLower();
            return std::isinf(l) ? 0.0 : d.pdf(l);
        }
        if (p >= 1.0) {
            double r = d.supportUpper();
            return std::isinf(r) ? 0.0 : d.pdf(r);
        }
        return d.pdf(d.quantile(p));
    };
}

GeneratorPair generatorH(const std::function<double(double)>& hatH) {
    // sampled nonnegativity / midpoint-concavity screen on the input
    constexpr int kProbe = 64;
    double prev2 = hatH(0.0), prev1 = hatH(1.0 / kProbe);
    if (!(prev2 >= -1e-12) || !(prev1 >= -1e-12))
        throw NotConcave("generator: hatH must be nonnegative");
    for (int i = 2; i <= kProbe; ++i) {
        double cur = hatH(double(i) / kProbe);
        if (!(cur >= -1e-12)) throw NotConcave("generator: hatH must be nonnegative");
        if (prev1 < 0.5 * (prev2 + cur) - 1e-9)
            throw NotConcave("generator: hatH must be concave");
        prev2 = prev1;
        prev1 = cur;
    }
    GeneratorPair out;
    out.hatH = hatH;
    out.a = hatH(0.0);
    out.b = hatH(1.0);
    auto g = hatH;
    out.H = [g](double x) {
        auto obj = [&](double p) { return g(p) - p * x; };
        auto [arg, val] = detail::concaveMaximize(obj, 0.0, 1.0);
        (void)arg;
        return std::max({val, obj(0.0), obj(1.0)});
    };
    return out;
}

namespace {

class ReconstructedDensity final : public detail::DensityImpl {
  public:
    ReconstructedDensity(std::function<double(double)> hatH, std::vector<double> ps,
                         std::vector<double> zs, double lo, double hi)
        : hatH_(std::move(hatH)), ps_(std::move(ps)), zs_(std::move(zs)), lo_(lo), hi_(hi) {}

    double pdf(double z) const override {
        if (z < lo_ || z > hi_) return 0.0;
        return hatH_(cdf(z)); // continuous version on the closed support
    }
    double logPdf(double z) const override {
        double v = pdf(z);
        return v > 0.0 ? std::log(v) : -kInf;
    }
    double cdf(double z) const override {
        if (z <= lo_) return 0.0;
        if (z >= hi_) return 1.0;
        // march dp/dz = hatH(p) from the nearest precomputed knot (RK4);
        // no singularities since hatH is bounded
        size_t i = size_t(std::upper_bound(zs_.begin(), zs_.end(), z) - zs_.begin());
        size_t j = i == 0 ? 0 : (i == zs_.size() ? i - 1 : (z - zs_[i - 1] < zs_[i] - z ? i - 1 : i));
        double p = ps_[j];
        double len = z - zs_[j];
        int n = std::clamp(int(std::abs(len) * 64.0) + 8, 8, 1 << 14);
        double h = len / n;
        auto f = [this](double q) { return hatH_(std::clamp(q, 0.0, 1.0)); };
        for (int s = 0; s < n; ++s) {
            double k1 = f(p);
            double k2 = f(p + 0.5 * h * k1);
            double k3 = f(p + 0.5 * h * k2);
            double k4 = f(p + h * k3);
            p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return std::clamp(p, 0.0, 1.0);
    }
    double quantile(double p) const override {
        if (p <= 0.0) return lo_;
        if (p >= 1.0) return hi_;
        if (p <= ps_.front())
            return zs_.front() - integrateInv(p, ps_.front());
        if (p >= ps_.back())
            return zs_.back() + integrateInv(ps_.back(), p);
        size_t i = size_t(std::upper_bound(ps_.begin(), ps_.end(), p) - ps_.begin()) - 1;
        return zs_[i] + integrateInv(ps_[i], p);
    }
    double supportLower() const override { return lo_; }
    double supportUpper() const override { return hi_; }
    DensityFamily family() const override { return DensityFamily::Reconstructed; }
    std::string familyName() const override { return "reconstructed"; }
    bool strictlyMonotoneRatio() const override { return false; }

  private:
    double integrateInv(double a, double b) const {
        if (!(b > a)) return 0.0;
        const auto& g = hatH_;
        return integrate([&g](double q) { return 1.0 / g(q); }, a, b, kReconTol);
    }

    std::function<double(double)> hatH_;
    std::vector<double> ps_; // clustered probability grid
    std::vector<double> zs_; // quantiles at ps_, anchored so quantile(1/2)=0
    double lo_, hi_;
};

} // namespace

Reconstruction reconstruct(const std::function<double(double)>& hatH) {
    // sample to detect the trivial (identically-zero) generator
    double maxVal = 0.0;
    for (int i = 0; i <= 64; ++i) maxVal = std::max(maxVal, hatH(i / 64.0));
    if (maxVal < 1e-14) return {true, nullptr};
    for (int i = 1; i < 64; ++i)
        if (!(hatH(i / 64.0) > 0.0))
            throw NonConcaveInput("reconstruct: generator must be positive on (0,1)");

    // clustered probability grid
    std::set<double> grid;
    for (int e = 9; e >= 2; --e) {
        grid.insert(std::pow(10.0, -e));
        grid.insert(1.0 - std::pow(10.0, -e));
    }
    for (int i = 2; i <= 198; ++i) grid.insert(i / 200.0);
    std::vector<double> ps(grid.begin(), grid.end());

    auto inv = [&hatH](double q) { return 1.0 / hatH(q); };
    std::vector<double> zs(ps.size());
    // anchor: quantile(1/2) = 0
    size_t mid = size_t(std::lower_bound(ps.begin(), ps.end(), 0.5) - ps.begin());
    zs[mid] = integrate(inv, 0.5, ps[mid], kReconTol); // 0 when ps[mid] == 0.5
    for (size_t i = mid + 1; i < ps.size(); ++i)
        zs[i] = zs[i - 1] + integrate(inv, ps[i - 1], ps[i], kReconTol);
    for (size_t i = mid; i-- > 0;)
        zs[i] = zs[i + 1] - integrate(inv, ps[i], ps[i + 1], kReconTol);

    // support endpoints: infinite exactly when the generator vanishes there
    double lo, hi;
    if (hatH(0.0) > 1e-14) {
        lo = zs.front() - integrate(inv, 0.0, ps.front(), kReconTol);
    } else {
        lo = -kInf;
    }
    if (hatH(1.0) > 1e-14) {
        hi = zs.back() + integrate(inv, ps.back(), 1.0, kReconTol);
    } else {
        hi = kInf;
    }

    auto impl = std::make_shared<ReconstructedDensity>(hatH, std::move(ps), std::move(zs), lo, hi);
    return {false, std::make_shared<const LogConcaveDensity>(LogConcaveDensity(impl))};
}

std::vector<SurfaceRow> impliedVolSurface(const LogConcaveDensity& f,
                                          const std::function<double(double)>& Y,
                                          const std::vector<double>& kappas,
                                          const std::vector<double>& ts) {
    std::vector<SurfaceRow> rows;
    rows.reserve(kappas.size() * ts.size());
    for (double t : ts) {
        if (!(t > 0.0)) throw Error("impliedVolSurface: times must be positive");
        double y = Y(t);
        if (y < 0.0) throw Error("impliedVolSurface: time change must be nonnegative");
        for (double kappa : kappas) {
            double price = surfacePrice(f, kappa, y);
            double iv = bs::impliedStdDev(kappa, std::min(price, 1.0)) / std::sqrt(t);
            rows.push_back({kappa, t, price, iv});
        }
    }
    return rows;
}

} // namespace callspace
