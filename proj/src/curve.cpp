#include "callspace/curve.hpp"

#include "callspace/errors.hpp"
#include "callspace/surface.hpp"
#include "callspace/tolerance.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace callspace {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

Tolerances& tolerances() {
    static Tolerances t = [] {
        Tolerances out;
        if (const char* env = std::getenv("CALLSPACE_TOL")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end != env && v > 0.0) out.algebra = v;
        }
        return out;
    }();
    return t;
}

namespace detail {

ClosedKnots closedKnots(const CallCurve::Grid& g) {
    ClosedKnots out{g.strikes, g.prices};
    const size_t n = out.k.size();
    if (n >= 2) {
        double s = (out.v[n - 1] - out.v[n - 2]) / (out.k[n - 1] - out.k[n - 2]);
        if (out.v.back() > g.cInf && s < 0.0) {
            double dk = (g.cInf - out.v.back()) / s;
            if (dk > 1e-12 * (1.0 + out.k.back())) {
                out.k.push_back(out.k.back() + dk);
                out.v.push_back(g.cInf);
            } else {
                // the closing knot would be a degenerate sliver; absorb it
                out.v.back() = g.cInf;
            }
        }
    }
    return out;
}

double plEval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    size_t i = size_t(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

std::pair<double, double> concaveMaximize(const std::function<double(double)>& f, double lo,
                                          double hi) {
    constexpr double kRatio = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - kRatio * (b - a);
    double x2 = a + kRatio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 90; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kRatio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kRatio * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    double fa = f(lo), fb = f(hi);
    double best = std::max({fm, f1, f2, fa, fb});
    double arg = xm;
    if (best == fa) arg = lo;
    else if (best == fb) arg = hi;
    else if (best == f1) arg = x1;
    else if (best == f2) arg = x2;
    return {arg, best};
}

const std::vector<double>& sampleKappas() {
    static const std::vector<double> grid = [] {
        std::set<double> s;
        s.insert(0.0);
        for (int i = 0; i <= 120; ++i) s.insert(std::pow(10.0, -4.0 + 8.0 * i / 120.0));
        for (int i = 0; i <= 80; ++i) s.insert(0.25 * i); // linear sweep to 20
        return std::vector<double>(s.begin(), s.end());
    }();
    return grid;
}

std::vector<double> evaluationKappas(const CallCurve& c) {
    if (c.isGrid()) {
        auto ck = closedKnots(c.gridData());
        if (!ck.k.empty()) ck.k.push_back(ck.k.back() + 1.0);
        return ck.k;
    }
    if (c.isSpecial()) return {0.0, 0.5, 1.0, 2.0, 10.0};
    return sampleKappas();
}

} // namespace detail

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<double> a, std::vector<double> p)
    : atoms(std::move(a)), probs(std::move(p)) {
    if (atoms.empty() || atoms.size() != probs.size())
        throw Error("discrete distribution: atoms/probs size mismatch");
    double total = 0.0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i] < 0.0) throw Error("discrete distribution: negative atom");
        if (!(probs[i] > 0.0)) throw Error("discrete distribution: nonpositive probability");
        if (i > 0 && !(atoms[i] > atoms[i - 1]))
            throw Error("discrete distribution: atoms must be distinct ascending");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error("discrete distribution: probabilities must sum to 1");
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (size_t i = 0; i < atoms.size(); ++i) m += atoms[i] * probs[i];
    return m;
}

// ---------------------------------------------------------------------------
// HatCurve

HatCurve::HatCurve(Grid g) : repr_(std::move(g)) {}
HatCurve::HatCurve(Analytic a) : repr_(std::move(a)) {}
HatCurve::HatCurve(Func f) : repr_(std::move(f)) {}

bool HatCurve::isGrid() const { return std::holds_alternative<Grid>(repr_); }
bool HatCurve::isAnalytic() const { return std::holds_alternative<Analytic>(repr_); }
const HatCurve::Grid& HatCurve::grid() const { return std::get<Grid>(repr_); }
const HatCurve::Analytic& HatCurve::analytic() const { return std::get<Analytic>(repr_); }

double HatCurve::operator()(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    if (const auto* g = std::get_if<Grid>(&repr_)) return detail::plEval(g->ps, g->values, p);
    if (const auto* a = std::get_if<Analytic>(&repr_)) {
        const auto& f = a->density;
        if (a->y >= 0.0) return f.cdf(f.quantile(p) + a->y);
        // conjugate of the reflected curve C_f(., y), y < 0
        return 1.0 - f.cdf(f.quantile(1.0 - p) + a->y);
    }
    return std::get<Func>(repr_).eval(p);
}

// ---------------------------------------------------------------------------
// CallCurve

CallCurve CallCurve::identity() { return CallCurve(Special::Identity); }
CallCurve CallCurve::absorbing() { return CallCurve(Special::Absorbing); }

CallCurve CallCurve::grid(std::vector<double> strikes, std::vector<double> prices, double cInf) {
    if (strikes.empty() || strikes.size() != prices.size())
        throw InvalidCurve("grid curve: strikes/prices size mismatch");
    if (strikes.front() != 0.0) throw InvalidCurve("grid curve: first strike must be 0");
    for (size_t i = 1; i < strikes.size(); ++i)
        if (!(strikes[i] > strikes[i - 1]))
            throw InvalidCurve("grid curve: strikes must be strictly increasing");
    if (!std::isfinite(cInf)) throw InvalidCurve("grid curve: c_inf must be finite");
    return CallCurve(Grid{std::move(strikes), std::move(prices), cInf});
}

CallCurve CallCurve::analytic(LogConcaveDensity density, double y) {
    return CallCurve(Analytic{std::move(density), y});
}

CallCurve CallCurve::conjugate(HatCurve hatCurve) {
    return CallCurve(Conjugate{std::move(hatCurve)});
}

bool CallCurve::isGrid() const { return std::holds_alternative<Grid>(repr_); }
bool CallCurve::isAnalytic() const { return std::holds_alternative<Analytic>(repr_); }
bool CallCurve::isSpecial() const { return std::holds_alternative<Special>(repr_); }
const CallCurve::Grid& CallCurve::gridData() const { return std::get<Grid>(repr_); }
const CallCurve::Analytic& CallCurve::analyticData() const { return std::get<Analytic>(repr_); }
CallCurve::Special CallCurve::special() const { return std::get<Special>(repr_); }
const CallCurve::Conjugate* CallCurve::conjugateData() const {
    return std::get_if<Conjugate>(&repr_);
}

double CallCurve::operator()(double kappa) const {
    if (const auto* g = std::get_if<Grid>(&repr_)) {
        const auto& k = g->strikes;
        const auto& v = g->prices;
        if (kappa <= k.front()) return v.front();
        if (kappa >= k.back()) {
            if (k.size() < 2) return std::max(g->cInf, v.back());
            double s = (v[v.size() - 1] - v[v.size() - 2]) / (k[k.size() - 1] - k[k.size() - 2]);
            double lin = v.back() + s * (kappa - k.back());
            return s < 0.0 ? std::max(g->cInf, lin) : lin;
        }
        return detail::plEval(k, v, kappa);
    }
    if (const auto* a = std::get_if<Analytic>(&repr_))
        return surfacePrice(a->density, kappa, a->y);
    if (const auto* s = std::get_if<Special>(&repr_))
        return *s == Special::Identity ? std::max(1.0 - kappa, 0.0) : 1.0;
    const auto& g = std::get<Conjugate>(repr_).hat;
    return detail::concaveMaximize([&](double p) { return g(p) - p * kappa; }, 0.0, 1.0).second;
}

double CallCurve::rightDerivative(double kappa) const {
    if (const auto* g = std::get_if<Grid>(&repr_)) {
        const auto& k = g->strikes;
        const auto& v = g->prices;
        if (k.size() < 2) return 0.0;
        if (kappa >= k.back()) {
            double s = (v[v.size() - 1] - v[v.size() - 2]) / (k[k.size() - 1] - k[k.size() - 2]);
            if (s >= 0.0) return s;
            double kEnd = k.back() + (g->cInf - v.back()) / s;
            return kappa < kEnd ? s : 0.0;
        }
        size_t i = size_t(std::upper_bound(k.begin(), k.end(), kappa) - k.begin());
        i = std::max<size_t>(i, 1);
        return (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
    }
    if (const auto* s = std::get_if<Special>(&repr_)) {
        if (*s == Special::Absorbing) return 0.0;
        return kappa < 1.0 ? -1.0 : 0.0;
    }
    if (const auto* a = std::get_if<Analytic>(&repr_)) {
        const auto& f = a->density;
        const double y = a->y;
        if (y == 0.0) return kappa < 1.0 ? -1.0 : 0.0;
        if (kappa == 0.0) {
            // -C'(0) = mass of the overlap of the supports of f(.+y) and f(.)
            if (y > 0.0) {
                double r = f.supportUpper();
                return std::isinf(r) ? -1.0 : -f.cdf(r - y);
            }
            double l = f.supportLower();
            return std::isinf(l) ? -1.0 : -(1.0 - f.cdf(l - y));
        }
        if (f.strictlyMonotoneRatio() && f.hasFullSupport()) {
            double d = dRoot(f, kappa, y);
            // y > 0: {S > kappa} = {Z < d};  y < 0: the ratio increases in z.
            return y > 0.0 ? -f.cdf(d) : -(1.0 - f.cdf(d));
        }
        double h = 1e-6;
        if (kappa < h) return ((*this)(kappa + h) - (*this)(kappa)) / h;
        return ((*this)(kappa + h) - (*this)(kappa - h)) / (2.0 * h);
    }
    const auto& g = std::get<Conjugate>(repr_).hat;
    return -detail::concaveMaximize([&](double p) { return g(p) - p * kappa; }, 0.0, 1.0).first;
}

double CallCurve::cInf() const {
    if (const auto* g = std::get_if<Grid>(&repr_)) return std::min(g->cInf, g->prices.back());
    if (const auto* s = std::get_if<Special>(&repr_))
        return *s == Special::Identity ? 0.0 : 1.0;
    if (const auto* a = std::get_if<Analytic>(&repr_)) {
        const auto& f = a->density;
        if (a->y >= 0.0) {
            double l = f.supportLower();
            return std::isinf(l) ? 0.0 : f.cdf(l + a->y);
        }
        double r = f.supportUpper();
        return std::isinf(r) ? 0.0 : 1.0 - f.cdf(r + a->y);
    }
    return std::get<Conjugate>(repr_).hat(0.0);
}

CallCurve::Grid CallCurve::asGrid() const {
    if (const auto* g = std::get_if<Grid>(&repr_)) return *g;
    if (const auto* s = std::get_if<Special>(&repr_)) {
        if (*s == Special::Identity) return Grid{{0.0, 1.0}, {1.0, 0.0}, 0.0};
        return Grid{{0.0}, {1.0}, 1.0};
    }
    Grid out;
    out.strikes = detail::sampleKappas();
    out.prices.reserve(out.strikes.size());
    for (double k : out.strikes) out.prices.push_back((*this)(k));
    out.cInf = cInf();
    return out;
}

// ---------------------------------------------------------------------------
// curvespace operations

std::vector<Violation> validate(const CallCurve& curve) {
    std::vector<Violation> out;
    const double tol = curve.isGrid() || curve.isSpecial() ? tolerances().algebra : 1e-9;

    std::vector<double> ks;
    std::vector<double> vs;
    if (curve.isGrid()) {
        auto ck = detail::closedKnots(curve.gridData());
        ks = std::move(ck.k);
        vs = std::move(ck.v);
        const auto& g = curve.gridData();
        if (g.cInf < -tol || g.cInf > 1.0 + tol) out.push_back({"c_inf in [0,1]", kInf});
        if (g.prices.back() < g.cInf - tol) out.push_back({"value below c_inf", g.strikes.back()});
        if (ks.size() == 1 && std::abs(g.prices.back() - g.cInf) > tol)
            out.push_back({"extrapolation undefined", 0.0});
    } else {
        ks = detail::evaluationKappas(curve);
        vs.reserve(ks.size());
        for (double k : ks) vs.push_back(curve(k));
    }

    if (std::abs(vs.front() - 1.0) > tol || ks.front() != 0.0) out.push_back({"C(0)=1", 0.0});
    for (size_t i = 0; i < ks.size(); ++i) {
        double intrinsic = std::max(1.0 - ks[i], 0.0);
        if (vs[i] < intrinsic - tol || vs[i] > 1.0 + tol) out.push_back({"bounds", ks[i]});
    }
    for (size_t i = 1; i < ks.size(); ++i) {
        if (vs[i] > vs[i - 1] + tol) {
            out.push_back({"nonincreasing", ks[i]});
            break;
        }
    }
    for (size_t i = 1; i < ks.size(); ++i) {
        double s = (vs[i] - vs[i - 1]) / (ks[i] - ks[i - 1]);
        if (s < -1.0 - tol) {
            out.push_back({"slope >= -1", ks[i]});
            break;
        }
    }
    // convexity via the cross-product form, avoiding slope division noise
    for (size_t i = 2; i < ks.size(); ++i) {
        double lhs = (vs[i - 1] - vs[i - 2]) * (ks[i] - ks[i - 1]);
        double rhs = (vs[i] - vs[i - 1]) * (ks[i - 1] - ks[i - 2]);
        double scale = std::max(1.0, ks[i] - ks[i - 2]);
        if (lhs > rhs + tol * scale) {
            out.push_back({"convex", ks[i - 1]});
            break;
        }
    }
    return out;
}

double primalSurvival(const CallCurve& curve, double kappa) {
    return -curve.rightDerivative(kappa);
}

double dualCdf(const CallCurve& curve, double kappa) {
    double v = curve(kappa) - kappa * curve.rightDerivative(kappa);
    return std::clamp(v, 0.0, 1.0);
}

CallCurve curveOf(const DiscreteDistribution& dist) {
    double m = dist.mean();
    if (m > 1.0 + 1e-12) throw MeanExceedsOne("primal representation requires E(S) <= 1");
    std::vector<double> ks;
    if (dist.atoms.front() != 0.0) ks.push_back(0.0);
    ks.insert(ks.end(), dist.atoms.begin(), dist.atoms.end());
    std::vector<double> vs;
    vs.reserve(ks.size());
    for (double k : ks) {
        double e = 0.0;
        for (size_t i = 0; i < dist.atoms.size(); ++i) e += dist.probs[i] * std::min(dist.atoms[i], k);
        vs.push_back(1.0 - e);
    }
    return CallCurve::grid(std::move(ks), std::move(vs), 1.0 - m);
}

bool isC1(const CallCurve& curve) { return std::abs(curve.cInf()) <= tolerances().algebra; }

bool isCPlus(const CallCurve& curve) {
    return std::abs(curve.rightDerivative(0.0) + 1.0) <= tolerances().algebra;
}

} // namespace callspace
