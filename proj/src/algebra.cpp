#include "callspace/algebra.hpp"

#include "callspace/errors.hpp"
#include "callspace/tolerance.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace callspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact conjugate of a closed piecewise-linear curve: a knot of the hat at
// p = -slope of each segment, value = intercept of the supporting line.
HatCurve hatOfGrid(const CallCurve::Grid& grid) {
    auto ck = detail::closedKnots(grid);
    const auto& k = ck.k;
    const auto& v = ck.v;
    std::vector<double> ps{0.0};
    std::vector<double> vals{v.back()}; // g(0) = C(inf)
    // walk segments from the flat tail back to the steepest (at kappa=0);
    // the infimum over kappa of C(kappa) + p kappa is attained at the knot
    // where the slope crosses -p.
    for (size_t i = k.size() - 1; i >= 1; --i) {
        double s = (v[i - 1] - v[i]) / (k[i] - k[i - 1]); // = -slope >= 0
        double p = std::min(s, 1.0);
        double val = v[i - 1] + p * k[i - 1];
        if (p > ps.back() + 1e-15) {
            ps.push_back(p);
            vals.push_back(val);
        } else if (p >= ps.back()) {
            vals.back() = std::min(vals.back(), val);
        }
    }
    if (ps.back() < 1.0) {
        ps.push_back(1.0);
        vals.push_back(v.front() + 1.0 * k.front()); // C(0) + p*0 = 1
    } else {
        vals.back() = std::min(vals.back(), v.front());
    }
    return HatCurve(HatCurve::Grid{std::move(ps), std::move(vals)});
}

} // namespace

void detail::checkHatGrid(const HatCurve::Grid& g) {
    const double tol = tolerances().algebra;
    const auto& p = g.ps;
    const auto& v = g.values;
    if (p.size() < 2 || p.size() != v.size()) throw NotConcave("conjugate grid: bad shape");
    if (p.front() != 0.0 || std::abs(p.back() - 1.0) > tol)
        throw NotConcave("conjugate grid: domain must be [0,1]");
    if (std::abs(v.back() - 1.0) > tol) throw NotConcave("conjugate grid: g(1) must be 1");
    if (v.front() < -tol) throw NotConcave("conjugate grid: negative value");
    for (size_t i = 1; i < p.size(); ++i) {
        if (!(p[i] > p[i - 1])) throw NotConcave("conjugate grid: ps must increase");
        if (v[i] < v[i - 1] - tol) throw NotConcave("conjugate grid: must be nondecreasing");
        double s = (v[i] - v[i - 1]) / (p[i] - p[i - 1]);
        if (i >= 2) {
            double sp = (v[i - 1] - v[i - 2]) * (p[i] - p[i - 1]);
            double sc = (v[i] - v[i - 1]) * (p[i - 1] - p[i - 2]);
            if (sc > sp + tol * 1.0) throw NotConcave("conjugate grid: must be concave");
        }
        (void)s;
    }
}

namespace {

// Exact inverse of the conjugate for grid data: the primal curve has a knot
// at each hat slope, C(kappa_i) = g(p_i) - p_i kappa_i with kappa_i the slope
// of the hat segment to the right of p_i.
CallCurve unhatGrid(const HatCurve::Grid& g) {
    detail::checkHatGrid(g);
    const auto& p = g.ps;
    const auto& v = g.values;
    std::vector<double> slopes(p.size() - 1);
    for (size_t i = 0; i + 1 < p.size(); ++i)
        slopes[i] = (v[i + 1] - v[i]) / (p[i + 1] - p[i]);
    std::vector<double> ks{0.0};
    std::vector<double> vs{v.back()}; // C(0) = g(1) = 1
    // slopes descend along p; primal knots ascend in kappa, so walk backwards
    for (size_t i = p.size() - 1; i-- > 0;) {
        double kappa = slopes[i];
        double val = v[i + 1] - p[i + 1] * kappa;
        if (kappa > ks.back() + 1e-15) {
            ks.push_back(kappa);
            vs.push_back(val);
        }
    }
    double cInf = v.front(); // g(0) = C(inf)
    // close the grid when the steepest hat slope still sits above c_inf
    if (vs.back() > cInf + 1e-15 && p.size() >= 2) {
        // last primal segment has slope -p at the largest p with g affine;
        // the hat's first knot p[1] carries the terminal primal slope -p[1].
        double s = -p[1];
        if (s < 0.0) {
            ks.push_back(ks.back() + (cInf - vs.back()) / s);
            vs.push_back(cInf);
        }
    }
    return CallCurve::grid(std::move(ks), std::move(vs), cInf);
}

std::vector<double> hatSampleProbs() {
    std::set<double> s{0.0, 1.0};
    for (int i = 1; i <= 60; ++i) {
        double u = double(i) / 61.0;
        s.insert(u);
    }
    for (int i = 1; i <= 10; ++i) {
        double e = std::pow(10.0, -double(i));
        s.insert(e);
        s.insert(1.0 - e);
    }
    return {s.begin(), s.end()};
}

// Preimages of a level q under a nondecreasing PL function (smallest x).
double plPreimage(const std::vector<double>& xs, const std::vector<double>& ys, double q) {
    if (q <= ys.front()) return xs.front();
    if (q > ys.back()) return xs.back();
    for (size_t i = 1; i < xs.size(); ++i) {
        if (ys[i] >= q) {
            if (ys[i] == ys[i - 1]) return xs[i];
            double w = (q - ys[i - 1]) / (ys[i] - ys[i - 1]);
            return xs[i - 1] + w * (xs[i] - xs[i - 1]);
        }
    }
    return xs.back();
}

} // namespace

HatCurve hat(const CallCurve& curve) {
    if (curve.isGrid()) return hatOfGrid(curve.gridData());
    if (curve.isSpecial()) {
        if (curve.special() == CallCurve::Special::Identity)
            return HatCurve(HatCurve::Grid{{0.0, 1.0}, {0.0, 1.0}}); // g(p) = p
        return HatCurve(HatCurve::Grid{{0.0, 1.0}, {1.0, 1.0}}); // g(p) = 1
    }
    if (curve.isAnalytic()) {
        const auto& a = curve.analyticData();
        return HatCurve(HatCurve::Analytic{a.density, a.y});
    }
    return curve.conjugateData()->hat;
}

CallCurve unhat(const HatCurve& g) {
    if (g.isGrid()) return unhatGrid(g.grid());
    if (g.isAnalytic()) {
        const auto& a = g.analytic();
        return CallCurve::analytic(a.density, a.y);
    }
    // functional form: sanity-check concavity on a sample, then wrap
    auto ps = hatSampleProbs();
    std::vector<double> vs;
    vs.reserve(ps.size());
    for (double p : ps) vs.push_back(g(p));
    const double tol = 1e-9;
    if (std::abs(vs.back() - 1.0) > tol || vs.front() < -tol)
        throw NotConcave("conjugate function: boundary values");
    for (size_t i = 2; i < ps.size(); ++i) {
        double lhs = (vs[i] - vs[i - 1]) * (ps[i - 1] - ps[i - 2]);
        double rhs = (vs[i - 1] - vs[i - 2]) * (ps[i] - ps[i - 1]);
        if (vs[i] < vs[i - 1] - tol) throw NotConcave("conjugate function: decreasing");
        if (lhs > rhs + tol) throw NotConcave("conjugate function: not concave");
    }
    return CallCurve::conjugate(g);
}

HatCurve compose(const HatCurve& outer, const HatCurve& inner) {
    if (outer.isGrid() && inner.isGrid()) {
        const auto& gi = inner.grid();
        const auto& go = outer.grid();
        // knots: inner knots plus inner-preimages of outer knots, so the
        // composition is affine between consecutive knots (hence exact PL)
        std::set<double> knots(gi.ps.begin(), gi.ps.end());
        for (double q : go.ps) knots.insert(plPreimage(gi.ps, gi.values, q));
        std::vector<double> ps(knots.begin(), knots.end());
        std::vector<double> vals;
        vals.reserve(ps.size());
        for (double p : ps)
            vals.push_back(detail::plEval(go.ps, go.values,
                                          detail::plEval(gi.ps, gi.values, p)));
        // dedupe collinear/coincident knots introduced by preimage ties
        std::vector<double> ps2{ps.front()};
        std::vector<double> vs2{vals.front()};
        for (size_t i = 1; i < ps.size(); ++i) {
            if (ps[i] > ps2.back() + 1e-15) {
                ps2.push_back(ps[i]);
                vs2.push_back(vals[i]);
            } else {
                vs2.back() = vals[i];
            }
        }
        if (std::abs(ps2.back() - 1.0) > 1e-14) {
            ps2.push_back(1.0);
            vs2.push_back(detail::plEval(go.ps, go.values,
                                         detail::plEval(gi.ps, gi.values, 1.0)));
        }
        return HatCurve(HatCurve::Grid{std::move(ps2), std::move(vs2)});
    }
    HatCurve o = outer, i = inner;
    return HatCurve(HatCurve::Func{[o, i](double p) { return o(i(p)); }});
}

double hatInverse(const HatCurve& g, double q) {
    if (q <= g(0.0)) return 0.0;
    if (g.isGrid()) {
        const auto& gr = g.grid();
        return plPreimage(gr.ps, gr.values, q);
    }
    if (q >= g(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) >= q ? hi : lo) = mid;
    }
    return hi;
}

double bulletDirect(const CallCurve& c1, const CallCurve& c2, double kappa) {
    if (kappa == 0.0) return 1.0;
    auto obj = [&](double eta) { return c1(eta) + eta * c2(kappa / eta); };
    // the objective is convex in eta; bracket a subgradient sign change
    auto slopeSign = [&](double eta) {
        double r = kappa / eta;
        return c1.rightDerivative(eta) + c2(r) - r * c2.rightDerivative(r);
    };
    double lo = 1e-8, hi = 1e8;
    while (lo > 1e-300 && slopeSign(lo) > 0.0) lo *= 1e-2;
    while (hi < 1e300 && slopeSign(hi) < 0.0) hi *= 1e2;
    // golden section on log(eta)
    auto f = [&](double x) { return -obj(std::exp(x)); };
    auto [xArg, xMax] = detail::concaveMaximize(f, std::log(lo), std::log(hi));
    (void)xArg;
    double best = -xMax;
    best = std::min(best, obj(lo));
    best = std::min(best, obj(hi));
    // boundary limits: eta -> 0 gives C1(0+) + 0 * C2(inf-ish); eta -> inf
    // gives C1(inf) + inf unless C2 hits 0.  The finite boundary candidates:
    best = std::min(best, 1.0 * 1.0); // eta -> 0: C1(0) + eta C2(kappa/eta) -> 1
    return best;
}

CallCurve bullet(const CallCurve& c1, const CallCurve& c2) {
    return unhat(compose(hat(c1), hat(c2)));
}

CallCurve involute(const CallCurve& curve) {
    if (curve.isSpecial()) return curve; // E* = E, Z* = Z
    if (curve.isGrid()) {
        auto ck = detail::closedKnots(curve.gridData());
        const auto& k = ck.k;
        const auto& v = ck.v;
        // knots at reciprocals of the positive knots, in ascending order
        std::vector<double> ks{0.0};
        std::vector<double> vs{1.0};
        for (size_t i = k.size(); i-- > 0;) {
            if (k[i] <= 0.0) break;
            double kk = 1.0 / k[i];
            double vv = 1.0 - kk + kk * v[i];
            if (kk > ks.back() + 1e-300) {
                ks.push_back(kk);
                vs.push_back(vv);
            }
        }
        // beyond 1/k_min the involute is affine with slope C(0+) slope + ...;
        // kappa -> inf of 1 - kappa + kappa C(1/kappa) = 1 + C'(0)
        double cInfStar = 1.0 + curve.rightDerivative(0.0);
        if (ks.size() == 1) {
            // original curve had its only knot at 0: C == Z on a grid
            return CallCurve::grid({0.0}, {1.0}, cInfStar);
        }
        return CallCurve::grid(std::move(ks), std::move(vs), cInfStar);
    }
    if (curve.isAnalytic()) {
        const auto& a = curve.analyticData();
        return CallCurve::analytic(a.density, -a.y);
    }
    // conjugate of the involute is the reflected generalised inverse:
    // hat(C*)(p) = 1 - hatInverse(hat(C), 1 - p)
    HatCurve h = hat(curve);
    auto g = [h](double p) {
        if (p >= 1.0) return 1.0;
        return 1.0 - hatInverse(h, 1.0 - p);
    };
    return CallCurve::conjugate(HatCurve(HatCurve::Func{g}));
}

bool leq(const CallCurve& c1, const CallCurve& c2) {
    std::set<double> ks;
    for (double k : detail::evaluationKappas(c1)) ks.insert(k);
    for (double k : detail::evaluationKappas(c2)) ks.insert(k);
    const double tol = std::max(tolerances().algebra, 1e-10);
    for (double k : ks)
        if (c1(k) > c2(k) + tol) return false;
    if (c1.cInf() > c2.cInf() + tol) return false;
    return true;
}

} // namespace callspace
