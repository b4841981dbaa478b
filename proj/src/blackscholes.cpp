#include "callspace/blackscholes.hpp"

#include "callspace/errors.hpp"
#include "callspace/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace callspace::bs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kYCap = 50.0; // callPrice(kappa, 50) is 1 to double precision
} // namespace

double dMinus(double kappa, double y) { return -std::log(kappa) / y - 0.5 * y; }

double callPrice(double kappa, double y) {
    if (kappa < 0.0) throw Error("callPrice: negative moneyness");
    if (y < 0.0) throw Error("callPrice: negative standard deviation");
    if (kappa == 0.0) return 1.0;
    if (y == 0.0) return std::max(1.0 - kappa, 0.0);
    if (std::isinf(y)) return 1.0;
    double d = dMinus(kappa, y);
    return normal::cdf(d + y) - kappa * normal::cdf(d);
}

double impliedStdDev(double kappa, double price) {
    if (kappa < 0.0) throw Error("impliedStdDev: negative moneyness");
    double intrinsic = std::max(1.0 - kappa, 0.0);
    if (price < intrinsic - 1e-14)
        throw PriceBelowIntrinsic("impliedStdDev: price below intrinsic value");
    if (price >= 1.0) return kInf;
    if (price <= intrinsic) return 0.0;
    if (kappa == 0.0) return 0.0; // price must be 1, handled above

    double lo = 0.0, hi = kYCap;
    if (callPrice(kappa, hi) <= price) return kInf;
    // Newton from a bisection-refined start, with bracket fallback
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (callPrice(kappa, mid) < price ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double c = callPrice(kappa, y);
        double vega = normal::pdf(dMinus(kappa, y) + y); // dC/dy
        if (vega <= 0.0) break;
        double step = (c - price) / vega;
        double next = y - step;
        if (next <= lo || next >= hi) break;
        y = next;
        if (std::abs(step) < 1e-15 * std::max(1.0, y)) break;
    }
    return y;
}

TangentBound tangentLowerBound(double kappa, double y, double p) {
    double value = normal::cdf(normal::quantile(p) + y) - p * kappa;
    bool tight = true;
    if (kappa > 0.0 && y > 0.0)
        tight = std::abs(p - normal::cdf(dMinus(kappa, y))) < 1e-10;
    return {value, tight};
}

SubadditivityGap subadditivityGap(double kappa1, double kappa2, double y1, double y2) {
    double gap = callPrice(kappa1, y1) + kappa1 * callPrice(kappa2, y2) -
                 callPrice(kappa1 * kappa2, y1 + y2);
    bool equality;
    if (y1 == 0.0 || y2 == 0.0 || kappa1 == 0.0 || kappa2 == 0.0) {
        equality = std::abs(gap) < 1e-12;
    } else {
        equality = std::abs(dMinus(kappa1, y1) - dMinus(kappa2, y2) - y2) < 1e-8;
    }
    return {gap, equality};
}

} // namespace callspace::bs
