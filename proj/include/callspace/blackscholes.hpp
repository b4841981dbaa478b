#pragma once

namespace callspace::bs {

// Normalized Black-Scholes call price C_BS(kappa, y) for moneyness kappa and
// total standard deviation y; three-branch formula, continuous at the
// boundaries.
double callPrice(double kappa, double y);

// d(kappa, y) = -log(kappa)/y - y/2.
double dMinus(double kappa, double y);

// Implied total standard deviation Y_BS(kappa, c): the y with
// callPrice(kappa, y) = c, to 1e-12 in price.  Returns +inf for c >= 1
// (and for prices needing y beyond the saturation cap of 50).
// Throws PriceBelowIntrinsic for c < (1-kappa)^+.
double impliedStdDev(double kappa, double price);

// Tangent lower bound Phi(Phi^{-1}(p) + y) - p kappa <= C_BS(kappa, y);
// tight iff p = Phi(d(kappa,y)).
struct TangentBound {
    double value;
    bool tight;
};
TangentBound tangentLowerBound(double kappa, double y, double p);

// Subadditivity gap
//   C_BS(k1,y1) + k1 C_BS(k2,y2) - C_BS(k1 k2, y1+y2)  >= 0,
// with equality iff d(k1,y1) = d(k2,y2) + y2.
struct SubadditivityGap {
    double gap;
    bool equality;
};
SubadditivityGap subadditivityGap(double kappa1, double kappa2, double y1, double y2);

} // namespace callspace::bs
