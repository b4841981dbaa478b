#pragma once

#include "callspace/density.hpp"

#include <functional>
#include <vector>

namespace callspace {

// C_f(kappa, y) = integral of (f(z+y) - kappa f(z))^+ dz.  Closed form
// F(d+y) - kappa F(d) when the likelihood ratio is strictly monotone with
// full range; adaptive quadrature of 1 - integral of min(f(z+y), kappa f(z))
// otherwise.
double surfacePrice(const LogConcaveDensity& f, double kappa, double y);

// The unique z with f(z+y)/f(z) = kappa (strictly monotone ratio only).
// Throws NotApplicable when the ratio cannot bracket kappa.
double dRoot(const LogConcaveDensity& f, double kappa, double y);

// Conjugate surface F(F^{-1}(p) + y); for y < 0 this is the compositional
// inverse of the y > 0 map (group extension on full-support densities).
double hatSurface(const LogConcaveDensity& f, double p, double y);

// Infinitesimal generator of the conjugate semigroup: p -> f(F^{-1}(p)).
std::function<double(double)> generatorHat(const LogConcaveDensity& f);

// Generator pair (H, H^): H(x) = sup_{0<=p<=1} [ H^(p) - p x ], with tail
// constants a = lim_{x->+inf} H(x) = H^(0) and b = lim_{x->-inf} H(x)+x = H^(1).
struct GeneratorPair {
    std::function<double(double)> hatH;
    std::function<double(double)> H;
    double a;
    double b;
};
GeneratorPair generatorH(const std::function<double(double)>& hatH);

// Reconstruction of the one-parameter semigroup from its generator:
// G(p) = integral_{1/2}^{p} dphi / H^(phi),  F = G^{-1},  f = H^ o F.
// A vanishing generator yields the trivial semigroup.
struct Reconstruction {
    bool trivial = false;
    std::shared_ptr<const LogConcaveDensity> density; // null when trivial
};
Reconstruction reconstruct(const std::function<double(double)>& hatH);

struct SurfaceRow {
    double kappa;
    double t;
    double price;
    double impliedVol;
};

// Rows (kappa, t, price, Y_BS(kappa, price)/sqrt(t)) of the implied
// volatility surface generated by f and the time change Y.
std::vector<SurfaceRow> impliedVolSurface(const LogConcaveDensity& f,
                                          const std::function<double(double)>& Y,
                                          const std::vector<double>& kappas,
                                          const std::vector<double>& ts);

} // namespace callspace
