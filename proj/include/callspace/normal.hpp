#pragma once

namespace callspace::normal {

// Standard normal density phi(z).
double pdf(double z);

// Standard normal distribution function Phi(z), accurate to ~1e-16 absolute
// on the whole line (complementary-error-function evaluation).
double cdf(double z);

// Quantile Phi^{-1}(p).  Rational initial guess refined by Halley steps;
// returns -inf / +inf at p = 0 / 1.
double quantile(double p);

} // namespace callspace::normal
