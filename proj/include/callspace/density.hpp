#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace callspace {

enum class DensityFamily {
    Normal,
    Gumbel,
    Logistic,
    Laplace,
    Exponential,
    Uniform,
    Tabulated,
    Reconstructed,
    Scaled,
};

namespace detail {
class DensityImpl;
}

// A log-concave probability density on a support interval [L, R]
// (either endpoint may be infinite), together with its distribution
// function and quantile function.  Immutable; cheap to copy.
class LogConcaveDensity {
  public:
    double pdf(double z) const;
    double logPdf(double z) const; // -inf outside the support
    double cdf(double z) const;
    double quantile(double p) const; // quantile(0) = L, quantile(1) = R

    double supportLower() const;
    double supportUpper() const;
    bool hasFullSupport() const;

    DensityFamily family() const;
    std::string familyName() const;

    // Constructor parameters for serialisation ("mu"/"sigma", "a"/"b");
    // empty for parameter-free families.
    std::map<std::string, double> params() const;

    // True when both objects share the same underlying implementation.
    bool sameAs(const LogConcaveDensity& other) const;

    // True when z -> f(z+y)/f(z) is continuous and strictly monotone with
    // full range (0, inf) for every y != 0, so the closed-form price route
    // through dRoot applies.
    bool strictlyMonotoneRatio() const;

    // Interior points where log f is not smooth (kinks of piecewise
    // log-linear densities); used to split quadrature intervals.
    std::vector<double> logPdfKinks() const;

    // The rescaled density z -> r f(rz).
    LogConcaveDensity scaled(double r) const;

    static LogConcaveDensity normal(double mu = 0.0, double sigma = 1.0);
    static LogConcaveDensity gumbel();
    static LogConcaveDensity logistic();
    static LogConcaveDensity laplace();
    static LogConcaveDensity exponential();
    static LogConcaveDensity uniform(double a = 0.0, double b = 1.0);

    // Piecewise log-linear density from tabulated log f values on a strictly
    // increasing grid; normalised internally.  Log-concavity (nonincreasing
    // slopes) is enforced.
    static LogConcaveDensity tabulated(std::vector<double> z, std::vector<double> logf);

    // Lookup by family name with a parameter map ("mu", "sigma", "a", "b").
    static LogConcaveDensity byName(const std::string& family,
                                    const std::map<std::string, double>& params = {});

    explicit LogConcaveDensity(std::shared_ptr<const detail::DensityImpl> impl);

  private:
    std::shared_ptr<const detail::DensityImpl> impl_;
};

namespace detail {

class DensityImpl {
  public:
    virtual ~DensityImpl() = default;
    virtual double pdf(double z) const = 0;
    virtual double logPdf(double z) const = 0;
    virtual double cdf(double z) const = 0;
    virtual double quantile(double p) const = 0;
    virtual double supportLower() const = 0;
    virtual double supportUpper() const = 0;
    virtual DensityFamily family() const = 0;
    virtual std::string familyName() const = 0;
    virtual bool strictlyMonotoneRatio() const = 0;
    virtual std::vector<double> logPdfKinks() const { return {}; }
    virtual std::map<std::string, double> params() const { return {}; }
};

} // namespace detail

} // namespace callspace
