#include "callspace/density.hpp"

#include "callspace/errors.hpp"
#include "callspace/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace callspace {

using detail::DensityImpl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class NormalDensity final : public DensityImpl {
  public:
    NormalDensity(double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (!(sigma > 0.0)) throw UnknownFamily("normal: sigma must be positive");
    }
    double pdf(double z) const override { return normal::pdf((z - mu_) / sigma_) / sigma_; }
    double logPdf(double z) const override {
        double u = (z - mu_) / sigma_;
        return -0.5 * u * u - 0.91893853320467274178 - std::log(sigma_);
    }
    double cdf(double z) const override { return normal::cdf((z - mu_) / sigma_); }
    double quantile(double p) const override { return mu_ + sigma_ * normal::quantile(p); }
    double supportLower() const override { return -kInf; }
    double supportUpper() const override { return kInf; }
    DensityFamily family() const override { return DensityFamily::Normal; }
    std::string familyName() const override { return "normal"; }
    bool strictlyMonotoneRatio() const override { return true; }
    std::map<std::string, double> params() const override {
        return {{"mu", mu_}, {"sigma", sigma_}};
    }

  private:
    double mu_, sigma_;
};

class GumbelDensity final : public DensityImpl {
  public:
    double pdf(double z) const override { return std::exp(z - std::exp(z)); }
    double logPdf(double z) const override { return z - std::exp(z); }
    double cdf(double z) const override { return -std::expm1(-std::exp(z)); }
    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        return std::log(-std::log1p(-p));
    }
    double supportLower() const override { return -kInf; }
    double supportUpper() const override { return kInf; }
    DensityFamily family() const override { return DensityFamily::Gumbel; }
    std::string familyName() const override { return "gumbel"; }
    bool strictlyMonotoneRatio() const override { return true; }
};

class LogisticDensity final : public DensityImpl {
  public:
    double pdf(double z) const override {
        double e = std::exp(-std::abs(z));
        double d = 1.0 + e;
        return e / (d * d);
    }
    double logPdf(double z) const override {
        double a = std::abs(z);
        return -a - 2.0 * std::log1p(std::exp(-a));
    }
    double cdf(double z) const override {
        return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }
    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        return std::log(p) - std::log1p(-p);
    }
    double supportLower() const override { return -kInf; }
    double supportUpper() const override { return kInf; }
    DensityFamily family() const override { return DensityFamily::Logistic; }
    std::string familyName() const override { return "logistic"; }
    bool strictlyMonotoneRatio() const override { return true; }
};

class LaplaceDensity final : public DensityImpl {
  public:
    double pdf(double z) const override { return 0.5 * std::exp(-std::abs(z)); }
    double logPdf(double z) const override { return -std::abs(z) - 0.69314718055994530942; }
    double cdf(double z) const override {
        return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    }
    double supportLower() const override { return -kInf; }
    double supportUpper() const override { return kInf; }
    DensityFamily family() const override { return DensityFamily::Laplace; }
    std::string familyName() const override { return "laplace"; }
    // log-linear pieces: the likelihood ratio is monotone but not strictly.
    bool strictlyMonotoneRatio() const override { return false; }
    std::vector<double> logPdfKinks() const override { return {0.0}; }
};

class ExponentialDensity final : public DensityImpl {
  public:
    double pdf(double z) const override { return z >= 0.0 ? std::exp(-z) : 0.0; }
    double logPdf(double z) const override { return z >= 0.0 ? -z : -kInf; }
    double cdf(double z) const override { return z <= 0.0 ? 0.0 : -std::expm1(-z); }
    double quantile(double p) const override {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return kInf;
        return -std::log1p(-p);
    }
    double supportLower() const override { return 0.0; }
    double supportUpper() const override { return kInf; }
    DensityFamily family() const override { return DensityFamily::Exponential; }
    std::string familyName() const override { return "exponential"; }
    bool strictlyMonotoneRatio() const override { return false; }
};

class UniformDensity final : public DensityImpl {
  public:
    UniformDensity(double a, double b) : a_(a), b_(b) {
        if (!(b > a)) throw UnknownFamily("uniform: need a < b");
    }
    double pdf(double z) const override { return (z >= a_ && z <= b_) ? 1.0 / (b_ - a_) : 0.0; }
    double logPdf(double z) const override {
        return (z >= a_ && z <= b_) ? -std::log(b_ - a_) : -kInf;
    }
    double cdf(double z) const override {
        if (z <= a_) return 0.0;
        if (z >= b_) return 1.0;
        return (z - a_) / (b_ - a_);
    }
    double quantile(double p) const override { return a_ + p * (b_ - a_); }
    double supportLower() const override { return a_; }
    double supportUpper() const override { return b_; }
    DensityFamily family() const override { return DensityFamily::Uniform; }
    std::string familyName() const override { return "uniform"; }
    bool strictlyMonotoneRatio() const override { return false; }
    std::map<std::string, double> params() const override { return {{"a", a_}, {"b", b_}}; }

  private:
    double a_, b_;
};

// Piecewise log-linear density given by tabulated log f on a grid; f is
// piecewise exponential, so segment masses, the cdf and the quantile are
// closed-form.
class TabulatedDensity final : public DensityImpl {
  public:
    TabulatedDensity(std::vector<double> z, std::vector<double> logf)
        : z_(std::move(z)), logf_(std::move(logf)) {
        const size_t n = z_.size();
        if (n < 2 || logf_.size() != n)
            throw UnknownFamily("tabulated: need matching grids with >= 2 points");
        for (size_t i = 1; i < n; ++i)
            if (!(z_[i] > z_[i - 1])) throw UnknownFamily("tabulated: grid must be increasing");
        slopes_.resize(n - 1);
        for (size_t i = 0; i + 1 < n; ++i)
            slopes_[i] = (logf_[i + 1] - logf_[i]) / (z_[i + 1] - z_[i]);
        for (size_t i = 1; i < slopes_.size(); ++i)
            if (slopes_[i] > slopes_[i - 1] + 1e-10)
                throw NonConcaveInput("tabulated: log-density is not concave");
        // normalise
        cum_.assign(n, 0.0);
        for (size_t i = 0; i + 1 < n; ++i)
            cum_[i + 1] = cum_[i] + segmentMass(i, z_[i + 1]);
        double total = cum_.back();
        if (!(total > 0.0)) throw UnknownFamily("tabulated: zero mass");
        double shift = std::log(total);
        for (auto& l : logf_) l -= shift;
        for (auto& c : cum_) c /= total;
        cum_.back() = 1.0;
    }

    double pdf(double z) const override {
        double l = logPdf(z);
        return std::isinf(l) ? 0.0 : std::exp(l);
    }
    double logPdf(double z) const override {
        if (z < z_.front() || z > z_.back()) return -kInf;
        size_t i = segment(z);
        return logf_[i] + slopes_[i] * (z - z_[i]);
    }
    double cdf(double z) const override {
        if (z <= z_.front()) return 0.0;
        if (z >= z_.back()) return 1.0;
        size_t i = segment(z);
        return cum_[i] + segmentMass(i, z);
    }
    double quantile(double p) const override {
        if (p <= 0.0) return z_.front();
        if (p >= 1.0) return z_.back();
        size_t i = size_t(std::upper_bound(cum_.begin(), cum_.end(), p) - cum_.begin());
        i = std::min(std::max<size_t>(i, 1), cum_.size() - 1) - 1;
        double rest = p - cum_[i];
        double f0 = std::exp(logf_[i]);
        double s = slopes_[i];
        if (std::abs(s) < 1e-14) return z_[i] + rest / f0;
        // solve f0 (e^{s dz} - 1)/s = rest
        return z_[i] + std::log1p(rest * s / f0) / s;
    }
    double supportLower() const override { return z_.front(); }
    double supportUpper() const override { return z_.back(); }
    DensityFamily family() const override { return DensityFamily::Tabulated; }
    std::string familyName() const override { return "tabulated"; }
    bool strictlyMonotoneRatio() const override { return false; }
    std::vector<double> logPdfKinks() const override {
        return std::vector<double>(z_.begin() + 1, z_.end() - 1);
    }

  private:
    size_t segment(double z) const {
        size_t i = size_t(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin());
        return std::min(std::max<size_t>(i, 1), z_.size() - 1) - 1;
    }
    // integral of f over [z_[i], zhi] using the (pre-normalisation) table
    double segmentMass(size_t i, double zhi) const {
        double f0 = std::exp(logf_[i]);
        double s = slopes_[i];
        double dz = zhi - z_[i];
        if (std::abs(s * dz) < 1e-12) return f0 * dz * (1.0 + 0.5 * s * dz);
        return f0 * std::expm1(s * dz) / s;
    }

    std::vector<double> z_, logf_, slopes_, cum_;
};

class ScaledDensity final : public DensityImpl {
  public:
    ScaledDensity(std::shared_ptr<const DensityImpl> base, double r) : base_(std::move(base)), r_(r) {
        if (!(r > 0.0)) throw UnknownFamily("scaled: factor must be positive");
    }
    double pdf(double z) const override { return r_ * base_->pdf(r_ * z); }
    double logPdf(double z) const override { return std::log(r_) + base_->logPdf(r_ * z); }
    double cdf(double z) const override { return base_->cdf(r_ * z); }
    double quantile(double p) const override { return base_->quantile(p) / r_; }
    double supportLower() const override { return base_->supportLower() / r_; }
    double supportUpper() const override { return base_->supportUpper() / r_; }
    DensityFamily family() const override { return DensityFamily::Scaled; }
    std::string familyName() const override { return "scaled-" + base_->familyName(); }
    bool strictlyMonotoneRatio() const override { return base_->strictlyMonotoneRatio(); }
    std::vector<double> logPdfKinks() const override {
        auto k = base_->logPdfKinks();
        for (auto& x : k) x /= r_;
        return k;
    }

  private:
    std::shared_ptr<const DensityImpl> base_;
    double r_;
};

} // namespace

LogConcaveDensity::LogConcaveDensity(std::shared_ptr<const DensityImpl> impl)
    : impl_(std::move(impl)) {}

double LogConcaveDensity::pdf(double z) const { return impl_->pdf(z); }
double LogConcaveDensity::logPdf(double z) const { return impl_->logPdf(z); }
double LogConcaveDensity::cdf(double z) const { return impl_->cdf(z); }
double LogConcaveDensity::quantile(double p) const { return impl_->quantile(p); }
double LogConcaveDensity::supportLower() const { return impl_->supportLower(); }
double LogConcaveDensity::supportUpper() const { return impl_->supportUpper(); }
bool LogConcaveDensity::hasFullSupport() const {
    return std::isinf(supportLower()) && std::isinf(supportUpper());
}
DensityFamily LogConcaveDensity::family() const { return impl_->family(); }
std::string LogConcaveDensity::familyName() const { return impl_->familyName(); }
bool LogConcaveDensity::strictlyMonotoneRatio() const { return impl_->strictlyMonotoneRatio(); }
std::vector<double> LogConcaveDensity::logPdfKinks() const { return impl_->logPdfKinks(); }
std::map<std::string, double> LogConcaveDensity::params() const { return impl_->params(); }
bool LogConcaveDensity::sameAs(const LogConcaveDensity& other) const {
    return impl_ == other.impl_;
}

LogConcaveDensity LogConcaveDensity::scaled(double r) const {
    return LogConcaveDensity(std::make_shared<ScaledDensity>(impl_, r));
}

LogConcaveDensity LogConcaveDensity::normal(double mu, double sigma) {
    return LogConcaveDensity(std::make_shared<NormalDensity>(mu, sigma));
}
LogConcaveDensity LogConcaveDensity::gumbel() {
    return LogConcaveDensity(std::make_shared<GumbelDensity>());
}
LogConcaveDensity LogConcaveDensity::logistic() {
    return LogConcaveDensity(std::make_shared<LogisticDensity>());
}
LogConcaveDensity LogConcaveDensity::laplace() {
    return LogConcaveDensity(std::make_shared<LaplaceDensity>());
}
LogConcaveDensity LogConcaveDensity::exponential() {
    return LogConcaveDensity(std::make_shared<ExponentialDensity>());
}
LogConcaveDensity LogConcaveDensity::uniform(double a, double b) {
    return LogConcaveDensity(std::make_shared<UniformDensity>(a, b));
}
LogConcaveDensity LogConcaveDensity::tabulated(std::vector<double> z, std::vector<double> logf) {
    return LogConcaveDensity(std::make_shared<TabulatedDensity>(std::move(z), std::move(logf)));
}

LogConcaveDensity LogConcaveDensity::byName(const std::string& family,
                                            const std::map<std::string, double>& params) {
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    if (family == "normal") return normal(get("mu", 0.0), get("sigma", 1.0));
    if (family == "gumbel") return gumbel();
    if (family == "logistic") return logistic();
    if (family == "laplace") return laplace();
    if (family == "exponential") return exponential();
    if (family == "uniform") return uniform(get("a", 0.0), get("b", 1.0));
    throw UnknownFamily("unknown density family: " + family);
}

} // namespace callspace
