#pragma once

#include "callspace/density.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace callspace {

// A finite distribution on nonnegative atoms; the brute-force substrate for
// primal representations.
struct DiscreteDistribution {
    std::vector<double> atoms; // distinct, ascending, >= 0
    std::vector<double> probs; // positive, sum to 1

    DiscreteDistribution(std::vector<double> atoms, std::vector<double> probs);
    double mean() const;
};

// Concave nondecreasing conjugate curve on [0,1] with value 1 at p=1.
class HatCurve {
  public:
    struct Grid {
        std::vector<double> ps;     // strictly increasing, ps.front()=0, ps.back()=1
        std::vector<double> values; // concave, nondecreasing, values.back()=1
    };
    struct Analytic {
        LogConcaveDensity density;
        double y; // hat of C_f(.,y); y may be negative
    };
    struct Func {
        std::function<double(double)> eval;
    };

    explicit HatCurve(Grid g);
    explicit HatCurve(Analytic a);
    explicit HatCurve(Func f);

    double operator()(double p) const;

    bool isGrid() const;
    bool isAnalytic() const;
    const Grid& grid() const;
    const Analytic& analytic() const;

  private:
    std::variant<Grid, Analytic, Func> repr_;
};

// An element of the call-price space: convex, C(0)=1,
// (1-kappa)^+ <= C(kappa) <= 1, nonincreasing.
class CallCurve {
  public:
    struct Grid {
        std::vector<double> strikes; // strictly increasing, strikes.front()=0
        std::vector<double> prices;
        double cInf; // limit value at kappa -> inf
    };
    struct Analytic {
        LogConcaveDensity density;
        double y; // C_f(., y); y may be negative (put-call reflected curve)
    };
    enum class Special { Identity, Absorbing }; // E and Z
    struct Conjugate {
        HatCurve hat; // curve defined as kappa -> max_p [ g(p) - p kappa ]
    };

    static CallCurve identity();  // E(kappa) = (1-kappa)^+
    static CallCurve absorbing(); // Z(kappa) = 1
    static CallCurve grid(std::vector<double> strikes, std::vector<double> prices, double cInf);
    static CallCurve analytic(LogConcaveDensity density, double y);
    static CallCurve conjugate(HatCurve hat);

    double operator()(double kappa) const;
    double rightDerivative(double kappa) const;
    double cInf() const;

    bool isGrid() const;
    bool isAnalytic() const;
    bool isSpecial() const;
    const Grid& gridData() const;
    const Analytic& analyticData() const;
    Special special() const;
    const Conjugate* conjugateData() const;

    // Grid view of the curve: exact for grid/special curves, sampled on a
    // log/linear strike grid otherwise.
    Grid asGrid() const;

  private:
    explicit CallCurve(std::variant<Grid, Analytic, Special, Conjugate> r) : repr_(std::move(r)) {}
    std::variant<Grid, Analytic, Special, Conjugate> repr_;
};

struct Violation {
    std::string invariant;
    double kappa;
};

// Empty iff all call-curve invariants hold.
std::vector<Violation> validate(const CallCurve& curve);

// -C'(kappa) = P(S > kappa) for a primal representation S.
double primalSurvival(const CallCurve& curve, double kappa);

// C(kappa) - kappa C'(kappa) = P(S* < 1/kappa) for a dual representation S*.
double dualCdf(const CallCurve& curve, double kappa);

// Exact piecewise-linear curve of 1 - E(S ^ kappa).
CallCurve curveOf(const DiscreteDistribution& dist);

bool isC1(const CallCurve& curve);    // C(inf) = 0
bool isCPlus(const CallCurve& curve); // C'(0) = -1

} // namespace callspace
