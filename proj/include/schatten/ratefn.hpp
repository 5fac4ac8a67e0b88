#pragma once

#include "schatten/exponent.hpp"
#include "schatten/grid.hpp"

namespace schatten {

// A rate-function value: finite, or the distinguished +infinity of an
// infeasible measure.  Kept as a tagged type so callers branch explicitly.
class Rate {
public:
    static Rate finite(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("Rate::finite: non-finite value");
        return Rate(v, false);
    }
    static Rate infinity() { return Rate(0.0, true); }

    bool is_infinite() const { return infinite_; }
    double value() const {
        if (infinite_) throw std::logic_error("Rate::value() called on +infinity");
        return v_;
    }

private:
    Rate(double v, bool inf) : v_(v), infinite_(inf) {}
    double v_;
    bool infinite_;
};

enum class RateEnsemble { eigenvalue, eigenvalue_inf, singular };

// Tolerance when classifying the moment/support feasibility constraints, so a
// discretized exact minimizer is not pushed to +infinity by rounding.
inline constexpr double kFeasibilityTol = 1e-9;

// Spectral rate functions:
//   eigenvalue (finite p):  -(beta/2) E_log(mu) + C(p,beta)   if m_p(mu) <= 1
//   eigenvalue_inf:         -(beta/2) E_log(mu) - (beta/2) log 2
//                                                     if mu is carried by [-1,1]
//   singular (finite p):    -(beta/2) E_log(mu) + 2 C(p,beta) if m_{p/2}(mu) <= 1
// and +infinity otherwise.
Rate rate_spectral(const GridMeasure& mu, const Exponent& p, double beta, RateEnsemble ensemble);

// Gas rate: -(beta/2) E_log(mu) + m_p(mu) + B.  Always finite on a grid
// measure (bounded support forces a finite moment).
Rate rate_gas(const GridMeasure& mu, double p, double beta);

// Pair rate: -(beta/2) E_log(mu) + m + B when m >= m_p(mu), else +infinity.
Rate rate_pair(const GridMeasure& mu, double m, double p, double beta);

// Rate of beta-distributed radial factors with parameter limits (a, b):
//   a,b > 0:  -a log(y/a) - b log((1-y)/b) - (a+b) log(a+b)  on (0,1)
//   b = 0:    -a log y                                        on (0,1]
//   a = 0:    -b log(1-y)                                     on [0,1)
// and +infinity outside the stated domain.
Rate beta_rate(double y, double a, double b);

}  // namespace schatten
