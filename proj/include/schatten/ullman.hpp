#pragma once

#include <utility>
#include <vector>

#include "schatten/exponent.hpp"
#include "schatten/rng.hpp"

namespace schatten {

enum class Ensemble { eigenvalue, singular };

// Standard Ullman density h_p on [-1,1]:
//   h_p(x) = (p/pi) Integral_{|x|}^{1} t^{p-1} / sqrt(t^2 - x^2) dt.
// Closed forms for p = 1 and p = 2, otherwise quadrature after the
// substitution t = |x| cosh u which removes the endpoint singularity.
// For p <= 1 the value at x = 0 is +infinity (integrable divergence).
double h_density(double p, double x);

// CDF of h_p on [-1,1], exact up to quadrature tolerance ~1e-12.
double h_cdf(double p, double x);

// Logarithmic self-energy of the limit law:
//   finite p:  log(b_p / 2) - 1/(2p),   p = infinity:  -log 2.
double log_energy_limit(const Exponent& p);

// A closed-form limiting spectral law with density/CDF/quantile access.
// Immutable after construction; sampling draws from a caller-owned stream.
class LimitLaw {
public:
    LimitLaw(Exponent p, Ensemble ensemble, int cdf_cells = 4096);

    double density(double x) const;
    double cdf(double x) const;
    double quantile(double u) const;  // u outside [0,1] -> domain error

    double support_min() const { return lo_; }
    double support_max() const { return hi_; }
    const Exponent& exponent() const { return p_; }
    Ensemble ensemble() const { return ens_; }

    std::vector<double> sample(Philox& rng, std::size_t count) const;

private:
    Exponent p_;
    Ensemble ens_;
    double lo_, hi_;
    std::vector<double> cdf_;  // values at lo_ + i*(hi_-lo_)/(cdf_.size()-1)
};

// Density tabulated at n cell centers across the support (the CLI's CSV body).
std::vector<std::pair<double, double>> tabulate_density(const LimitLaw& law, int n);

}  // namespace schatten
