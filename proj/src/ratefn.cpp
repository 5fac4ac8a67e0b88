#include "schatten/ratefn.hpp"

#include <cmath>

#include "schatten/special.hpp"

namespace schatten {

Rate rate_spectral(const GridMeasure& mu, const Exponent& p, double beta,
                   RateEnsemble ensemble) {
    mu.validate();
    if (!(beta > 0.0)) throw std::domain_error("rate_spectral: beta must be positive");
    if (ensemble != RateEnsemble::eigenvalue_inf && p.is_infinite())
        throw std::invalid_argument("rate_spectral: finite ensembles need finite p");
    if (ensemble == RateEnsemble::singular && mu.left < -kFeasibilityTol)
        throw std::invalid_argument("rate_spectral: singular ensemble needs support in [0,inf)");

    switch (ensemble) {
        case RateEnsemble::eigenvalue: {
            if (mu.moment(p.value()) > 1.0 + kFeasibilityTol) return Rate::infinity();
            const double c = rate_constant(p, beta);
            return Rate::finite(-0.5 * beta * grid_log_energy(mu) + c);
        }
        case RateEnsemble::eigenvalue_inf: {
            if (mu.mass_outside(-1.0, 1.0) > kFeasibilityTol) return Rate::infinity();
            return Rate::finite(-0.5 * beta * grid_log_energy(mu) - 0.5 * beta * std::log(2.0));
        }
        case RateEnsemble::singular: {
            if (mu.moment(0.5 * p.value()) > 1.0 + kFeasibilityTol) return Rate::infinity();
            const double c = 2.0 * rate_constant(p, beta);
            return Rate::finite(-0.5 * beta * grid_log_energy(mu) + c);
        }
    }
    throw std::logic_error("rate_spectral: unreachable");
}

Rate rate_gas(const GridMeasure& mu, double p, double beta) {
    mu.validate();
    const ModelConstants mc = model_constants(p, beta);
    return Rate::finite(-0.5 * beta * grid_log_energy(mu) + mu.moment(p) + mc.free_energy);
}

Rate rate_pair(const GridMeasure& mu, double m, double p, double beta) {
    mu.validate();
    if (!(m >= 0.0)) throw std::domain_error("rate_pair: m must be >= 0");
    const ModelConstants mc = model_constants(p, beta);
    if (m < mu.moment(p)) return Rate::infinity();
    return Rate::finite(-0.5 * beta * grid_log_energy(mu) + m + mc.free_energy);
}

Rate beta_rate(double y, double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || (a == 0.0 && b == 0.0))
        throw std::domain_error("beta_rate: need a, b >= 0, not both zero");
    if (a > 0.0 && b > 0.0) {
        if (!(y > 0.0 && y < 1.0)) return Rate::infinity();
        return Rate::finite(-a * std::log(y / a) - b * std::log((1.0 - y) / b) -
                            (a + b) * std::log(a + b));
    }
    if (b == 0.0) {
        if (!(y > 0.0 && y <= 1.0)) return Rate::infinity();
        return Rate::finite(-a * std::log(y));
    }
    if (!(y >= 0.0 && y < 1.0)) return Rate::infinity();
    return Rate::finite(-b * std::log(1.0 - y));
}

}  // namespace schatten
