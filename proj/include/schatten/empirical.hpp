#pragma once

#include <optional>
#include <span>
#include <vector>

#include "schatten/ullman.hpp"

namespace schatten {

// n equally weighted real atoms, kept sorted ascending.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> atoms);

    const std::vector<double>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<double> atoms_;
};

// Cone-measure normalization: atoms n^{1/p} x_i / ||x||_p.  The p-th moment of
// the result is 1 up to rounding.
EmpiricalMeasure normalize_cone(std::span<const double> x, double p);

// Uniform-in-ball normalization: the cone atoms scaled by u^{1/ell} with
// ell = gas_dims(n, beta).ell, so the p-th moment equals u^{p/ell}.
EmpiricalMeasure normalize_uniform(std::span<const double> x, double u, double p, double beta);

// Squared-singular-value normalization: atoms n^{2/p} u^{1/(n+m)} x_i / ||x||_{p/2};
// pass u = nullopt for the cone variant (radial factor 1).
EmpiricalMeasure normalize_singular(std::span<const double> x, std::optional<double> u,
                                    double p, double beta);

double p_moment(const EmpiricalMeasure& mu, double p);

// Off-diagonal U-statistic for the double log integral:
//   (1/(n(n-1))) sum_{i != j} log|a_i - a_j|.
// Duplicate atoms are an error (the atomic double integral is -infinity).
double log_energy_offdiag(const EmpiricalMeasure& mu);

// Scale pushforward F_p(mu, c): atoms divided by c^{1/p}.
EmpiricalMeasure pushforward_scale(const EmpiricalMeasure& mu, double c, double p);

// Atoms mapped x -> x^2 (symmetrization inverse).
EmpiricalMeasure pushforward_square(const EmpiricalMeasure& mu);

// Atoms mapped x -> sqrt(x); requires nonnegative atoms (squared singular
// values back to singular values).
EmpiricalMeasure pushforward_sqrt(const EmpiricalMeasure& mu);

// sup |F_n - F| evaluated at the atoms.
double ks_distance(const EmpiricalMeasure& mu, const LimitLaw& law);

// Quantile-coupling W1: mean over i of |a_(i) - quantile((i-1/2)/n)|.
double wasserstein1(const EmpiricalMeasure& mu, const LimitLaw& law);

// Two-sample Kolmogorov-Smirnov statistic between pooled samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace schatten
