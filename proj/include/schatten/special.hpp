#pragma once

#include "schatten/exponent.hpp"

namespace schatten {

// Closed-form scalars attached to a (p, beta) pair.  All identities between
// them are exact; see the invariants exercised in the unit tests.
struct ModelConstants {
    double p;
    double beta;
    double law_edge;     // b_p: support endpoint of the moment-normalized limit law
    double h_moment;     // alpha_p: p-th absolute moment of the unit-edge density h_p
    double gas_edge;     // r_p: support endpoint of the gas equilibrium measure
    double free_energy;  // B: limit of n^-2 log of the gas normalization constant
    double rate_shift;   // C: additive constant of the spectral rate function
};

// Evaluates every constant from its closed form.  Gamma-function arithmetic is
// done in log space so that p up to ~1e6 stays finite.
ModelConstants model_constants(double p, double beta);

// C(p, beta) alone, including the p = infinity case -(beta/2) log 2.
double rate_constant(const Exponent& p, double beta);

// Dimension exponents of the radial factors U^{1/ell} (self-adjoint ball) and
// U^{1/(n+m)} (singular-value ball).
struct GasDims {
    double ell;  // beta n(n-1)/2 + beta n
    double m;    // beta n(n-1)/2 + n(beta/2 - 1)
};
GasDims gas_dims(int n, double beta);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a).
// Series/continued-fraction evaluation, absolute accuracy ~1e-14.
double gamma_tail_q(double a, double x);

}  // namespace schatten
