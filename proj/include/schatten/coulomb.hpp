#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "schatten/rng.hpp"
#include "schatten/ullman.hpp"

namespace schatten {

// Configuration of the n-particle gas chain.  beta is any positive real; the
// matrix-ensemble cases are beta in {1, 2, 4}.
struct GasConfig {
    int n = 1;
    double p = 2.0;
    double beta = 2.0;
    Ensemble ensemble = Ensemble::eigenvalue;
    int sweeps = 2000;
    int burn_in = 500;
    int thin = 1;
    double proposal_sigma = 0.5;
    uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct GasChain {
    std::vector<std::vector<double>> states;  // post burn-in, thinned
    double acceptance_rate = 0.0;             // post burn-in
    GasConfig config;
};

// Log of the unnormalized gas density.
//   eigenvalue: -n sum |x_i|^p          + beta sum_{i<j} log|x_i - x_j|
//   singular:   -n sum x_i^{p/2}        + beta sum_{i<j} log|x_i - x_j|
//                                       + (beta/2 - 1) sum log x_i
// Coincident coordinates (and non-positive singular coordinates) give
// -infinity, which is a value, not an error.
double log_density_unnormalized(std::span<const double> state, const GasConfig& config);

// Single-site random-walk Metropolis.  The proposal scale adapts toward ~0.3
// acceptance during burn-in and is frozen afterwards; the chain starts from
// iid draws of the equilibrium bulk.  Bit-for-bit reproducible per seed.
GasChain mcmc_run(const GasConfig& config);

// Exact iid samples from the gas density restricted to the box [-R,R]^n
// (eigenvalue) or (0,R]^n (singular), with R set so the neglected
// potential-only tail mass is below 1e-12.  Only n <= 3 is supported: the
// acceptance rate of the Vandermonde bound degenerates beyond that.
std::vector<std::vector<double>> rejection_sample(const GasConfig& config, std::size_t count,
                                                  Philox& rng);

// Plain key=value round-trip of the configuration.
void save_gas_config(std::ostream& os, const GasConfig& config);
GasConfig load_gas_config(std::istream& is);

}  // namespace schatten
