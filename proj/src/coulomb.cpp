#include "schatten/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "schatten/special.hpp"

namespace schatten {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSigmaFloor = 1e-3;  // keeps p < 1 chains from freezing at the cusp
constexpr double kSigmaCap = 1e3;
constexpr double kTargetAcceptance = 0.3;

double potential(double x, const GasConfig& cfg) {
    return cfg.ensemble == Ensemble::eigenvalue ? std::pow(std::fabs(x), cfg.p)
                                                : std::pow(x, 0.5 * cfg.p);
}

}  // namespace

void GasConfig::validate() const {
    if (n < 1) throw std::invalid_argument("GasConfig: n must be >= 1");
    if (!std::isfinite(p) || !(p > 0.0)) throw std::invalid_argument("GasConfig: bad p");
    if (!std::isfinite(beta) || !(beta > 0.0)) throw std::invalid_argument("GasConfig: bad beta");
    if (sweeps < 1) throw std::invalid_argument("GasConfig: sweeps must be >= 1");
    if (burn_in < 0 || burn_in >= sweeps)
        throw std::invalid_argument("GasConfig: need 0 <= burn_in < sweeps");
    if (thin < 1) throw std::invalid_argument("GasConfig: thin must be >= 1");
    if (!(proposal_sigma > 0.0)) throw std::invalid_argument("GasConfig: bad proposal_sigma");
}

double log_density_unnormalized(std::span<const double> state, const GasConfig& config) {
    if (static_cast<int>(state.size()) != config.n)
        throw std::invalid_argument("log_density_unnormalized: state has wrong dimension");
    double logp = 0.0;
    for (double x : state) {
        if (config.ensemble == Ensemble::singular) {
            if (!(x > 0.0)) return -kInf;
            logp += (0.5 * config.beta - 1.0) * std::log(x);
        }
        logp -= config.n * potential(x, config);
    }
    for (std::size_t i = 0; i < state.size(); ++i)
        for (std::size_t j = i + 1; j < state.size(); ++j) {
            if (state[i] == state[j]) return -kInf;
            logp += config.beta * std::log(std::fabs(state[i] - state[j]));
        }
    return logp;
}

namespace {

// Log-density change when coordinate i moves to y; -inf encodes rejection.
double move_delta(const std::vector<double>& x, int i, double y, const GasConfig& cfg) {
    double d = 0.0;
    if (cfg.ensemble == Ensemble::singular) {
        if (!(y > 0.0)) return -kInf;
        d += (0.5 * cfg.beta - 1.0) * (std::log(y) - std::log(x[i]));
    }
    d -= cfg.n * (potential(y, cfg) - potential(x[i], cfg));
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
        if (j == i) continue;
        if (y == x[j]) return -kInf;
        d += cfg.beta * (std::log(std::fabs(y - x[j])) - std::log(std::fabs(x[i] - x[j])));
    }
    return d;
}

std::vector<double> initial_state(const GasConfig& cfg, Philox& rng) {
    const ModelConstants mc = model_constants(cfg.p, cfg.beta);
    const LimitLaw law(Exponent::finite(cfg.p), Ensemble::eigenvalue);
    std::vector<double> x(cfg.n);
    if (cfg.ensemble == Ensemble::eigenvalue) {
        const double scale = mc.gas_edge / mc.law_edge;
        for (auto& v : x) v = scale * law.quantile(rng.uniform01());
    } else {
        // The singular gas bulk is the square of an Ullman bulk with edge
        // 2^{1/p} r_p (the interaction doubles under symmetrization).
        const double scale = std::pow(2.0, 1.0 / cfg.p) * mc.gas_edge / mc.law_edge;
        for (auto& v : x) {
            const double u = scale * law.quantile(rng.uniform01());
            v = std::max(u * u, 1e-12);
        }
    }
    return x;
}

}  // namespace

GasChain mcmc_run(const GasConfig& config) {
    config.validate();
    Philox rng = Philox::stream(config.seed, 0);
    std::vector<double> x = initial_state(config, rng);

    GasChain chain;
    chain.config = config;
    const int kept = (config.sweeps - config.burn_in) / std::max(config.thin, 1);
    chain.states.reserve(std::max(kept, 0));

    double sigma = config.proposal_sigma;
    long accepted_window = 0, proposed_window = 0;
    long accepted_main = 0, proposed_main = 0;
    constexpr int kAdaptWindow = 50;

    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
        const bool warming = sweep < config.burn_in;
        for (int i = 0; i < config.n; ++i) {
            const double y = x[i] + sigma * rng.normal();
            const double delta = move_delta(x, i, y, config);
            const bool accept = delta >= 0.0 || std::log(rng.uniform01()) < delta;
            if (accept) x[i] = y;
            if (warming) {
                accepted_window += accept;
                ++proposed_window;
            } else {
                accepted_main += accept;
                ++proposed_main;
            }
        }
        if (warming && (sweep + 1) % kAdaptWindow == 0 && proposed_window > 0) {
            const double rate = static_cast<double>(accepted_window) / proposed_window;
            sigma = std::clamp(sigma * std::exp(rate - kTargetAcceptance), kSigmaFloor, kSigmaCap);
            accepted_window = proposed_window = 0;
        }
        if (!warming && (sweep - config.burn_in + 1) % config.thin == 0)
            chain.states.push_back(x);
    }
    chain.acceptance_rate =
        proposed_main > 0 ? static_cast<double>(accepted_main) / proposed_main : 0.0;
    return chain;
}

namespace {

// Smallest radius whose per-particle proposal tail mass stays below
// tol/n; shape is 1/p (eigenvalue) or beta/p (singular).
double truncation_radius(const GasConfig& cfg) {
    const double shape =
        cfg.ensemble == Ensemble::eigenvalue ? 1.0 / cfg.p : cfg.beta / cfg.p;
    const double tol = 1e-12 / cfg.n;
    const auto tail = [&](double r) {
        const double t = cfg.ensemble == Ensemble::eigenvalue ? std::pow(r, cfg.p)
                                                              : std::pow(r, 0.5 * cfg.p);
        return gamma_tail_q(shape, cfg.n * t);
    };
    double hi = 1.0;
    while (tail(hi) > tol) hi *= 2.0;
    double lo = 0.5 * hi;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > tol ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

std::vector<std::vector<double>> rejection_sample(const GasConfig& config, std::size_t count,
                                                  Philox& rng) {
    config.validate();
    if (config.n > 3)
        throw std::invalid_argument("rejection_sample: n > 3 unsupported (acceptance degenerates)");
    const double R = truncation_radius(config);
    const double pairs = 0.5 * config.beta * config.n * (config.n - 1.0);
    const double log_bound =
        pairs * std::log(config.ensemble == Ensemble::eigenvalue ? 2.0 * R : R);

    const auto draw_coord = [&]() {
        if (config.ensemble == Ensemble::eigenvalue) {
            // |x| = G^{1/p}, G ~ Gamma(1/p, n) has density prop. to e^{-n|x|^p}
            for (;;) {
                const double g = rng.gamma(1.0 / config.p, static_cast<double>(config.n));
                const double v = std::pow(g, 1.0 / config.p);
                if (v <= R) return rng.rademacher() * v;
            }
        }
        // x = G^{2/p}, G ~ Gamma(beta/p, n): density prop. to
        // x^{beta/2-1} e^{-n x^{p/2}}, the full single-particle factor.
        for (;;) {
            const double g = rng.gamma(config.beta / config.p, static_cast<double>(config.n));
            const double v = std::pow(g, 2.0 / config.p);
            if (v <= R) return v;
        }
    };

    std::vector<std::vector<double>> out;
    out.reserve(count);
    std::vector<double> x(config.n);
    while (out.size() < count) {
        for (auto& v : x) v = draw_coord();
        double log_vdm = 0.0;
        for (int i = 0; i < config.n && log_vdm > -kInf; ++i)
            for (int j = i + 1; j < config.n; ++j) {
                if (x[i] == x[j]) {
                    log_vdm = -kInf;
                    break;
                }
                log_vdm += config.beta * std::log(std::fabs(x[i] - x[j]));
            }
        if (log_vdm == -kInf) continue;
        if (std::log(rng.uniform01()) < log_vdm - log_bound) out.push_back(x);
    }
    return out;
}

void save_gas_config(std::ostream& os, const GasConfig& config) {
    os.precision(17);
    os << "n=" << config.n << '\n'
       << "p=" << config.p << '\n'
       << "beta=" << config.beta << '\n'
       << "ensemble=" << (config.ensemble == Ensemble::eigenvalue ? "eigen" : "singular") << '\n'
       << "sweeps=" << config.sweeps << '\n'
       << "burn_in=" << config.burn_in << '\n'
       << "thin=" << config.thin << '\n'
       << "proposal_sigma=" << config.proposal_sigma << '\n'
       << "seed=" << config.seed << '\n';
}

GasConfig load_gas_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("gas config: malformed line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    GasConfig cfg;
    const auto want = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("gas config: missing key ") + key);
        return it->second;
    };
    cfg.n = std::stoi(want("n"));
    cfg.p = std::stod(want("p"));
    cfg.beta = std::stod(want("beta"));
    const std::string ens = want("ensemble");
    if (ens == "eigen")
        cfg.ensemble = Ensemble::eigenvalue;
    else if (ens == "singular")
        cfg.ensemble = Ensemble::singular;
    else
        throw std::invalid_argument("gas config: unknown ensemble '" + ens + "'");
    cfg.sweeps = std::stoi(want("sweeps"));
    cfg.burn_in = std::stoi(want("burn_in"));
    cfg.thin = std::stoi(want("thin"));
    cfg.proposal_sigma = std::stod(want("proposal_sigma"));
    cfg.seed = std::stoull(want("seed"));
    cfg.validate();
    return cfg;
}

}  // namespace schatten
