#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "schatten/coulomb.hpp"
#include "schatten/empirical.hpp"
#include "schatten/special.hpp"
#include "testutil.hpp"

using namespace schatten;

namespace {

std::vector<double> pooled(const GasChain& chain) {
    std::vector<double> out;
    out.reserve(chain.states.size() * chain.config.n);
    for (const auto& s : chain.states) out.insert(out.end(), s.begin(), s.end());
    return out;
}

}  // namespace

TEST_CASE("config validation") {
    GasConfig cfg;
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GasConfig{};
    cfg.burn_in = cfg.sweeps;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GasConfig{};
    cfg.thin = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GasConfig{};
    cfg.proposal_sigma = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GasConfig{};
    CHECK_THROWS_AS(mcmc_run([&] {
                        auto c = cfg;
                        c.p = -2.0;
                        return c;
                    }()),
                    std::invalid_argument);
}

TEST_CASE("log density values") {
    GasConfig cfg;
    cfg.n = 1;
    cfg.p = 2.0;
    cfg.beta = 2.0;
    const std::vector<double> x1{1.3};
    CHECK(log_density_unnormalized(x1, cfg) == doctest::Approx(-1.69).epsilon(1e-14));

    cfg.n = 2;
    const std::vector<double> x2{0.0, 1.0};
    CHECK(log_density_unnormalized(x2, cfg) == doctest::Approx(-2.0).epsilon(1e-14));

    GasConfig sg;
    sg.n = 2;
    sg.p = 2.0;
    sg.beta = 1.0;
    sg.ensemble = Ensemble::singular;
    const std::vector<double> s2{1.0, 4.0};
    // -2 (1 + 4) + log 3 - (1/2)(log 1 + log 4)
    CHECK(log_density_unnormalized(s2, sg) ==
          doctest::Approx(-10.0 + std::log(3.0) - 0.5 * std::log(4.0)).epsilon(1e-14));
    CHECK(log_density_unnormalized(s2, sg) == doctest::Approx(-9.594534891891835));

    // exchangeability is exact
    const std::vector<double> perm{4.0, 1.0};
    CHECK(log_density_unnormalized(s2, sg) == log_density_unnormalized(perm, sg));

    // coincidence and non-positive singular coordinates give -infinity
    CHECK(std::isinf(log_density_unnormalized(std::vector<double>{1.0, 1.0}, cfg)));
    CHECK(std::isinf(log_density_unnormalized(std::vector<double>{-1.0, 2.0}, sg)));

    CHECK_THROWS_AS(log_density_unnormalized(std::vector<double>{1.0, 2.0, 3.0}, cfg),
                    std::invalid_argument);
}

TEST_CASE("chains are deterministic per seed") {
    GasConfig cfg;
    cfg.n = 4;
    cfg.sweeps = 400;
    cfg.burn_in = 100;
    cfg.thin = 5;
    cfg.seed = 2024;
    const GasChain a = mcmc_run(cfg);
    const GasChain b = mcmc_run(cfg);
    REQUIRE(a.states.size() == b.states.size());
    CHECK(a.states == b.states);
    CHECK(a.acceptance_rate == b.acceptance_rate);
    CHECK(a.states.size() == static_cast<std::size_t>((cfg.sweeps - cfg.burn_in) / cfg.thin));
}

TEST_CASE("n=1 chain reproduces the single-particle law") {
    GasConfig cfg;
    cfg.n = 1;
    cfg.p = 2.0;
    cfg.beta = 2.0;  // the interaction is empty at n=1, beta is irrelevant
    cfg.sweeps = 140000;
    cfg.burn_in = 2000;
    cfg.thin = 4;
    cfg.seed = 7;
    const GasChain chain = mcmc_run(cfg);
    const auto xs = pooled(chain);
    // stationary density prop. to e^{-x^2}: centered Gaussian, variance 1/2
    const double se = std::sqrt(0.5 / static_cast<double>(xs.size()));
    CHECK(std::fabs(testutil::mean(xs)) < 4.0 * se);
    const double var = testutil::variance(xs);
    // crude autocorrelation inflation of the variance-of-variance bound
    CHECK(std::fabs(var - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / (xs.size() / 8.0)));
    const double ks = testutil::ks_statistic(
        xs, [](double x) { return 0.5 * std::erfc(-x); });
    CHECK(ks < 0.02);
    CHECK(chain.acceptance_rate > 0.15);
    CHECK(chain.acceptance_rate < 0.5);
}

TEST_CASE("eigenvalue states stay pairwise distinct, singular states positive") {
    GasConfig cfg;
    cfg.n = 8;
    cfg.p = 1.0;
    cfg.beta = 1.0;
    cfg.sweeps = 600;
    cfg.burn_in = 200;
    cfg.thin = 2;
    cfg.seed = 99;
    for (const auto& s : mcmc_run(cfg).states) {
        auto sorted = s;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i] > sorted[i - 1]);
    }
    cfg.ensemble = Ensemble::singular;
    for (const auto& s : mcmc_run(cfg).states)
        for (double v : s) CHECK(v > 0.0);
}

TEST_CASE("p < 1 chains keep moving") {
    GasConfig cfg;
    cfg.n = 6;
    cfg.p = 0.5;
    cfg.beta = 2.0;
    cfg.sweeps = 3000;
    cfg.burn_in = 1000;
    cfg.thin = 10;
    cfg.seed = 5;
    const GasChain chain = mcmc_run(cfg);
    CHECK(chain.acceptance_rate > 0.15);
    CHECK(chain.acceptance_rate < 0.5);
    CHECK(chain.states.front() != chain.states.back());
}

TEST_CASE("rejection sampler ground truths") {
    {
        GasConfig cfg;
        cfg.n = 1;
        cfg.p = 2.0;
        cfg.beta = 2.0;
        Philox rng = Philox::stream(13, 0);
        const auto draws = rejection_sample(cfg, 20000, rng);
        std::vector<double> xs;
        for (const auto& d : draws) xs.push_back(d[0]);
        CHECK(std::fabs(testutil::mean(xs)) < 3.0 * std::sqrt(0.5 / xs.size()));
        const double ks = testutil::ks_statistic(
            xs, [](double x) { return 0.5 * std::erfc(-x); });
        CHECK(ks < 0.015);
    }
    {
        GasConfig cfg;
        cfg.n = 2;
        cfg.p = 2.0;
        cfg.beta = 2.0;
        Philox rng = Philox::stream(14, 0);
        for (const auto& d : rejection_sample(cfg, 2000, rng)) CHECK(d[0] != d[1]);
    }
    {
        GasConfig cfg;
        cfg.n = 2;
        cfg.p = 2.0;
        cfg.beta = 1.0;
        cfg.ensemble = Ensemble::singular;
        Philox rng = Philox::stream(15, 0);
        for (const auto& d : rejection_sample(cfg, 500, rng)) {
            CHECK(d[0] > 0.0);
            CHECK(d[1] > 0.0);
        }
    }
    GasConfig big;
    big.n = 4;
    Philox rng = Philox::stream(16, 0);
    CHECK_THROWS_AS(rejection_sample(big, 1, rng), std::invalid_argument);
}

TEST_CASE("rejection oracle matches the quadrature marginal at n=2") {
    // for p=2, beta=2 the coordinate marginal integrates in closed form:
    // integral over y of e^{-2(x^2+y^2)} (x-y)^2 dy  prop. to  e^{-2x^2}(x^2 + 1/4)
    const auto unnorm = [](double x) { return std::exp(-2.0 * x * x) * (x * x + 0.25); };
    const double z = testutil::tanh_sinh(unnorm, -5.0, 5.0, 1e-12);
    const auto cdf = [&](double t) {
        if (t <= -5.0) return 0.0;
        if (t >= 5.0) return 1.0;
        return testutil::tanh_sinh(unnorm, -5.0, t, 1e-10) / z;
    };
    GasConfig cfg;
    cfg.n = 2;
    cfg.p = 2.0;
    cfg.beta = 2.0;
    Philox rng = Philox::stream(23, 0);
    const auto draws = rejection_sample(cfg, 50000, rng);
    std::vector<double> xs;
    xs.reserve(2 * draws.size());
    for (const auto& d : draws) xs.insert(xs.end(), d.begin(), d.end());
    CHECK(testutil::ks_statistic(xs, cdf) < 0.01);
}

TEST_CASE("metropolis matches the rejection oracle at n=2") {
    for (double beta : {1.0, 2.0}) {
        GasConfig cfg;
        cfg.n = 2;
        cfg.p = 2.0;
        cfg.beta = beta;
        cfg.sweeps = 252000;
        cfg.burn_in = 2000;
        cfg.thin = 10;
        cfg.seed = 21;
        const auto chain_xs = pooled(mcmc_run(cfg));

        Philox rng = Philox::stream(22, static_cast<uint64_t>(beta));
        const auto draws = rejection_sample(cfg, 25000, rng);
        std::vector<double> oracle_xs;
        for (const auto& d : draws) oracle_xs.insert(oracle_xs.end(), d.begin(), d.end());

        CHECK(ks_two_sample(chain_xs, oracle_xs) < 0.02);
    }
}

TEST_CASE("bulk scaling at n=64") {
    GasConfig cfg;
    cfg.n = 64;
    cfg.p = 2.0;
    cfg.beta = 2.0;
    cfg.sweeps = 3000;
    cfg.burn_in = 1000;
    cfg.thin = 50;
    cfg.seed = 31;
    const GasChain chain = mcmc_run(cfg);
    // the empirical measure of the last state, rescaled by b_p/r_p, follows
    // the moment-normalized law
    const auto mc = model_constants(cfg.p, cfg.beta);
    std::vector<double> atoms = chain.states.back();
    for (auto& v : atoms) v *= mc.law_edge / mc.gas_edge;
    const LimitLaw law(Exponent::finite(2.0), Ensemble::eigenvalue);
    CHECK(ks_distance(EmpiricalMeasure(atoms), law) < 0.08);
}

TEST_CASE("gas config round-trips through key=value text") {
    GasConfig cfg;
    cfg.n = 12;
    cfg.p = 0.75;
    cfg.beta = 4.0;
    cfg.ensemble = Ensemble::singular;
    cfg.sweeps = 1234;
    cfg.burn_in = 56;
    cfg.thin = 7;
    cfg.proposal_sigma = 0.03125;
    cfg.seed = 0xFEEDFACEull;
    std::stringstream ss;
    save_gas_config(ss, cfg);
    const GasConfig back = load_gas_config(ss);
    CHECK(back.n == cfg.n);
    CHECK(back.p == cfg.p);
    CHECK(back.beta == cfg.beta);
    CHECK(back.ensemble == cfg.ensemble);
    CHECK(back.sweeps == cfg.sweeps);
    CHECK(back.burn_in == cfg.burn_in);
    CHECK(back.thin == cfg.thin);
    CHECK(back.proposal_sigma == cfg.proposal_sigma);
    CHECK(back.seed == cfg.seed);

    std::stringstream bad("n=2\nwhat is this\n");
    CHECK_THROWS_AS(load_gas_config(bad), std::invalid_argument);
}
