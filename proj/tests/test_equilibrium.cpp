#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "schatten/equilibrium.hpp"
#include "schatten/rng.hpp"
#include "schatten/special.hpp"
#include "testutil.hpp"

using namespace schatten;

namespace {

// Brute-force reference: enumerate every pure feasible atom and every
// saturating pair.
double lmo_brute_force(const std::vector<double>& g, const std::vector<double>& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (c[i] <= 1.0) best = std::min(best, g[i]);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(c[i] < 1.0)) continue;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!(c[j] > 1.0)) continue;
            const double th = (c[j] - 1.0) / (c[j] - c[i]);
            best = std::min(best, th * g[i] + (1.0 - th) * g[j]);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("linear oracle on hand cases") {
    {
        // constraint inactive: the pure argmin wins
        const std::vector<double> g{3.0, -1.0, 2.0};
        const std::vector<double> c{0.2, 0.9, 0.5};
        const auto v = fw_linear_oracle(g, c);
        CHECK(v.i == 1);
        CHECK(v.j == -1);
        CHECK(v.wi == 1.0);
        CHECK(v.objective == doctest::Approx(-1.0));
    }
    {
        // saturating blend beats the feasible atom
        const std::vector<double> g{0.0, -1.0};
        const std::vector<double> c{0.5, 2.0};
        const auto v = fw_linear_oracle(g, c);
        CHECK(v.i == 0);
        CHECK(v.j == 1);
        CHECK(v.wi == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(v.wj == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(v.objective == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
        CHECK(v.wi + v.wj == 1.0);
        CHECK(std::fabs(v.wi * c[v.i] + v.wj * c[v.j] - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(
        fw_linear_oracle(std::vector<double>{1.0}, std::vector<double>{2.0}),
        std::invalid_argument);
}

TEST_CASE("linear oracle equals brute force on random instances") {
    Philox rng(808, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 40);
        std::vector<double> g(n), c(n);
        bool any_feasible = false;
        for (int i = 0; i < n; ++i) {
            g[i] = rng.normal();
            c[i] = 2.5 * rng.uniform01();
            any_feasible = any_feasible || c[i] <= 1.0;
        }
        if (!any_feasible) c[0] = 0.5;
        const auto v = fw_linear_oracle(g, c);
        CHECK(v.objective == doctest::Approx(lmo_brute_force(g, c)).epsilon(1e-12));
        // the returned vertex is feasible and matches its own objective
        double cw = v.wi * c[v.i], gw = v.wi * g[v.i], mass = v.wi;
        if (v.j >= 0) {
            cw += v.wj * c[v.j];
            gw += v.wj * g[v.j];
            mass += v.wj;
        }
        CHECK(mass == 1.0);
        CHECK(cw <= 1.0 + 1e-12);
        CHECK(gw == doctest::Approx(v.objective).epsilon(1e-12));
    }
}

TEST_CASE("solver recovers the moment-normalized law at p = 2") {
    SolveOptions opt;
    opt.gap_tol = 1e-5;
    opt.trace_every = 500;
    const auto rep = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 256, opt);
    CHECK(rep.fw_gap <= 1e-5);
    CHECK(rep.objective <= 5e-3);
    CHECK(rep.objective >= -1e-6);
    CHECK(rep.moment <= 1.0 + 1e-9);
    const LimitLaw law(Exponent::finite(2.0), Ensemble::eigenvalue);
    CHECK(wasserstein1_grid(rep.minimizer, law) <= 1e-2);
    // exact line search descends monotonically (tiny slack for roundoff)
    for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
        CHECK(rep.objective_trace[i] <= rep.objective_trace[i - 1] + 1e-10);
}

TEST_CASE("away steps reach the same minimizer faster") {
    SolveOptions plain;
    plain.gap_tol = 1e-5;
    const auto a = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 256, plain);
    SolveOptions away = plain;
    away.away_steps = true;
    const auto b = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 256, away);
    CHECK(b.fw_gap <= 1e-5);
    CHECK(b.iterations <= a.iterations);
    CHECK(std::fabs(a.objective - b.objective) < 1e-4);
}

TEST_CASE("gap certifies suboptimality") {
    SolveOptions loose;
    loose.gap_tol = 1e-3;
    SolveOptions tight;
    tight.gap_tol = 1e-7;
    tight.away_steps = true;
    const auto lo = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 128, loose);
    const auto hi = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 128, tight);
    CHECK(lo.objective - hi.objective <= lo.fw_gap + 1e-12);
    CHECK(lo.objective + 1e-12 >= hi.objective);
}

TEST_CASE("moment row saturates for finite p") {
    SolveOptions opt;
    opt.gap_tol = 2e-7;
    opt.away_steps = true;
    const auto rep = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 256, opt);
    CHECK(std::fabs(rep.moment - 1.0) <= 1e-6);
}

TEST_CASE("p = infinity variant recovers the arcsine law") {
    SolveOptions opt;
    opt.gap_tol = 1e-5;
    const auto rep = solve_equilibrium(Exponent::infinite(), 1.0, 0.0, 256, opt);
    CHECK(rep.fw_gap <= 1e-5);
    CHECK(rep.minimizer.left == doctest::Approx(-1.0));
    CHECK(rep.minimizer.right() == doctest::Approx(1.0));
    const LimitLaw arcs(Exponent::infinite(), Ensemble::eigenvalue);
    CHECK(wasserstein1_grid(rep.minimizer, arcs) <= 1e-2);
    CHECK(rep.objective <= 5e-3);
}

TEST_CASE("singular variant recovers the squared singular law") {
    SolveOptions opt;
    opt.gap_tol = 1e-5;
    opt.away_steps = true;
    const auto rep =
        solve_equilibrium(Exponent::finite(2.0), 2.0, 4.4, 256, opt, Ensemble::singular);
    CHECK(rep.fw_gap <= 1e-5);
    CHECK(rep.objective <= 1e-2);
    CHECK(rep.minimizer.left == 0.0);
    // quantile comparison against the pushforward of the singular law under squaring
    const LimitLaw eta(Exponent::finite(2.0), Ensemble::singular, 8192);
    std::vector<double> cum(rep.minimizer.cells() + 1, 0.0);
    for (int i = 0; i < rep.minimizer.cells(); ++i)
        cum[i + 1] = cum[i] + rep.minimizer.weights[i];
    double w1 = 0.0;
    const int probes = 2000;
    for (int k = 0; k < probes; ++k) {
        const double u = (k + 0.5) / probes;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const int i = std::max<int>(1, static_cast<int>(it - cum.begin())) - 1;
        const double frac = (u - cum[i]) / std::max(cum[i + 1] - cum[i], 1e-300);
        const double q_grid = rep.minimizer.left + (i + frac) * rep.minimizer.width;
        const double q_law = eta.quantile(u);
        w1 += std::fabs(q_grid - q_law * q_law);
    }
    CHECK(w1 / probes <= 2e-2);
}

TEST_CASE("refining the grid moves the minimizer by less than three cells") {
    SolveOptions opt;
    opt.gap_tol = 1e-5;
    opt.away_steps = true;
    const auto a = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 128, opt);
    const auto b = solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 256, opt);
    // W1 between the two grid measures through their CDFs on the fine grid
    double w1 = 0.0;
    {
        std::vector<double> ca(a.minimizer.cells() + 1, 0.0), cb(b.minimizer.cells() + 1, 0.0);
        for (int i = 0; i < a.minimizer.cells(); ++i) ca[i + 1] = ca[i] + a.minimizer.weights[i];
        for (int i = 0; i < b.minimizer.cells(); ++i) cb[i + 1] = cb[i] + b.minimizer.weights[i];
        const int steps = 20000;
        const double lo = a.minimizer.left, hi = a.minimizer.right();
        const double h = (hi - lo) / steps;
        const auto eval = [](const GridMeasure& m, const std::vector<double>& cum, double x) {
            if (x <= m.left) return 0.0;
            if (x >= m.right()) return 1.0;
            const double pos = (x - m.left) / m.width;
            const int i = std::min(static_cast<int>(pos), m.cells() - 1);
            return cum[i] + (pos - i) * m.weights[i];
        };
        double prev = 0.0;
        for (int k = 1; k <= steps; ++k) {
            const double x = lo + k * h;
            const double cur = std::fabs(eval(a.minimizer, ca, x) - eval(b.minimizer, cb, x));
            w1 += 0.5 * (prev + cur) * h;
            prev = cur;
        }
    }
    CHECK(w1 <= 3.0 * a.minimizer.width);
}

TEST_CASE("domain too small for the support is rejected") {
    CHECK_THROWS_AS(solve_equilibrium(Exponent::finite(2.0), 2.0, 1.5, 128, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_equilibrium(Exponent::finite(2.0), 2.0, 3.0, 128, {},
                                      Ensemble::singular),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_equilibrium(Exponent::finite(2.0), 2.0, 2.2, 16, {}),
                    std::invalid_argument);
}
