#include "schatten/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "schatten/special.hpp"

namespace schatten {

namespace {

double abs_power_primitive(double x, double q) {
    const double v = std::pow(std::fabs(x), q + 1.0) / (q + 1.0);
    return x >= 0.0 ? v : -v;
}

// Linear-minimization oracle over {w >= 0, sum w = 1, <c,w> <= 1} with the
// c-sorted order precomputed once (c never changes across solver iterations).
class MomentOracle {
public:
    explicit MomentOracle(std::vector<double> c) : c_(std::move(c)) {
        order_.resize(c_.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::sort(order_.begin(), order_.end(), [&](int a, int b) { return c_[a] < c_[b]; });
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] <= 1.0) feasible_.push_back(static_cast<int>(k));
        if (feasible_.empty())
            throw std::invalid_argument("fw_linear_oracle: feasible set is empty");
        any_infeasible_ = feasible_.size() < c_.size();
    }

    LinearVertex minimize(std::span<const double> g) const {
        LinearVertex best;
        best.i = feasible_.front();
        for (int k : feasible_)
            if (g[k] < g[best.i]) best.i = k;
        best.objective = g[best.i];
        if (any_infeasible_) blend_candidate(g, best);
        return best;
    }

private:
    // The optimal saturating blend is the lower convex hull of {(c_k, g_k)}
    // evaluated at abscissa 1 (realized by the hull edge spanning c = 1).
    void blend_candidate(std::span<const double> g, LinearVertex& best) const {
        hull_.clear();
        std::size_t k = 0;
        while (k < order_.size()) {
            int pick = order_[k];  // collapse ties in c to the smallest g
            std::size_t k2 = k + 1;
            while (k2 < order_.size() && c_[order_[k2]] == c_[pick]) {
                if (g[order_[k2]] < g[pick]) pick = order_[k2];
                ++k2;
            }
            k = k2;
            while (hull_.size() >= 2 &&
                   !right_turn(g, hull_[hull_.size() - 2], hull_.back(), pick))
                hull_.pop_back();
            hull_.push_back(pick);
        }
        for (std::size_t t = 0; t + 1 < hull_.size(); ++t) {
            const int i = hull_[t], j = hull_[t + 1];
            if (c_[i] < 1.0 && c_[j] > 1.0) {
                const double th = (c_[j] - 1.0) / (c_[j] - c_[i]);
                const double val = th * g[i] + (1.0 - th) * g[j];
                if (val < best.objective) best = LinearVertex{i, j, th, 1.0 - th, val};
                break;  // only one hull edge crosses c = 1
            }
        }
    }

    bool right_turn(std::span<const double> g, int a, int b, int c) const {
        return (c_[b] - c_[a]) * (g[c] - g[a]) - (g[b] - g[a]) * (c_[c] - c_[a]) > 0.0;
    }

    std::vector<double> c_;
    std::vector<int> order_;
    std::vector<int> feasible_;
    bool any_infeasible_ = false;
    mutable std::vector<int> hull_;
};

struct ProblemGeometry {
    double left;
    double width;
    double moment_exp;     // 0 when the moment row is absent (p = inf)
    double constant_term;  // additive constant of the rate function
};

ProblemGeometry make_geometry(const Exponent& p, double beta, double L, int cells,
                              Ensemble ensemble) {
    if (cells < 64) throw std::invalid_argument("solve_equilibrium: need at least 64 cells");
    if (!(beta > 0.0)) throw std::domain_error("solve_equilibrium: beta must be positive");
    if (p.is_infinite()) {
        if (ensemble != Ensemble::eigenvalue)
            throw std::invalid_argument("solve_equilibrium: p = inf solves the eigenvalue case");
        return {-1.0, 2.0 / cells, 0.0, -0.5 * beta * std::log(2.0)};
    }
    const ModelConstants mc = model_constants(p.value(), beta);
    if (ensemble == Ensemble::eigenvalue) {
        if (!(L >= mc.law_edge))
            throw std::invalid_argument("solve_equilibrium: domain smaller than the law support");
        return {-L, 2.0 * L / cells, p.value(), mc.rate_shift};
    }
    const double edge2 = mc.law_edge * mc.law_edge;  // squared singular values
    if (!(L >= edge2))
        throw std::invalid_argument("solve_equilibrium: domain smaller than the law support");
    return {0.0, L / cells, 0.5 * p.value(), 2.0 * mc.rate_shift};
}

double vertex_dot(const LinearVertex& v, const std::vector<double>& dense) {
    double s = v.wi * dense[v.i];
    if (v.j >= 0) s += v.wj * dense[v.j];
    return s;
}

double vertex_quad(const LinearVertex& a, const LinearVertex& b, const LogKernelMatrix& k) {
    double s = a.wi * b.wi * k(a.i, b.i);
    if (b.j >= 0) s += a.wi * b.wj * k(a.i, b.j);
    if (a.j >= 0) s += a.wj * b.wi * k(a.j, b.i);
    if (a.j >= 0 && b.j >= 0) s += a.wj * b.wj * k(a.j, b.j);
    return s;
}

}  // namespace

LinearVertex fw_linear_oracle(std::span<const double> gradient, std::span<const double> c) {
    if (gradient.size() != c.size() || gradient.empty())
        throw std::invalid_argument("fw_linear_oracle: size mismatch");
    MomentOracle oracle(std::vector<double>(c.begin(), c.end()));
    return oracle.minimize(gradient);
}

SolveReport solve_equilibrium(const Exponent& p, double beta, double L, int cells,
                              const SolveOptions& options, Ensemble ensemble) {
    const ProblemGeometry geo = make_geometry(p, beta, L, cells, ensemble);
    const LogKernelMatrix K = LogKernelMatrix::build(geo.left, geo.width, cells);

    std::vector<double> c(cells, 0.0);
    if (geo.moment_exp > 0.0)
        for (int i = 0; i < cells; ++i) {
            const double a = geo.left + i * geo.width;
            c[i] = (abs_power_primitive(a + geo.width, geo.moment_exp) -
                    abs_power_primitive(a, geo.moment_exp)) /
                   geo.width;
        }
    MomentOracle oracle(c);

    // Start from uniform mass on the cells inside [-1,1]: each such cell is a
    // feasible pure atom (|x|^q <= 1 there), so the iterate and its active
    // decomposition are strictly feasible.  Uniform mass on the whole domain
    // can violate the moment row.
    std::vector<int> start_cells;
    for (int i = 0; i < cells; ++i) {
        const double lo = geo.left + i * geo.width;
        if (std::max(std::fabs(lo), std::fabs(lo + geo.width)) <= 1.0)
            start_cells.push_back(i);
    }
    if (start_cells.empty()) {
        const int i0 = std::clamp(static_cast<int>(-geo.left / geo.width), 0, cells - 1);
        if (geo.moment_exp > 0.0 && c[i0] > 1.0)
            throw std::invalid_argument("solve_equilibrium: no feasible start cell");
        start_cells.push_back(i0);
    }
    std::vector<double> w(cells, 0.0);
    for (int i : start_cells) w[i] = 1.0 / start_cells.size();

    std::vector<double> kw = K.multiply(w);
    double quad = std::inner_product(w.begin(), w.end(), kw.begin(), 0.0);

    // Active-vertex decomposition (used by the away-step variant).  The start
    // window cells are feasible pure atoms, so the decomposition is exact.
    struct ActiveVertex {
        LinearVertex v;
        double alpha;
    };
    std::vector<ActiveVertex> active;
    std::unordered_map<long, std::size_t> active_pos;
    const auto vertex_key = [cells](const LinearVertex& v) {
        return static_cast<long>(v.i) * cells + (v.j >= 0 ? v.j : v.i);
    };
    if (options.away_steps)
        for (int i : start_cells) {
            LinearVertex v;
            v.i = i;
            active_pos[vertex_key(v)] = active.size();
            active.push_back({v, 1.0 / start_cells.size()});
        }

    std::vector<double> neg(cells);
    std::vector<double> trace;
    double gap = std::numeric_limits<double>::infinity();
    long it = 0;
    for (; it < options.max_iter; ++it) {
        if (options.trace_every > 0 && it % options.trace_every == 0)
            trace.push_back(-0.5 * beta * quad + geo.constant_term);
        for (int i = 0; i < cells; ++i) neg[i] = -kw[i];  // gradient / beta
        const LinearVertex s = oracle.minimize(neg);
        const double s_kw = -s.objective;
        gap = beta * (s_kw - quad);
        if (gap <= options.gap_tol) break;

        bool do_away = false;
        std::size_t away_pos = 0;
        double away_kw = 0.0;
        if (options.away_steps && !active.empty()) {
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < active.size(); ++a) {
                const double v_kw = vertex_dot(active[a].v, kw);
                if (v_kw < worst) {
                    worst = v_kw;
                    away_pos = a;
                }
            }
            away_kw = worst;
            do_away = (quad - away_kw) > (s_kw - quad) && active[away_pos].alpha < 1.0;
        }

        if (!do_away) {
            const double s_ks = vertex_quad(s, s, K);
            const double d_kw = s_kw - quad;
            const double d_kd = s_ks - 2.0 * s_kw + quad;
            const double gamma =
                d_kd < 0.0 ? std::min(1.0, std::max(0.0, d_kw / (-d_kd))) : 1.0;
            for (auto& v : w) v *= (1.0 - gamma);
            w[s.i] += gamma * s.wi;
            if (s.j >= 0) w[s.j] += gamma * s.wj;
            for (int i = 0; i < cells; ++i) {
                double ks_i = s.wi * K(i, s.i);
                if (s.j >= 0) ks_i += s.wj * K(i, s.j);
                kw[i] = (1.0 - gamma) * kw[i] + gamma * ks_i;
            }
            quad = (1.0 - gamma) * (1.0 - gamma) * quad + 2.0 * gamma * (1.0 - gamma) * s_kw +
                   gamma * gamma * s_ks;
            if (options.away_steps) {
                if (gamma == 1.0) {
                    active.clear();
                    active_pos.clear();
                } else {
                    for (auto& av : active) av.alpha *= (1.0 - gamma);
                }
                auto [pos, inserted] = active_pos.try_emplace(vertex_key(s), active.size());
                if (inserted)
                    active.push_back({s, gamma});
                else
                    active[pos->second].alpha += gamma;
            }
        } else {
            const ActiveVertex av = active[away_pos];
            const double v_kv = vertex_quad(av.v, av.v, K);
            const double d_kw = quad - away_kw;
            const double d_kd = quad - 2.0 * away_kw + v_kv;
            const double gamma_max = av.alpha / (1.0 - av.alpha);
            const double gamma =
                d_kd < 0.0 ? std::min(gamma_max, std::max(0.0, d_kw / (-d_kd))) : gamma_max;
            for (auto& v : w) v *= (1.0 + gamma);
            w[av.v.i] = std::max(w[av.v.i] - gamma * av.v.wi, 0.0);
            if (av.v.j >= 0) w[av.v.j] = std::max(w[av.v.j] - gamma * av.v.wj, 0.0);
            for (int i = 0; i < cells; ++i) {
                double kv_i = av.v.wi * K(i, av.v.i);
                if (av.v.j >= 0) kv_i += av.v.wj * K(i, av.v.j);
                kw[i] = (1.0 + gamma) * kw[i] - gamma * kv_i;
            }
            quad = (1.0 + gamma) * (1.0 + gamma) * quad - 2.0 * gamma * (1.0 + gamma) * away_kw +
                   gamma * gamma * v_kv;
            for (auto& a : active) a.alpha *= (1.0 + gamma);
            active[away_pos].alpha -= gamma;
            if (active[away_pos].alpha <= 1e-15) {
                active_pos.erase(vertex_key(av.v));
                if (away_pos != active.size() - 1) {
                    active[away_pos] = active.back();
                    active_pos[vertex_key(active[away_pos].v)] = away_pos;
                }
                active.pop_back();
            }
        }

        if ((it + 1) % options.refresh_every == 0) {
            double mass = 0.0;
            for (auto& v : w) {
                v = std::max(v, 0.0);
                mass += v;
            }
            for (auto& v : w) v /= mass;
            kw = K.multiply(w);
            quad = std::inner_product(w.begin(), w.end(), kw.begin(), 0.0);
        }
    }

    SolveReport report;
    report.minimizer = GridMeasure{geo.left, geo.width, w};
    double mass = 0.0;
    for (auto& v : report.minimizer.weights) {
        v = std::max(v, 0.0);
        mass += v;
    }
    for (auto& v : report.minimizer.weights) v /= mass;
    report.minimizer.validate();
    report.objective = -0.5 * beta * quad + geo.constant_term;
    report.fw_gap = std::max(gap, 0.0);
    report.iterations = it;
    report.moment = geo.moment_exp > 0.0
                        ? std::inner_product(report.minimizer.weights.begin(),
                                             report.minimizer.weights.end(), c.begin(), 0.0)
                        : 1.0 - report.minimizer.mass_outside(-1.0, 1.0);
    report.objective_trace = std::move(trace);
    return report;
}

}  // namespace schatten
