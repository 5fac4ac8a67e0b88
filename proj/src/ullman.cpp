#include "schatten/ullman.hpp"

#include <algorithm>
#include <cmath>

#include "schatten/quadrature.hpp"
#include "schatten/special.hpp"

namespace schatten {

namespace {

double require_finite_p(const char* who, double p) {
    if (!std::isfinite(p) || !(p > 0.0))
        throw std::domain_error(std::string(who) + ": p must be finite and positive");
    return p;
}

}  // namespace

double h_density(double p, double x) {
    require_finite_p("h_density", p);
    const double ax = std::fabs(x);
    if (ax >= 1.0) return 0.0;
    if (p == 2.0) return (2.0 / M_PI) * std::sqrt(1.0 - ax * ax);
    if (p == 1.0) {
        if (ax == 0.0) return std::numeric_limits<double>::infinity();
        return std::log((1.0 + std::sqrt(1.0 - ax * ax)) / ax) / M_PI;
    }
    if (ax == 0.0) {
        if (p <= 1.0) return std::numeric_limits<double>::infinity();
        return p / ((p - 1.0) * M_PI);
    }
    // t = ax cosh u; t^{p-1} stays in [ax^{p-1}, 1] (p>=1) so nothing overflows.
    const double umax = std::acosh(1.0 / ax);
    const double val = integrate(
        [&](double u) { return std::pow(ax * std::cosh(u), p - 1.0); }, 0.0, umax, 1e-13);
    return p / M_PI * val;
}

double h_cdf(double p, double x) {
    require_finite_p("h_cdf", p);
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ax = std::fabs(x);
    if (ax < 1e-300) return 0.5;
    double f;  // CDF at +ax
    if (p == 2.0) {
        f = 0.5 + (ax * std::sqrt(1.0 - ax * ax) + std::asin(ax)) / M_PI;
    } else if (p == 1.0) {
        f = 0.5 +
            (ax * std::log((1.0 + std::sqrt(1.0 - ax * ax)) / ax) + std::asin(ax)) / M_PI;
    } else {
        // Mixture form: X = T C with T^p uniform on (0,1), C arcsine on (-1,1).
        //   F(ax) = ax^p + Integral_{ax}^{1} p t^{p-1} (1/2 + asin(ax/t)/pi) dt,
        // evaluated with t = ax cosh u; all factors stay bounded by 1.
        const double umax = std::acosh(1.0 / ax);
        const double integral = integrate(
            [&](double u) {
                const double ch = std::cosh(u);
                return std::pow(ax * ch, p - 1.0) * std::asin(1.0 / ch) * (ax * std::sinh(u));
            },
            0.0, umax, 1e-13);
        f = 0.5 + 0.5 * std::pow(ax, p) + (p / M_PI) * integral;
    }
    return x >= 0.0 ? f : 1.0 - f;
}

double log_energy_limit(const Exponent& p) {
    if (p.is_infinite()) return -std::log(2.0);
    const double pv = p.value();
    const ModelConstants mc = model_constants(pv, 1.0);
    return std::log(0.5 * mc.law_edge) - 0.5 / pv;
}

LimitLaw::LimitLaw(Exponent p, Ensemble ensemble, int cdf_cells)
    : p_(p), ens_(ensemble) {
    if (cdf_cells < 16) throw std::domain_error("LimitLaw: cdf_cells too small");
    const double edge = p_.is_infinite() ? 1.0 : model_constants(p_.value(), 1.0).law_edge;
    lo_ = ens_ == Ensemble::eigenvalue ? -edge : 0.0;
    hi_ = edge;
    cdf_.resize(cdf_cells + 1);
    const double h = (hi_ - lo_) / cdf_cells;
    for (int i = 0; i <= cdf_cells; ++i) {
        const double x = lo_ + i * h;
        double f;
        if (p_.is_infinite()) {
            const double c = std::clamp(x, -1.0, 1.0);
            f = ens_ == Ensemble::eigenvalue ? 0.5 + std::asin(c) / M_PI
                                             : 2.0 / M_PI * std::asin(c);
        } else {
            const double s = x / edge;
            f = ens_ == Ensemble::eigenvalue ? h_cdf(p_.value(), s)
                                             : 2.0 * h_cdf(p_.value(), s) - 1.0;
        }
        cdf_[i] = f;
    }
    cdf_.front() = 0.0;
    cdf_.back() = 1.0;
}

double LimitLaw::density(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    if (p_.is_infinite()) {
        const double q = 1.0 - x * x;
        if (q <= 0.0) return 0.0;
        const double base = 1.0 / (M_PI * std::sqrt(q));
        return ens_ == Ensemble::eigenvalue ? base : 2.0 * base;
    }
    const double edge = hi_;
    const double base = h_density(p_.value(), x / edge) / edge;
    return ens_ == Ensemble::eigenvalue ? base : 2.0 * base;
}

double LimitLaw::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const int cells = static_cast<int>(cdf_.size()) - 1;
    const double pos = (x - lo_) / (hi_ - lo_) * cells;
    const int i = std::min(static_cast<int>(pos), cells - 1);
    const double frac = pos - i;
    return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
}

double LimitLaw::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must lie in [0,1]");
    if (u == 0.0) return lo_;
    if (u == 1.0) return hi_;
    if (p_.is_infinite()) {
        return ens_ == Ensemble::eigenvalue ? std::sin(M_PI * (u - 0.5))
                                            : std::sin(0.5 * M_PI * u);
    }
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const int i = std::max<int>(1, static_cast<int>(it - cdf_.begin())) - 1;
    const int cells = static_cast<int>(cdf_.size()) - 1;
    const double h = (hi_ - lo_) / cells;
    const double df = cdf_[i + 1] - cdf_[i];
    const double frac = df > 0.0 ? (u - cdf_[i]) / df : 0.5;
    return lo_ + (i + frac) * h;
}

std::vector<double> LimitLaw::sample(Philox& rng, std::size_t count) const {
    std::vector<double> out(count);
    for (auto& v : out) v = quantile(rng.uniform01());
    return out;
}

std::vector<std::pair<double, double>> tabulate_density(const LimitLaw& law, int n) {
    if (n < 1) throw std::domain_error("tabulate_density: n must be >= 1");
    std::vector<std::pair<double, double>> rows;
    rows.reserve(n);
    const double h = (law.support_max() - law.support_min()) / n;
    for (int i = 0; i < n; ++i) {
        const double x = law.support_min() + (i + 0.5) * h;
        rows.emplace_back(x, law.density(x));
    }
    return rows;
}

}  // namespace schatten
