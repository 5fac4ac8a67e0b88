#include "schatten/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schatten/special.hpp"

namespace schatten {

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("EmpiricalMeasure: no atoms");
    for (double a : atoms_)
        if (!std::isfinite(a)) throw std::invalid_argument("EmpiricalMeasure: non-finite atom");
    std::sort(atoms_.begin(), atoms_.end());
}

namespace {

double p_norm(std::span<const double> x, double p) {
    double s = 0.0;
    for (double v : x) s += std::pow(std::fabs(v), p);
    return std::pow(s, 1.0 / p);
}

void check_normalize_input(std::span<const double> x, double p) {
    if (x.empty()) throw std::invalid_argument("normalize: empty input");
    if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("normalize: bad exponent");
    bool all_zero = true;
    for (double v : x) all_zero = all_zero && v == 0.0;
    if (all_zero) throw std::invalid_argument("normalize: all-zero input vector");
}

}  // namespace

EmpiricalMeasure normalize_cone(std::span<const double> x, double p) {
    check_normalize_input(x, p);
    const double n = static_cast<double>(x.size());
    const double scale = std::pow(n, 1.0 / p) / p_norm(x, p);
    std::vector<double> atoms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) atoms[i] = scale * x[i];
    return EmpiricalMeasure(std::move(atoms));
}

EmpiricalMeasure normalize_uniform(std::span<const double> x, double u, double p, double beta) {
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("normalize_uniform: u must be in (0,1]");
    check_normalize_input(x, p);
    const double ell = gas_dims(static_cast<int>(x.size()), beta).ell;
    const double radial = std::pow(u, 1.0 / ell);
    const double n = static_cast<double>(x.size());
    const double scale = radial * std::pow(n, 1.0 / p) / p_norm(x, p);
    std::vector<double> atoms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) atoms[i] = scale * x[i];
    return EmpiricalMeasure(std::move(atoms));
}

EmpiricalMeasure normalize_singular(std::span<const double> x, std::optional<double> u,
                                    double p, double beta) {
    check_normalize_input(x, p);
    for (double v : x)
        if (!(v > 0.0)) throw std::domain_error("normalize_singular: coordinates must be > 0");
    double radial = 1.0;
    if (u) {
        if (!(*u > 0.0 && *u <= 1.0))
            throw std::domain_error("normalize_singular: u must be in (0,1]");
        const int n = static_cast<int>(x.size());
        const double m = gas_dims(n, beta).m;
        radial = std::pow(*u, 1.0 / (n + m));
    }
    const double n = static_cast<double>(x.size());
    const double scale = radial * std::pow(n, 2.0 / p) / p_norm(x, 0.5 * p);
    std::vector<double> atoms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) atoms[i] = scale * x[i];
    return EmpiricalMeasure(std::move(atoms));
}

double p_moment(const EmpiricalMeasure& mu, double p) {
    if (!(p > 0.0)) throw std::domain_error("p_moment: p must be positive");
    double s = 0.0;
    for (double a : mu.atoms()) s += std::pow(std::fabs(a), p);
    return s / static_cast<double>(mu.size());
}

double log_energy_offdiag(const EmpiricalMeasure& mu) {
    const auto& a = mu.atoms();
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("log_energy_offdiag: need n >= 2");
    for (std::size_t i = 1; i < n; ++i)
        if (a[i] == a[i - 1])
            throw std::invalid_argument("log_energy_offdiag: duplicate atoms");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += std::log(a[j] - a[i]);
    return 2.0 * s / (static_cast<double>(n) * (n - 1.0));
}

EmpiricalMeasure pushforward_scale(const EmpiricalMeasure& mu, double c, double p) {
    if (!(c > 0.0)) throw std::domain_error("pushforward_scale: c must be positive");
    if (!(p > 0.0)) throw std::domain_error("pushforward_scale: p must be positive");
    const double inv = std::pow(c, -1.0 / p);
    std::vector<double> atoms(mu.atoms());
    for (auto& v : atoms) v *= inv;
    return EmpiricalMeasure(std::move(atoms));
}

EmpiricalMeasure pushforward_square(const EmpiricalMeasure& mu) {
    std::vector<double> atoms(mu.atoms());
    for (auto& v : atoms) v *= v;
    return EmpiricalMeasure(std::move(atoms));
}

EmpiricalMeasure pushforward_sqrt(const EmpiricalMeasure& mu) {
    std::vector<double> atoms(mu.atoms());
    for (auto& v : atoms) {
        if (v < 0.0) throw std::domain_error("pushforward_sqrt: negative atom");
        v = std::sqrt(v);
    }
    return EmpiricalMeasure(std::move(atoms));
}

double ks_distance(const EmpiricalMeasure& mu, const LimitLaw& law) {
    const auto& a = mu.atoms();
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = law.cdf(a[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(f - i / n));
    }
    return d;
}

double wasserstein1(const EmpiricalMeasure& mu, const LimitLaw& law) {
    const auto& a = mu.atoms();
    const double n = static_cast<double>(a.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::fabs(a[i] - law.quantile((i + 0.5) / n));
    return s / n;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

}  // namespace schatten
