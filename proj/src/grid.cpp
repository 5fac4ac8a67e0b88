#include "schatten/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace schatten {

void GridMeasure::validate() const {
    if (weights.empty()) throw std::invalid_argument("GridMeasure: no cells");
    if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(left))
        throw std::invalid_argument("GridMeasure: bad geometry");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("GridMeasure: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("GridMeasure: weights must sum to 1");
}

namespace {

// Signed antiderivative of |x|^q; differences give Integral_a^b |x|^q dx.
double abs_power_primitive(double x, double q) {
    const double v = std::pow(std::fabs(x), q + 1.0) / (q + 1.0);
    return x >= 0.0 ? v : -v;
}

}  // namespace

double GridMeasure::moment(double q) const {
    if (!(q > 0.0)) throw std::domain_error("GridMeasure::moment: q must be positive");
    double s = 0.0;
    for (int i = 0; i < cells(); ++i) {
        const double a = left + i * width;
        const double b = a + width;
        s += weights[i] * (abs_power_primitive(b, q) - abs_power_primitive(a, q)) / width;
    }
    return s;
}

double GridMeasure::mass_outside(double a, double b) const {
    double s = 0.0;
    for (int i = 0; i < cells(); ++i) {
        const double lo = left + i * width;
        const double hi = lo + width;
        const double inside = std::max(0.0, std::min(hi, b) - std::max(lo, a));
        s += weights[i] * (1.0 - inside / width);
    }
    return s;
}

GridMeasure GridMeasure::discretize(const LimitLaw& law, double left, double right, int cells) {
    if (cells < 1 || !(right > left)) throw std::invalid_argument("discretize: bad grid");
    GridMeasure mu;
    mu.left = left;
    mu.width = (right - left) / cells;
    mu.weights.resize(cells);
    double prev = law.cdf(left);
    for (int i = 0; i < cells; ++i) {
        const double next = law.cdf(left + (i + 1) * mu.width);
        mu.weights[i] = std::max(0.0, next - prev);
        prev = next;
    }
    // Force exact unit mass (the law may put negligible mass outside the grid).
    double sum = 0.0;
    for (double w : mu.weights) sum += w;
    if (!(sum > 0.0)) throw std::invalid_argument("discretize: grid misses the support");
    for (double& w : mu.weights) w /= sum;
    return mu;
}

GridMeasure rescale_to_unit_moment(const GridMeasure& mu, double q) {
    const double m = mu.moment(q);
    if (!(m > 0.0)) throw std::invalid_argument("rescale_to_unit_moment: zero moment");
    const double s = std::pow(m, 1.0 / q);
    GridMeasure out = mu;
    out.left /= s;
    out.width /= s;
    return out;
}

namespace {

// G2'' = log|u| with G2(0) = 0.
double g2(double u) {
    if (u == 0.0) return 0.0;
    return 0.5 * u * u * std::log(std::fabs(u)) - 0.75 * u * u;
}

}  // namespace

double log_kernel_cell_pair(double a, double b, double c, double d) {
    if (!(b > a) || !(d > c)) throw std::invalid_argument("log_kernel_cell_pair: degenerate cell");
    return g2(b - c) - g2(b - d) - g2(a - c) + g2(a - d);
}

LogKernelMatrix LogKernelMatrix::build(double left, double width, int cells) {
    if (cells < 1 || !(width > 0.0)) throw std::invalid_argument("LogKernelMatrix: bad grid");
    LogKernelMatrix k;
    k.n_ = cells;
    k.values_.resize(cells);
    const double inv = 1.0 / (width * width);
    for (int d = 0; d < cells; ++d) {
        const double a = left;
        const double b = left + width;
        const double c = left + d * width;
        k.values_[d] = inv * log_kernel_cell_pair(a, b, c, c + width);
    }
    return k;
}

std::vector<double> LogKernelMatrix::multiply(const std::vector<double>& w) const {
    if (static_cast<int>(w.size()) != n_)
        throw std::invalid_argument("LogKernelMatrix::multiply: size mismatch");
    std::vector<double> out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += values_[std::abs(i - j)] * w[j];
        out[i] = s;
    }
    return out;
}

double grid_log_energy(const GridMeasure& mu) {
    return grid_log_energy(mu, LogKernelMatrix::build(mu.left, mu.width, mu.cells()));
}

double grid_log_energy(const GridMeasure& mu, const LogKernelMatrix& kernel) {
    mu.validate();
    if (kernel.size() != mu.cells())
        throw std::invalid_argument("grid_log_energy: kernel size mismatch");
    const auto kw = kernel.multiply(mu.weights);
    double s = 0.0;
    for (int i = 0; i < mu.cells(); ++i) s += mu.weights[i] * kw[i];
    return s;
}

double wasserstein1_grid(const GridMeasure& mu, const LimitLaw& law) {
    // W1 = Integral |F_mu - F_law|; the grid CDF is piecewise linear, so a
    // fine per-cell trapezoid on the difference is adequate.
    const double lo = std::min(mu.left, law.support_min());
    const double hi = std::max(mu.right(), law.support_max());
    const int steps = std::max(20000, 8 * mu.cells());
    const double h = (hi - lo) / steps;
    std::vector<double> cum(mu.cells() + 1, 0.0);
    for (int i = 0; i < mu.cells(); ++i) cum[i + 1] = cum[i] + mu.weights[i];
    const auto grid_cdf = [&](double x) {
        if (x <= mu.left) return 0.0;
        if (x >= mu.right()) return 1.0;
        const double pos = (x - mu.left) / mu.width;
        const int i = std::min(static_cast<int>(pos), mu.cells() - 1);
        return cum[i] + (pos - i) * mu.weights[i];
    };
    double s = 0.0;
    double prev = std::fabs(grid_cdf(lo) - law.cdf(lo));
    for (int k = 1; k <= steps; ++k) {
        const double x = lo + k * h;
        const double cur = std::fabs(grid_cdf(x) - law.cdf(x));
        s += 0.5 * (prev + cur) * h;
        prev = cur;
    }
    return s;
}

}  // namespace schatten
