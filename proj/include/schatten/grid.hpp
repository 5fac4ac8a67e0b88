#pragma once

#include <vector>

#include "schatten/ullman.hpp"

namespace schatten {

// Probability measure with piecewise-constant density on a uniform cell grid.
// weights hold the mass per cell and sum to 1.
struct GridMeasure {
    double left = 0.0;
    double width = 1.0;
    std::vector<double> weights;

    int cells() const { return static_cast<int>(weights.size()); }
    double right() const { return left + width * cells(); }
    double center(int i) const { return left + width * (i + 0.5); }

    void validate() const;  // throws std::invalid_argument

    // Exact q-th absolute moment of the piecewise-constant density.
    double moment(double q) const;

    // Mass outside [a,b], counting partial cells fractionally.
    double mass_outside(double a, double b) const;

    // Cell masses F(edge_{i+1}) - F(edge_i) of a limit law.
    static GridMeasure discretize(const LimitLaw& law, double left, double right, int cells);
};

// Grid analog of the scale pushforward at the measure's own moment: rescales
// coordinates so the q-th moment becomes exactly 1.  Cell averaging inflates
// the moment of a discretized law by O(width^2), which would otherwise trip
// the feasibility branch of the rate functions.
GridMeasure rescale_to_unit_moment(const GridMeasure& mu, double q);

// Exact value of Integral_a^b Integral_c^d log|x-y| dy dx through the corner
// formula of the second antiderivative G2(u) = (u^2/2) log|u| - (3/4) u^2.
double log_kernel_cell_pair(double a, double b, double c, double d);

// Symmetric matrix of cell-pair kernel averages over a uniform grid;
// diagonal entries equal log(width) - 3/2 exactly.
class LogKernelMatrix {
public:
    static LogKernelMatrix build(double left, double width, int cells);

    int size() const { return n_; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }

    // K w (dense symmetric multiply).
    std::vector<double> multiply(const std::vector<double>& w) const;

private:
    // Entry depends only on |i-j| on a uniform grid, so one row suffices.
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(std::abs(i - j)); }
    int n_ = 0;
    std::vector<double> values_;  // values_[d] = kernel average at cell distance d
};

// Double log integral of the grid measure: w^T K w, exact for
// piecewise-constant densities.
double grid_log_energy(const GridMeasure& mu);
double grid_log_energy(const GridMeasure& mu, const LogKernelMatrix& kernel);

// W1 distance between a grid measure and a limit law (CDF-difference form).
double wasserstein1_grid(const GridMeasure& mu, const LimitLaw& law);

}  // namespace schatten
