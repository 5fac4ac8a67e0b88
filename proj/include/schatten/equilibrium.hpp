#pragma once

#include <span>

#include "schatten/grid.hpp"
#include "schatten/ratefn.hpp"

namespace schatten {

// A vertex of the feasible set {w >= 0, sum w = 1, <c,w> <= 1}: a single
// feasible atom (j < 0) or a two-atom blend saturating the moment row.
struct LinearVertex {
    int i = 0;
    int j = -1;
    double wi = 1.0;
    double wj = 0.0;
    double objective = 0.0;  // <gradient, vertex>
};

// Exact minimizer of <gradient, w> over the simplex-with-halfspace feasible
// set.  The blend candidate is the lower convex hull of {(c_k, g_k)} evaluated
// at abscissa 1, so a call costs O(N log N) (O(N) with a precomputed order).
LinearVertex fw_linear_oracle(std::span<const double> gradient, std::span<const double> c);

struct SolveOptions {
    long max_iter = 4'000'000;
    double gap_tol = 1e-5;
    bool away_steps = false;
    long refresh_every = 4096;  // full recompute cadence for drift control
    long trace_every = 0;       // record the objective every k iterations (0: off)
};

struct SolveReport {
    GridMeasure minimizer;
    double objective = 0.0;  // rate-function value at the minimizer
    double fw_gap = 0.0;     // duality gap at termination
    long iterations = 0;
    double moment = 0.0;     // constrained moment of the minimizer
    std::vector<double> objective_trace;
};

// Frank-Wolfe minimization of the spectral rate function over grid measures:
//   eigenvalue:      domain [-L, L], constraint m_p <= 1
//   eigenvalue p=inf: domain [-1, 1], no moment row
//   singular:        domain [0, L],  constraint m_{p/2} <= 1
// The objective is convex on the feasible slice (the log kernel is
// conditionally negative definite), so the duality gap certifies optimality.
SolveReport solve_equilibrium(const Exponent& p, double beta, double domain_halfwidth,
                              int cells, const SolveOptions& options = {},
                              Ensemble ensemble = Ensemble::eigenvalue);

}  // namespace schatten
