#pragma once

#include <cmath>
#include <utility>

namespace schatten {

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1].
inline constexpr double kGK15Nodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
inline constexpr double kGK15WeightsK[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
inline constexpr double kGK15WeightsG[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

struct GkPanel {
    double value;
    double error;
    double magnitude;  // sum |w f| h, the roundoff scale of the panel
};

template <class F>
GkPanel gk15(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double f0 = f(mid);
    double k = kGK15WeightsK[0] * f0;
    double g = kGK15WeightsG[0] * f0;
    double mag = kGK15WeightsK[0] * std::fabs(f0);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kGK15Nodes[i];
        const double fa = f(mid - dx);
        const double fb = f(mid + dx);
        k += kGK15WeightsK[i] * (fa + fb);
        mag += kGK15WeightsK[i] * (std::fabs(fa) + std::fabs(fb));
        if (i % 2 == 0) g += kGK15WeightsG[i / 2] * (fa + fb);
    }
    return {k * h, std::fabs((k - g) * h), mag * std::fabs(h)};
}

template <class F>
double adaptive_gk_rec(F& f, double a, double b, double tol, int depth) {
    const GkPanel p = gk15(f, a, b);
    // Stop on the requested budget or once the estimate drowns in roundoff.
    if (p.error <= tol || p.error <= 4e-16 * p.magnitude || depth >= 48) return p.value;
    const double mid = 0.5 * (a + b);
    return adaptive_gk_rec(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gk_rec(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] to absolute tolerance.
// Integrable endpoint singularities terminate through the depth cap.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12) {
    if (a == b) return 0.0;
    return detail::adaptive_gk_rec(f, a, b, abs_tol, 0);
}

}  // namespace schatten
