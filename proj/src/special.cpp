#include "schatten/special.hpp"

#include <cmath>
#include <charconv>

namespace schatten {

Exponent Exponent::parse(std::string_view s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity")
        return Exponent::infinite();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::domain_error("cannot parse exponent: '" + std::string(s) + "'");
    return Exponent::finite(v);
}

std::string Exponent::str() const {
    if (is_infinite()) return "inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p_);
    return std::string(buf, ptr);
}

namespace {

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw std::domain_error(std::string(name) + " must be finite and positive");
}

// log b_p = (1/p) log( sqrt(pi) p Gamma(p/2) / Gamma((p+1)/2) )
double log_law_edge(double p) {
    return (0.5 * std::log(M_PI) + std::log(p) + std::lgamma(0.5 * p) -
            std::lgamma(0.5 * (p + 1.0))) /
           p;
}

}  // namespace

ModelConstants model_constants(double p, double beta) {
    require_positive(p, "p");
    require_positive(beta, "beta");

    const double log_bp = log_law_edge(p);
    const double b_p = std::exp(log_bp);
    const double alpha_p = std::exp(-p * log_bp);  // alpha_p b_p^p = 1
    const double t = 0.5 * beta / p;
    const double r_p = std::exp(std::log(t) / p + log_bp);

    // B = (beta/2p) log( beta sqrt(pi) Gamma(p/2) / (2 Gamma((p+1)/2)) )
    //     - (beta/2) log 2 - 3 beta/(4p)
    const double B = t * (std::log(beta) + 0.5 * std::log(M_PI) + std::lgamma(0.5 * p) -
                          std::lgamma(0.5 * (p + 1.0)) - std::log(2.0)) -
                     0.5 * beta * std::log(2.0) - 1.5 * t;

    // C = (beta/2p) log( sqrt(pi) p Gamma(p/2) / (2^p sqrt(e) Gamma((p+1)/2)) )
    //   = (beta/2) (log(b_p/2) - 1/(2p))
    const double C = 0.5 * beta * (log_bp - std::log(2.0) - 0.5 / p);

    return ModelConstants{p, beta, b_p, alpha_p, r_p, B, C};
}

double rate_constant(const Exponent& p, double beta) {
    require_positive(beta, "beta");
    if (p.is_infinite()) return -0.5 * beta * std::log(2.0);
    return model_constants(p.value(), beta).rate_shift;
}

GasDims gas_dims(int n, double beta) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    require_positive(beta, "beta");
    const double pairs = 0.5 * beta * n * (n - 1.0);
    return GasDims{pairs + beta * n, pairs + n * (0.5 * beta - 1.0)};
}

// Regularized incomplete gamma, series for x < a+1 and continued fraction
// otherwise (Numerical Recipes style).
double gamma_tail_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_tail_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Q(a,x) by Lentz continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace schatten
