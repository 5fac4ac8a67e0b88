#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace schatten {

// Exponent of a Schatten/spectral p-norm: a finite positive real or the
// distinguished value infinity.  The two cases follow structurally different
// formulas everywhere (rate constants, support constraints), so infinity is
// kept as a tagged state rather than a large float.
class Exponent {
public:
    static Exponent finite(double p) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::domain_error("exponent p must be finite and positive");
        return Exponent(p);
    }

    static Exponent infinite() { return Exponent(kInf); }

    // Accepts a decimal number or the spellings "inf"/"Inf"/"INF"/"infinity".
    static Exponent parse(std::string_view s);

    bool is_infinite() const { return !std::isfinite(p_); }

    // Finite value; calling this on the infinite exponent is a logic error.
    double value() const {
        if (is_infinite())
            throw std::logic_error("Exponent::value() called on infinite exponent");
        return p_;
    }

    std::string str() const;

    friend bool operator==(const Exponent& a, const Exponent& b) {
        return a.p_ == b.p_ || (a.is_infinite() && b.is_infinite());
    }

private:
    explicit Exponent(double p) : p_(p) {}
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    double p_;
};

}  // namespace schatten
