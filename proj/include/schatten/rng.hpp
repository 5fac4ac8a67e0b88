#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace schatten {

// Philox4x64-10 counter-based generator.  A stream is addressed by
// (seed, stream_id) through the key words, so replica streams derived from one
// seed are independent and order-free; draws within a stream advance the
// counter only.  Output matches numpy.random.Philox for the same key/counter.
class Philox {
public:
    explicit Philox(uint64_t key0, uint64_t key1 = 0)
        : key_{key0, key1}, ctr_{0, 0, 0, 0}, pos_(4) {}

    static Philox stream(uint64_t seed, uint64_t stream_id) { return Philox(seed, stream_id); }

    uint64_t next_u64() {
        if (pos_ == 4) {
            advance();
            block();
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Strictly inside (0,1): (k + 0.5) * 2^-53 with k the top 53 bits.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Box-Muller pair; the second variate is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double t = 2.0 * M_PI * uniform01();
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

    // Gamma(shape, rate) by Marsaglia-Tsang, with the u^{1/shape} boost for
    // shape < 1.
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw std::domain_error("gamma: shape and rate must be positive");
        double boost = 1.0;
        double k = shape;
        if (k < 1.0) {
            boost = std::pow(uniform01(), 1.0 / k);
            k += 1.0;
        }
        const double d = k - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
        }
    }

    double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

private:
    void block() {
        std::array<uint64_t, 4> c = ctr_;
        std::array<uint64_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            uint64_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2E7470EE14C6C93ull, c[0], hi0, lo0);
            mulhilo(0xCA5A826395121157ull, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
            k[0] += 0x9E3779B97F4A7C15ull;
            k[1] += 0xBB67AE8584CAA73Bull;
        }
        buf_ = c;
    }

    void advance() {
        if (++ctr_[0] != 0) return;
        if (++ctr_[1] != 0) return;
        if (++ctr_[2] != 0) return;
        ++ctr_[3];
    }

    static void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
        const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<uint64_t>(prod >> 64);
        lo = static_cast<uint64_t>(prod);
    }

    std::array<uint64_t, 2> key_;
    std::array<uint64_t, 4> ctr_;
    std::array<uint64_t, 4> buf_{};
    int pos_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace schatten
