#pragma once

#include <cstdint>
#include <cmath>
#include <limits>

namespace mw {

// splitmix64, used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Mixes (master seed, stream ids) into one 64-bit stream key. Replicas and
// per-run substreams are keyed this way so results never depend on worker
// count or evaluation order.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= a + 0x9E3779B97F4A7C15ULL;
    h ^= splitmix64(s);
    s ^= b + 0xD1B54A32D192ED03ULL;
    h ^= splitmix64(s);
    s ^= c + 0x8CB92BA72F3D8DD7ULL;
    h ^= splitmix64(s);
    return h;
}

// xoshiro256++ (Blackman & Vigna). Small, fast, 2^256-1 period.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0x853C49E6748FEA9BULL) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_gauss_ = false;
        bit_count_ = 0;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe under log().
    double uniform_pos() {
        return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia polar, pair-cached.
    double normal() {
        if (has_gauss_) {
            has_gauss_ = false;
            return gauss_;
        }
        double u, v, w;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            w = u * u + v * v;
        } while (w >= 1.0 || w == 0.0);
        const double m = std::sqrt(-2.0 * std::log(w) / w);
        gauss_ = v * m;
        has_gauss_ = true;
        return u * m;
    }

    double exponential() { return -std::log(uniform_pos()); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift rejection.
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (-n) % n;
            while (lo < t) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // One fair bit, drawn from a 64-bit buffer.
    bool bit() {
        if (bit_count_ == 0) {
            bit_buf_ = (*this)();
            bit_count_ = 64;
        }
        const bool b = bit_buf_ & 1u;
        bit_buf_ >>= 1;
        --bit_count_;
        return b;
    }

    // Geometric on {1,2,...} with success probability q: number of fair-coin
    // tosses until the first head when q == 1/2 (counted via trailing zeros),
    // inverse CDF otherwise.
    std::uint64_t geometric(double q) {
        if (q == 0.5) {
            for (;;) {
                if (bit_count_ == 0) {
                    bit_buf_ = (*this)();
                    bit_count_ = 64;
                }
                if (bit_buf_ == 0) {  // all remaining tosses are tails
                    geo_carry_ += bit_count_;
                    bit_count_ = 0;
                    continue;
                }
                const int z = __builtin_ctzll(bit_buf_);
                std::uint64_t run = geo_carry_ + static_cast<std::uint64_t>(z) + 1;
                geo_carry_ = 0;
                if (z + 1 >= bit_count_) {
                    bit_count_ = 0;
                } else {
                    bit_buf_ >>= (z + 1);
                    bit_count_ -= z + 1;
                }
                return run;
            }
        }
        const double u = uniform_pos();
        const double g = std::ceil(std::log(u) / std::log1p(-q));
        return g < 1.0 ? 1 : static_cast<std::uint64_t>(g);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double gauss_ = 0.0;
    bool has_gauss_ = false;
    std::uint64_t bit_buf_ = 0;
    int bit_count_ = 0;
    std::uint64_t geo_carry_ = 0;
};

}  // namespace mw
