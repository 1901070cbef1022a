#pragma once

#include <cmath>
#include <cstdint>

namespace evoscale {

// splitmix64, used to expand seeds and derive independent streams.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** seeded via splitmix64. A (seed, stream) pair selects an
// independent generator, so replicate r of an ensemble uses stream r and
// parallel and serial runs produce identical output. Samplers are hand-rolled
// (not std::) so results are identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        SplitMix64 sm{seed};
        const uint64_t a = sm.next();
        const uint64_t b = sm.next();
        SplitMix64 sm2{a ^ (stream * 0xD2B74407B1CE6E93ULL + b)};
        bool nonzero = false;
        for (auto& s : s_) {
            s = sm2.next();
            nonzero |= (s != 0);
        }
        if (!nonzero) s_[0] = 0x9E3779B97F4A7C15ULL;
        have_gauss_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0,1]
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // standard normal, Marsaglia polar method
    double normal() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        gauss_ = v * f;
        have_gauss_ = true;
        return u * f;
    }

    // unbiased integer in [0, n)
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    // pick index with probability weights[i]/total; total must equal the sum
    template <class Vec>
    std::size_t categorical(const Vec& weights, double total) {
        double target = uniform() * total;
        std::size_t i = 0;
        const std::size_t last = weights.size() - 1;
        for (; i < last; ++i) {
            target -= weights[i];
            if (target <= 0.0) return i;
        }
        return last;
    }

    using result_type = uint64_t;
    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~0ULL; }
    uint64_t operator()() { return next_u64(); }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double gauss_ = 0.0;
    bool have_gauss_;
};

}  // namespace evoscale
