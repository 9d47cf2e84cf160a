#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace spikelink {

// splitmix64; used to expand seeds into independent stream states.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mixes a base seed with up to three stream identifiers so that trials,
// slots and substreams get decorrelated generators from one user seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t x = base;
    splitmix64(x);
    x ^= 0xa0761d6478bd642fULL + a;
    splitmix64(x);
    x ^= 0xe7037ed1a0b428dbULL + b;
    splitmix64(x);
    x ^= 0x8ebc6af09c88c6e3ULL + c;
    return splitmix64(x);
}

// xoshiro256++ with a hand-rolled Box-Muller transform. Self-contained so
// that seeded runs reproduce bit-exactly regardless of the standard
// library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound), unbiased via rejection
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // standard normal via Box-Muller (pairs cached)
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // circular complex Gaussian with E|z|^2 = variance
    std::complex<double> cgaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = s * gaussian();
        const double im = s * gaussian();
        return {re, im};
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace spikelink
