#ifndef LDPQ_RNG_HPP
#define LDPQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ldpq {

// splitmix64, used both as a seed scrambler and to derive per-task streams
// from a (master seed, cell, replication) triple.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2ca495df94fULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with explicitly coded distributions, so that results are
// bit-identical across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    // Counter-based stream splitting: any (cell, replication) stream can be
    // reconstructed in isolation, which makes parallel and serial runs agree.
    static Rng derive(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
        std::uint64_t s = master;
        std::uint64_t h = splitmix64(s);
        s = h ^ (a * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL);
        h = splitmix64(s);
        s = h ^ (b * 0xc2b2ae3d27d4eb4fULL + 0x27d4eb2f165667c5ULL);
        return Rng(splitmix64(s));
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

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard Laplace, density (1/2) e^{-|w|}; mean 0, variance 2.
    double laplace() {
        double u = uniform() - 0.5;
        // u == -0.5 would give log(0); nudge to the smallest representable offset
        double t = 1.0 - 2.0 * std::fabs(u);
        if (t <= 0.0) t = 0x1.0p-53;
        return u < 0.0 ? std::log(t) : -std::log(t);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace ldpq

#endif
