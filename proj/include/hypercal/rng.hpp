#pragma once

#include <cmath>
#include <cstdint>

namespace hypercal {

// Deterministic generators with fixed algorithms, so seeded runs reproduce
// bit-for-bit across standard library implementations.

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

struct Xoshiro256pp {
    std::uint64_t s[4];

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& x : s) x = sm.next();
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform in (0, 1]
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // signed uniform integer in [lo, hi]
    long uniform_int(long lo, long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(next() % span);
    }

    // Box-Muller; consumes two uniforms per pair, caches the second value.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic substream derivation for batched sampling.
inline Xoshiro256pp substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed ^ (0xA5A5A5A55A5A5A5AULL + index * 0x9E3779B97F4A7C15ULL));
    return Xoshiro256pp(sm.next());
}

} // namespace hypercal
