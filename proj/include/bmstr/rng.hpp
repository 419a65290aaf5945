#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

// Deterministic random number generation. Everything downstream (interleavers,
// puncture patterns, channel noise, fading) derives from 64-bit seeds through
// the generators in this header, so encoded frames and simulated sweeps are
// bit-exact across platforms and runs.

namespace bmstr {

// splitmix64 step; also used to derive independent substreams from a master seed.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream seed for (master, index). Changing the index gives an unrelated
// stream; adding streams never perturbs existing ones.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL + index * 0xbf58476d1ce4e5b9ULL);
    splitmix64_next(s);
    return splitmix64_next(s);
}

// xoshiro256** seeded via splitmix64.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Seeded stream of uniforms, Gaussians (Box-Muller) and unit-power Rayleigh
// samples. One Rng per logical stream; streams never share state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_.next(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_.next();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller on consecutive uniforms; the second
    // sample of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Rayleigh amplitude with E[R^2] = 1 (scale 1/sqrt(2)): R = sqrt(-ln U).
    double rayleigh_unit_power() {
        const double u = 1.0 - uniform();
        return std::sqrt(-std::log(u));
    }

  private:
    Xoshiro256ss gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

// k distinct indices from [0, n), sorted ascending (partial Fisher-Yates).
inline std::vector<std::uint32_t> random_subset_sorted(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("random_subset_sorted: k > n");
    std::vector<std::uint32_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace bmstr
