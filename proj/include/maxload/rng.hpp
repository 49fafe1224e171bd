#pragma once

// Random number generation for the simulator.
//
// Generator: xoshiro256++ (Blackman & Vigna). Substreams: the state for
// (seed, stream) is four successive SplitMix64 outputs starting from
// mix(seed) ^ mix(stream + golden). Each replicate of a batch draws from its
// own stream, so batches do not depend on how replicates are spread across
// workers.
//
// Normal variates: Marsaglia polar method; the spare variate is cached, so a
// NormalPolar instance is tied to one generator.

#include <cmath>
#include <cstdint>
#include <limits>

namespace maxload {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) { seed_from(SplitMix64(seed)); }

    static Xoshiro256pp substream(std::uint64_t seed, std::uint64_t stream) {
        const std::uint64_t key =
            SplitMix64::mix(seed) ^ SplitMix64::mix(stream + 0x9e3779b97f4a7c15ULL);
        return Xoshiro256pp(key);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
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

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    void seed_from(SplitMix64 sm) {
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t s_[4];
};

// Uniform integer in [0, bound), bound >= 1, without modulo bias (Lemire).
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class NormalPolar {
public:
    template <class Rng>
    double operator()(Rng& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01(rng) - 1.0;
            v = 2.0 * uniform01(rng) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace maxload
