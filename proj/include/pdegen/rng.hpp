#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pdegen {

/// Counter-based random source keyed by (seed, stream_id). Draw k of stream s
/// is a pure function of (seed, s, k), so batch generation is order- and
/// thread-schedule-independent: give each sample index its own stream.
class SeededRng {
  public:
    SeededRng(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix(mix(seed ^ 0x2545f4914f6cdd1dULL) ^ mix(stream_id))) {}

    std::uint64_t next_u64() { return mix(mix(counter_++ ^ key_) + key_); }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(next_u64() % std::uint64_t(hi - lo + 1));
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    // splitmix64 finalizer; two rounds in next_u64 for full avalanche over
    // the (key, counter) pair.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

}  // namespace pdegen
