#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ctxk {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// splitmix64 finalizer (Steele, Lea, Flood 2014)
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based deterministic generator built on the splitmix64 output
// function. The state is derived from (seed, stream, counter), so a stream
// keyed per (circuit id, shot index) reproduces the serial draw sequence
// under any parallel execution order.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
        : state_(mix64(mix64(seed ^ 0x6a09e667f3bcc908ULL) ^ stream) ^ mix64(counter ^ 0xbb67ae8584caa73bULL)) {}

    explicit CounterRng(std::uint64_t seed) : CounterRng(seed, 0, 0) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, bound); bound >= 1
    std::uint64_t next_below(std::uint64_t bound) {
        // multiply-shift; bias is negligible for the bounds used here
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    // standard normal via Box-Muller
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0)
            u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

} // namespace ctxk
