#pragma once

#include <cstdint>

namespace qxc {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

// Counter-based generator: output i is a pure function of (key, i), so any
// trial of any experiment can be regenerated in isolation.  Keys are derived
// by hashing (seed, trial index, stream tag); trials are independent streams
// regardless of scheduling order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng keyed(std::uint64_t seed, std::uint64_t trial = 0, std::uint64_t tag = 0) {
        std::uint64_t k = detail::splitmix64(seed);
        k = detail::splitmix64(k ^ (0x9E3779B97F4A7C15ull * (trial + 1)));
        k = detail::splitmix64(k ^ (0xC2B2AE3D27D4EB4Full * (tag + 1)));
        return CounterRng(k);
    }

    std::uint64_t next_u64() { return detail::splitmix64(key_ + 0xD1B54A32D192ED03ull * ++ctr_); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound < 2) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % bound;
    }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace qxc
