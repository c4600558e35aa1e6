#pragma once

#include <cstdint>
#include <string_view>

namespace bprobe {

// Deterministic, platform-independent randomness. Standard-library
// distributions are not bit-stable across implementations, so all draws
// in the project go through these helpers.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless draw: one uniform u64 from (seed, salt, index).
constexpr std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t salt,
                                  std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ salt) + index);
}

/// Uniform double in [0, 1) from a u64.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

/// Sequential generator (splitmix64 stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform integer in [0, n). Rejection-sampled, unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double unit() { return to_unit(next_u64()); }

    /// Independent child stream for a named component.
    Rng fork(std::string_view label) const {
        return Rng(splitmix64(state_ ^ fnv1a(label)));
    }

private:
    std::uint64_t state_;
};

} // namespace bprobe
