#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace pnav {

// Seed/stream utilities. All randomness in this library flows through Rng so
// that identical seeds give identical results on every platform; the standard
// <random> distributions are not specified bit-for-bit across toolchains.

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = kFnvOffset;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive combination of seed components.
constexpr std::uint64_t seed_combine(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x51'7c'c1'b7'27'22'0a'95ULL;
    for (std::uint64_t p : parts) h = mix64(h ^ p);
    return h;
}

// splitmix64 stream with unbiased bounded draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [lo, hi], inclusive. Rejection sampling keeps it unbiased.
    int uniform_int(int lo, int hi) {
        std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<int>(uniform_index(range));
    }

    // Uniform on [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace pnav
