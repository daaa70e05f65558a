#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace adapnet {

// Counter-based deterministic RNG. A stream is fully described by
// (seed, counter); the next value is a pure function of the pair, so
// streams can be copied, replayed, and compared across runs. Child
// streams are derived from a label or integer salt and never share
// state with the parent.
class RngStream {
public:
    RngStream() = default;
    explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    static std::uint64_t mix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t next_u64() { return mix64(mix64(counter_++) ^ seed_); }

    // Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Inclusive on both ends. Modulo bias is ~2^-64 per unit of span.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Box-Muller; consumes exactly two draws per call.
    double next_gaussian() {
        const double u1 =
            static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0,1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    RngStream derive(std::string_view label) const {
        std::uint64_t h = 0xCBF29CE484222325ull; // FNV-1a
        for (const char c : label) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001B3ull;
        }
        return RngStream(mix64(seed_ ^ mix64(h)));
    }

    RngStream derive(std::uint64_t salt) const {
        return RngStream(mix64(seed_ ^ mix64(salt ^ 0xD1B54A32D192ED03ull)));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace adapnet
