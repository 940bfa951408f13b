#pragma once

#include <cstdint>

namespace fracperim {

/// splitmix64: tiny, seedable, and with a fixed cross-platform output
/// sequence, so seeded experiments reproduce bit-for-bit everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(next_u64() % std::uint64_t(hi - lo + 1));
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

    /// Fork a decorrelated child stream (for per-instance generators).
    Rng fork() { return Rng(next_u64() ^ 0xa5a5a5a5a5a5a5a5ULL); }

private:
    std::uint64_t state_;
};

}  // namespace fracperim
