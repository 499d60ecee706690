#pragma once

#include <cstdint>

namespace roughstab {

/// splitmix64 generator. Each Monte Carlo path or channel owns one stream,
/// so results do not depend on the order in which workers run.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform variate in (0, 1].
    double uniform() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Derive an independent stream seed from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Standard normal variates by the Box-Muller transform over SplitMix64.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) noexcept : rng_(seed) {}

    double next() noexcept;

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace roughstab
