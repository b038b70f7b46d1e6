#pragma once

#include <array>
#include <cstdint>

namespace clusterdd {

/// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Derive a child seed from (parent seed, stream index). Used for per-trial
/// and per-substream seeding so any unit of work is reproducible in
/// isolation, independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    return mix64(mix64(z) ^ (stream + 0x9E3779B97F4A7C15ull));
}

/// Small, fast generator (xoshiro256++) with the distribution draws the
/// simulator needs. Each instance is an independent stream identified by its
/// seed; instances are cheap enough to create per trial.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal (Box-Muller; one spare cached per pair).
    double normal();
    double normal(double mean, double stddev);

    /// Rayleigh magnitude with scale sigma (mode), i.e. E[X^2] = 2 sigma^2.
    double rayleigh(double sigma);

    /// Exact Poisson counts: product-of-uniforms for small means, Hormann's
    /// transformed-rejection (PTRD) for large ones.
    std::int64_t poisson(double mean);

private:
    std::array<std::uint64_t, 4> state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace clusterdd
