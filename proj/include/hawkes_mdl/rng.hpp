#pragma once

// Counter-based stream derivation: every task gets its own generator seeded from
// a hash of (master seed, task path), so results never depend on scheduling.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace hawkes_mdl {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

struct SeedSpec {
    std::uint64_t master = 0;
    std::vector<std::uint64_t> path;

    SeedSpec child(std::uint64_t index) const;
    SeedSpec child(std::initializer_list<std::uint64_t> indices) const;
    /// Stable hash of (master, path).
    std::uint64_t stream_seed() const noexcept;
};

class Rng {
public:
    explicit Rng(const SeedSpec& seed) : engine_(seed.stream_seed()) {}
    explicit Rng(std::uint64_t raw_seed) : engine_(raw_seed) {}

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Exponential waiting time with the given rate (> 0).
    double exponential(double rate);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hawkes_mdl
