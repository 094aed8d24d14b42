#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pgt {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Seed for one keyed work unit (an image, a query box, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

/// Seeded random source. Draws are computed from the raw engine output so the
/// sequence is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, n); n must be > 0.
    std::size_t uniform_index(std::size_t n);
    /// Uniform in [0, 1).
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace pgt
