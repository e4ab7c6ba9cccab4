#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace sketch3d {

/// Mixes a 64-bit value (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a list of keys.
/// The result depends only on the values, never on call order elsewhere, so
/// per-entry streams stay stable when entries are added or reordered.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::string_view> keys);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded random source. The engine (mt19937_64) has a standard-defined
/// output sequence; the distributions below are implemented here rather than
/// taken from <random>, whose distributions are implementation-defined. That
/// keeps every artifact reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi]; returns lo when lo == hi.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

    /// Standard normal deviate (Marsaglia polar method, no cached pair).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Number of Bernoulli(p) trials up to and including the first success.
    std::uint64_t geometric_trials(double p);

private:
    std::mt19937_64 engine_;
};

}  // namespace sketch3d
