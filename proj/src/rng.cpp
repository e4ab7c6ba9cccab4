#include "sketch3d/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sketch3d {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::string_view> keys) {
    std::uint64_t h = mix64(seed);
    for (std::string_view key : keys) {
        // Length prefix keeps ("ab","c") distinct from ("a","bc").
        h = mix64(h ^ key.size());
        h = mix64(fnv1a(key, h ^ 0xcbf29ce484222325ULL));
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: n must be positive");
    // Rejection on the top of the range removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

std::uint64_t Rng::geometric_trials(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric_trials: p must be in (0, 1]");
    if (p == 1.0) return 1;
    // Inversion: P(K > k) = (1-p)^k.
    const double u = 1.0 - uniform();  // (0, 1]
    const double k = std::ceil(std::log(u) / std::log1p(-p));
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

}  // namespace sketch3d
