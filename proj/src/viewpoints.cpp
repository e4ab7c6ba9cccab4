#include "sketch3d/viewpoints.hpp"

#include <cmath>

#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"

namespace sketch3d {

double circular_difference_deg(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

namespace {

double wrap_degrees(double a) {
    double w = std::fmod(a, 360.0);
    if (w < 0) w += 360.0;
    if (w >= 360.0) w -= 360.0;
    return w;
}

double base_azimuth(int base_id, const ViewpointParams& p) { return 360.0 * base_id / p.base_count; }

bool deviation_ok(double dev, const ViewpointParams& p) {
    const double m = std::abs(dev);
    return m >= p.min_deviation_deg && m <= p.max_deviation_deg;
}

}  // namespace

bool satisfies_invariants(const Viewpoint& v, const ViewpointParams& p) {
    if (v.base_id < 0 || v.base_id >= p.base_count) return false;
    if (!(v.azimuth_deg >= 0 && v.azimuth_deg < 360)) return false;
    const double az0 = base_azimuth(v.base_id, p);
    if (v.is_base)
        return v.elevation_deg == p.base_elevation_deg && v.azimuth_deg == az0 && v.distance == p.base_distance;
    return v.distance >= p.distance_lo && v.distance <= p.distance_hi &&
           deviation_ok(v.elevation_deg - p.base_elevation_deg, p) &&
           deviation_ok(circular_difference_deg(v.azimuth_deg, az0), p);
}

std::vector<Viewpoint> base_viewpoints(const ViewpointParams& p) {
    std::vector<Viewpoint> out;
    for (int b = 0; b < p.base_count; ++b)
        out.push_back({base_azimuth(b, p), p.base_elevation_deg, p.base_distance, b, true});
    return out;
}

std::vector<Viewpoint> perturb(const Viewpoint& base, std::uint64_t seed, const ViewpointParams& p) {
    if (!base.is_base) throw InvalidInput("perturb expects a base viewpoint");
    Rng rng(seed);
    auto draw = [&](auto&& sample, auto&& accept, const char* what) {
        for (int attempt = 0; attempt < p.retry_cap; ++attempt) {
            const double v = sample();
            if (accept(v)) return v;
        }
        throw SamplingError(std::string("viewpoint ") + what + " rejection sampling exceeded the retry cap");
    };
    std::vector<Viewpoint> out;
    for (int k = 0; k < p.perturbed_per_base; ++k) {
        Viewpoint v;
        v.base_id = base.base_id;
        v.is_base = false;
        v.elevation_deg = draw([&] { return rng.normal(base.elevation_deg, p.angle_sigma_deg); },
                               [&](double e) { return deviation_ok(e - base.elevation_deg, p); }, "elevation");
        // Judge the wrapped value so the stored azimuth meets the invariant exactly.
        v.azimuth_deg = draw([&] { return wrap_degrees(rng.normal(base.azimuth_deg, p.angle_sigma_deg)); },
                             [&](double a) { return deviation_ok(circular_difference_deg(a, base.azimuth_deg), p); },
                             "azimuth");
        v.distance = draw([&] { return rng.normal(p.base_distance, p.distance_sigma); },
                          [&](double d) { return d >= p.distance_lo && d <= p.distance_hi; }, "distance");
        out.push_back(v);
    }
    return out;
}

std::vector<Viewpoint> dataset_viewpoints(std::string_view shape_id, std::uint64_t seed, const ViewpointParams& p) {
    const std::uint64_t shape_seed = derive_seed(seed, {"viewpoints", shape_id});
    std::vector<Viewpoint> out;
    for (const Viewpoint& base : base_viewpoints(p)) {
        out.push_back(base);
        for (const Viewpoint& v : perturb(base, derive_seed(shape_seed, static_cast<std::uint64_t>(base.base_id)), p))
            out.push_back(v);
    }
    return out;
}

std::size_t select_test_viewpoint(std::string_view shape_id, std::size_t n_choices, std::uint64_t seed) {
    if (n_choices == 0) throw InvalidInput("n_choices must be positive");
    Rng rng(derive_seed(seed, {"test-viewpoint", shape_id}));
    return static_cast<std::size_t>(rng.index(n_choices));
}

}  // namespace sketch3d
