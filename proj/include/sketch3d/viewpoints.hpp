#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace sketch3d {

struct Viewpoint {
    double azimuth_deg = 0;    ///< in [0, 360)
    double elevation_deg = 0;
    double distance = 0;       ///< camera to object center, object units
    int base_id = 0;           ///< base view this one was derived from, [0, 8)
    bool is_base = false;

    friend bool operator==(const Viewpoint&, const Viewpoint&) = default;
};

/// Camera-set configuration. Defaults give 8 base views at 10° elevation and
/// 45° azimuth spacing, 5 perturbed views each.
struct ViewpointParams {
    int base_count = 8;
    int perturbed_per_base = 5;
    double base_elevation_deg = 10;
    double base_distance = 1.5;
    double angle_sigma_deg = 7;      ///< std-dev of both angle perturbations
    double min_deviation_deg = 5;    ///< accepted |deviation| range, per angle
    double max_deviation_deg = 15;
    double distance_sigma = 0.05;
    double distance_lo = 1.4;
    double distance_hi = 1.6;
    int retry_cap = 10000;           ///< rejection attempts per sampled value
};

/// Signed smallest difference a − b on the circle, in (−180, 180].
double circular_difference_deg(double a, double b);

/// Checks the base or non-base invariants of `v` under `params`.
bool satisfies_invariants(const Viewpoint& v, const ViewpointParams& params = {});

std::vector<Viewpoint> base_viewpoints(const ViewpointParams& params = {});

/// Perturbed views around `base`: each angle is Normal(base, sigma) redrawn
/// until its absolute deviation lies in [min, max]; distance is a
/// Normal(base_distance, distance_sigma) truncated to [lo, hi].
std::vector<Viewpoint> perturb(const Viewpoint& base, std::uint64_t seed, const ViewpointParams& params = {});

/// All views of one shape, ordered base_0, its perturbations, base_1, ...
/// The stream is keyed by (seed, shape_id), independent of other shapes.
std::vector<Viewpoint> dataset_viewpoints(std::string_view shape_id, std::uint64_t seed,
                                          const ViewpointParams& params = {});

/// Index of the single test view for a shape, uniform over [0, n_choices)
/// and fixed by (seed, shape_id).
std::size_t select_test_viewpoint(std::string_view shape_id, std::size_t n_choices, std::uint64_t seed);

}  // namespace sketch3d
