#pragma once

#include <filesystem>
#include <string>

#include "sketch3d/geometry.hpp"
#include "sketch3d/rng.hpp"
#include "sketch3d/sketch.hpp"

namespace fixture {

using namespace sketch3d;

/// Axis-aligned unit cube [0,1]^3, 12 triangles.
TriangleMesh unit_cube();
/// Unit square in z = 0 split into two triangles.
TriangleMesh unit_square();
/// `n` points uniform in [lo, hi]^3.
PointCloud random_cloud(Rng& rng, std::size_t n, double lo = -1, double hi = 1);
/// Random polyline sketch on a 256×256 canvas.
Sketch random_sketch(Rng& rng, std::size_t strokes, std::size_t points_per_stroke = 6);
/// Random SVG document text mixing lines, polylines, Béziers and groups.
std::string random_svg(Rng& rng, int variant);
/// Fresh empty directory under the system temp directory.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace fixture
