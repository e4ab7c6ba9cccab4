#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sketch3d/image.hpp"

namespace sketch3d {

struct Vec2 {
    double x = 0, y = 0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

double norm(Vec2 v);

/// Distance from `p` to the closed segment [a, b].
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

/// Polyline stroke in canvas pixels. At least two points, positive width.
struct Stroke {
    std::vector<Vec2> points;
    double width = 1.0;

    friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Sketch {
    std::vector<Stroke> strokes;
    std::size_t width = 256;
    std::size_t height = 256;

    friend bool operator==(const Sketch&, const Sketch&) = default;
};

/// Throws InvalidInput when a stroke or the canvas violates its invariants.
void validate(const Sketch& sketch);

/// Parameters of the per-stroke random deformation. Defaults reproduce the
/// synthetic "stylized" dataset settings.
struct StylizeParams {
    double rot_max_deg = 2.5;       ///< rotation magnitude drawn from [0, rot_max], random sign
    double scale_lo = 0.9;          ///< per-axis scale factor range
    double scale_hi = 1.1;
    double trans_radius = 2.5;      ///< translation uniform over a disk (px)
    double local_noise_max = 1.3;   ///< per-component noise offset range [0, max] (px)
    int max_traces = 2;             ///< over-sketching: traces per stroke uniform in {1..max}
    double width_mean = 2.5;        ///< width ~ Normal(mean, var), clamped
    double width_var = 1.5;
    double noise_wavelength = 16;   ///< arc-length spacing of noise control offsets (px)

    /// Parameters under which stylize() leaves geometry unchanged.
    static StylizeParams identity();
};

void validate(const StylizeParams& params);

/// Largest width stylize() can emit: width_mean + 3·sqrt(width_var).
double max_stylized_width(const StylizeParams& params);
/// Smallest width stylize() can emit.
double min_stylized_width(const StylizeParams& params);

/// What was drawn for one emitted trace.
struct TraceRecord {
    std::size_t stroke = 0;  ///< input stroke index
    std::size_t trace = 0;   ///< 0-based trace number within the stroke
    std::size_t trace_count = 1;
    double rotation_deg = 0;
    double scale_x = 1, scale_y = 1;
    Vec2 translation;
    Vec2 pivot;                         ///< centroid the global transform is applied about
    double width = 1;
    std::vector<Vec2> noise_controls;   ///< control offsets, one per noise_wavelength of arc length
    std::vector<Vec2> offsets;          ///< noise applied at each emitted point
};

struct StylizeResult {
    Sketch sketch;
    std::vector<TraceRecord> traces;  ///< parallel to sketch.strokes
};

/// Per-stroke random deformation: every input stroke is traced 1..max_traces
/// times, each trace with an independent rotation, anisotropic scale and
/// translation about the stroke centroid (applied in that order), a smooth
/// noise offset along arc length, and a new width. Each input stroke draws
/// from its own stream derived from (seed, stroke index).
StylizeResult stylize_traced(const Sketch& sketch, const StylizeParams& params, std::uint64_t seed);
Sketch stylize(const Sketch& sketch, const StylizeParams& params, std::uint64_t seed);

/// Inserts points so no segment is longer than `max_spacing`. Original
/// vertices are kept.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& points, double max_spacing);

/// Cumulative arc length at each vertex (first entry 0).
std::vector<double> arc_lengths(const std::vector<Vec2>& points);

/// Canvas-sized bitmap; a pixel is set iff its center lies within width/2
/// of some stroke polyline. Out-of-canvas geometry is clipped.
BinaryImage rasterize(const Sketch& sketch);

// --- SVG -------------------------------------------------------------------

/// Reads an SVG 1.1 subset: `path` (M/L/C/Z, absolute and relative),
/// `line`, `polyline` and `polygon`, nested in `g` elements whose
/// transforms use translate/scale/rotate/matrix. Every subpath becomes one
/// stroke; cubic Béziers are flattened to within 0.1 px.
Sketch parse_svg(const std::filesystem::path& path);
Sketch parse_svg_string(const std::string& text);

/// One `polyline` per stroke, black, unfilled, exact per-stroke widths.
std::string format_svg(const Sketch& sketch);
void write_svg(const Sketch& sketch, const std::filesystem::path& path);

/// Maximum chord deviation used when flattening Béziers.
inline constexpr double kBezierTolerance = 0.1;

/// Flattens the cubic p0..p3, appending points after p0 (p0 itself is not
/// appended). Every point of the curve lies within `tolerance` of the
/// resulting polyline.
void flatten_cubic(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double tolerance, std::vector<Vec2>& out);

}  // namespace sketch3d
