#include "sketch3d/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"

namespace sketch3d {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a, ap = p - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0 ? (ap.x * ab.x + ap.y * ab.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

void validate(const Sketch& sketch) {
    if (sketch.width == 0 || sketch.height == 0) throw InvalidInput("canvas dimensions must be positive");
    for (std::size_t i = 0; i < sketch.strokes.size(); ++i) {
        const Stroke& s = sketch.strokes[i];
        if (s.points.size() < 2) throw InvalidInput("stroke " + std::to_string(i) + " has fewer than 2 points");
        if (!(s.width > 0) || !std::isfinite(s.width))
            throw InvalidInput("stroke " + std::to_string(i) + " has non-positive width");
        for (Vec2 p : s.points)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw InvalidInput("stroke " + std::to_string(i) + " has a non-finite point");
    }
}

StylizeParams StylizeParams::identity() {
    StylizeParams p;
    p.rot_max_deg = 0;
    p.scale_lo = p.scale_hi = 1;
    p.trans_radius = 0;
    p.local_noise_max = 0;
    p.max_traces = 1;
    p.width_var = 0;
    return p;
}

void validate(const StylizeParams& p) {
    auto nonneg = [](double v) { return v >= 0 && std::isfinite(v); };
    if (!nonneg(p.rot_max_deg)) throw InvalidInput("rot_max must be >= 0");
    if (!(p.scale_lo <= p.scale_hi) || !(p.scale_lo > 0) || !std::isfinite(p.scale_hi))
        throw InvalidInput("scale range must satisfy 0 < lo <= hi");
    if (!nonneg(p.trans_radius) || !nonneg(p.local_noise_max) || !nonneg(p.width_var))
        throw InvalidInput("radii, amplitudes and variances must be >= 0");
    if (p.max_traces < 1) throw InvalidInput("max_traces must be >= 1");
    if (!(p.width_mean > 0) || !std::isfinite(p.width_mean)) throw InvalidInput("width_mean must be > 0");
    if (!(p.noise_wavelength > 0) || !std::isfinite(p.noise_wavelength))
        throw InvalidInput("noise_wavelength must be > 0");
}

double max_stylized_width(const StylizeParams& p) { return p.width_mean + 3.0 * std::sqrt(p.width_var); }
double min_stylized_width(const StylizeParams& p) { return std::min(0.5, max_stylized_width(p)); }

std::vector<double> arc_lengths(const std::vector<Vec2>& points) {
    std::vector<double> s(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) s[i] = s[i - 1] + norm(points[i] - points[i - 1]);
    return s;
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& points, double max_spacing) {
    if (points.empty() || !(max_spacing > 0)) return points;
    std::vector<Vec2> out{points.front()};
    for (std::size_t i = 1; i < points.size(); ++i) {
        const Vec2 a = points[i - 1], b = points[i];
        const auto pieces = static_cast<std::size_t>(std::ceil(norm(b - a) / max_spacing));
        for (std::size_t k = 1; k < pieces; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(pieces);
            out.push_back(a + t * (b - a));
        }
        out.push_back(b);
    }
    return out;
}

namespace {

Vec2 stroke_centroid(const std::vector<Vec2>& pts) {
    Vec2 sum;
    for (Vec2 p : pts) sum = sum + p;
    return (1.0 / static_cast<double>(pts.size())) * sum;
}

// Smooth offset field along arc length: controls every `wavelength`,
// cosine-interpolated in between.
Vec2 noise_at(const std::vector<Vec2>& controls, double s, double wavelength) {
    const double u = s / wavelength;
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k + 1 >= controls.size()) k = controls.size() - 2;
    const double frac = std::clamp(u - static_cast<double>(k), 0.0, 1.0);
    const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * frac));
    const Vec2 a = controls[k], b = controls[k + 1];
    // Convex combination: stays inside the box spanned by the controls.
    return {(1.0 - w) * a.x + w * b.x, (1.0 - w) * a.y + w * b.y};
}

TraceRecord draw_trace(const Stroke& stroke, const StylizeParams& p, Rng& rng, std::vector<Vec2>& out_points) {
    TraceRecord rec;
    const double magnitude = rng.uniform(0.0, p.rot_max_deg);
    rec.rotation_deg = rng.coin() ? magnitude : -magnitude;
    rec.scale_x = rng.uniform(p.scale_lo, p.scale_hi);
    rec.scale_y = rng.uniform(p.scale_lo, p.scale_hi);
    // Uniform over the disk area.
    const double radius = p.trans_radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    rec.translation = {radius * std::cos(phi), radius * std::sin(phi)};
    const double sd = std::sqrt(p.width_var);
    rec.width = std::clamp(rng.normal(p.width_mean, sd), min_stylized_width(p), max_stylized_width(p));

    const bool noisy = p.local_noise_max > 0;
    const std::vector<Vec2> base = noisy ? resample_polyline(stroke.points, p.noise_wavelength / 4) : stroke.points;
    const std::vector<double> s = arc_lengths(base);
    if (noisy) {
        const auto n_controls = static_cast<std::size_t>(std::floor(s.back() / p.noise_wavelength)) + 2;
        rec.noise_controls.resize(n_controls);
        for (Vec2& c : rec.noise_controls)
            c = {rng.uniform(0.0, p.local_noise_max), rng.uniform(0.0, p.local_noise_max)};
    }

    rec.pivot = stroke_centroid(stroke.points);
    const double theta = rec.rotation_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(theta), sn = std::sin(theta);
    out_points.clear();
    out_points.reserve(base.size());
    rec.offsets.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const Vec2 d = base[i] - rec.pivot;
        const Vec2 rotated{cs * d.x - sn * d.y, sn * d.x + cs * d.y};
        const Vec2 scaled{rec.scale_x * rotated.x, rec.scale_y * rotated.y};
        const Vec2 offset = noisy ? noise_at(rec.noise_controls, s[i], p.noise_wavelength) : Vec2{};
        rec.offsets.push_back(offset);
        out_points.push_back(rec.pivot + scaled + rec.translation + offset);
    }
    return rec;
}

}  // namespace

StylizeResult stylize_traced(const Sketch& sketch, const StylizeParams& params, std::uint64_t seed) {
    validate(sketch);
    validate(params);
    StylizeResult result;
    result.sketch.width = sketch.width;
    result.sketch.height = sketch.height;
    for (std::size_t i = 0; i < sketch.strokes.size(); ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::size_t traces = 1 + rng.index(static_cast<std::uint64_t>(params.max_traces));
        for (std::size_t t = 0; t < traces; ++t) {
            Stroke out;
            TraceRecord rec = draw_trace(sketch.strokes[i], params, rng, out.points);
            rec.stroke = i;
            rec.trace = t;
            rec.trace_count = traces;
            out.width = rec.width;
            result.sketch.strokes.push_back(std::move(out));
            result.traces.push_back(std::move(rec));
        }
    }
    return result;
}

Sketch stylize(const Sketch& sketch, const StylizeParams& params, std::uint64_t seed) {
    return stylize_traced(sketch, params, seed).sketch;
}

BinaryImage rasterize(const Sketch& sketch) {
    validate(sketch);
    BinaryImage image(sketch.height, sketch.width);
    const auto rows = static_cast<long long>(sketch.height), cols = static_cast<long long>(sketch.width);
    for (const Stroke& stroke : sketch.strokes) {
        const double r = stroke.width / 2;
        for (std::size_t k = 0; k + 1 < stroke.points.size(); ++k) {
            const Vec2 a = stroke.points[k], b = stroke.points[k + 1];
            // Pixel (row, col) has its center at (col + 0.5, row + 0.5).
            const double x0 = std::min(a.x, b.x) - r, x1 = std::max(a.x, b.x) + r;
            const double y0 = std::min(a.y, b.y) - r, y1 = std::max(a.y, b.y) + r;
            auto to_index = [](double v, long long hi) {
                return static_cast<long long>(std::clamp(v, -1.0, static_cast<double>(hi) + 1.0));
            };
            const long long c0 = std::max<long long>(0, to_index(std::floor(x0 - 0.5), cols));
            const long long c1 = std::min<long long>(cols - 1, to_index(std::ceil(x1 - 0.5), cols));
            const long long r0 = std::max<long long>(0, to_index(std::floor(y0 - 0.5), rows));
            const long long r1 = std::min<long long>(rows - 1, to_index(std::ceil(y1 - 0.5), rows));
            for (long long row = r0; row <= r1; ++row) {
                for (long long col = c0; col <= c1; ++col) {
                    const Vec2 center{static_cast<double>(col) + 0.5, static_cast<double>(row) + 0.5};
                    if (distance_to_segment(center, a, b) <= r)
                        image.set(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
                }
            }
        }
    }
    return image;
}

}  // namespace sketch3d
