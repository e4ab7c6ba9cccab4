#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sketch3d {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    constexpr double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double squared_norm(Vec3 a) { return dot(a, a); }
double norm(Vec3 a);

/// Triangle mesh. Faces index into `vertices`.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;

    double face_area(std::size_t f) const;
    double total_area() const;
};

/// Throws InvalidInput when any face index is out of range or a vertex is non-finite.
void validate(const TriangleMesh& mesh);

/// A finite set of 3D points. Constructing one validates that every
/// coordinate is finite.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Vec3> points);

    std::span<const Vec3> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Vec3& operator[](std::size_t i) const { return points_[i]; }

    /// First `n` points (n ≤ size()).
    PointCloud prefix(std::size_t n) const;

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::vector<Vec3> points_;
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return 0.5 * (min + max); }
    double max_side() const;
};

Aabb bounding_box(std::span<const Vec3> points);
Vec3 centroid(std::span<const Vec3> points);

/// Uniform scale followed by translation: p ↦ scale·(p − origin) + target.
struct SimilarityTransform {
    Vec3 origin;
    double scale = 1.0;
    Vec3 target;

    Vec3 apply(Vec3 p) const { return scale * (p - origin) + target; }
    PointCloud apply(const PointCloud& cloud) const;
};

/// Reads a Wavefront OBJ file. Only `v` and `f` records are interpreted;
/// faces with more than three corners are fan-triangulated from the first
/// corner. Negative (relative) indices are accepted.
TriangleMesh load_obj(const std::filesystem::path& path);
TriangleMesh parse_obj(std::string_view text);

/// Area-weighted uniform surface sample of `n` points.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

/// Transform that centers the bounding box at the origin and scales its
/// largest side to 1.
SimilarityTransform unit_normalization(const PointCloud& cloud);
PointCloud normalize_unit(const PointCloud& cloud);

/// Transform that moves pred's centroid onto ref's and scales about it so the
/// largest bounding-box sides agree. No rotation is estimated.
SimilarityTransform reference_alignment(const PointCloud& pred, const PointCloud& ref);
PointCloud align_to_reference(const PointCloud& pred, const PointCloud& ref);

/// Point cloud files: ".xyz"/".txt" text (one "x y z" per line) or ".bin"
/// raw little-endian float64 triples.
PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud parse_xyz(std::string_view text);
std::string format_xyz(const PointCloud& cloud);

}  // namespace sketch3d
