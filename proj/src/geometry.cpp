#include "sketch3d/geometry.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"
#include "sketch3d/text_util.hpp"

namespace sketch3d {

double norm(Vec3 a) { return std::sqrt(squared_norm(a)); }

double TriangleMesh::face_area(std::size_t f) const {
    const auto& t = faces[f];
    const Vec3 a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
    return 0.5 * norm(cross(b - a, c - a));
}

double TriangleMesh::total_area() const {
    double sum = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) sum += face_area(f);
    return sum;
}

void validate(const TriangleMesh& mesh) {
    for (const Vec3& v : mesh.vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw InvalidInput("mesh has a non-finite vertex");
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        for (auto idx : mesh.faces[f]) {
            if (idx >= mesh.vertices.size())
                throw InvalidInput("face " + std::to_string(f) + " references vertex " +
                                   std::to_string(idx) + " of " +
                                   std::to_string(mesh.vertices.size()));
        }
    }
}

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
    for (const Vec3& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw InvalidInput("point cloud has a non-finite coordinate");
    }
}

PointCloud PointCloud::prefix(std::size_t n) const {
    if (n > points_.size()) throw InvalidInput("prefix longer than cloud");
    return PointCloud(std::vector<Vec3>(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(n)));
}

double Aabb::max_side() const {
    const Vec3 e = extent();
    return std::max({e.x, e.y, e.z});
}

Aabb bounding_box(std::span<const Vec3> points) {
    if (points.empty()) throw InvalidInput("bounding box of an empty point set");
    Aabb box{points[0], points[0]};
    for (const Vec3& p : points) {
        box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
        box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
    }
    return box;
}

Vec3 centroid(std::span<const Vec3> points) {
    if (points.empty()) throw InvalidInput("centroid of an empty point set");
    Vec3 sum;
    for (const Vec3& p : points) sum = sum + p;
    return (1.0 / static_cast<double>(points.size())) * sum;
}

PointCloud SimilarityTransform::apply(const PointCloud& cloud) const {
    std::vector<Vec3> out;
    out.reserve(cloud.size());
    for (const Vec3& p : cloud.points()) out.push_back(apply(p));
    return PointCloud(std::move(out));
}

// --- OBJ ------------------------------------------------------------------

TriangleMesh parse_obj(std::string_view text) {
    TriangleMesh mesh;
    std::vector<std::size_t> face_line;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        auto tokens = detail::split_ws(detail::strip_comment(line, '#'));
        if (tokens.empty()) continue;
        const std::string_view tag = tokens[0];
        if (tag == "v") {
            if (tokens.size() < 4) throw ParseError("vertex needs 3 coordinates", line_no);
            Vec3 v;
            double* xyz[3] = {&v.x, &v.y, &v.z};
            for (int k = 0; k < 3; ++k) {
                if (!detail::parse_double(tokens[k + 1], *xyz[k]) || !std::isfinite(*xyz[k]))
                    throw ParseError("bad vertex coordinate '" + std::string(tokens[k + 1]) + "'", line_no);
            }
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            if (tokens.size() < 4) throw ParseError("face needs at least 3 corners", line_no);
            std::vector<std::uint32_t> corners;
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                // "i", "i/t", "i//n", "i/t/n": only the position index matters.
                std::string_view tok = tokens[k].substr(0, tokens[k].find('/'));
                long long idx = 0;
                if (!detail::parse_int(tok, idx) || idx == 0)
                    throw ParseError("bad face index '" + std::string(tokens[k]) + "'", line_no);
                const auto nv = static_cast<long long>(mesh.vertices.size());
                long long zero_based = idx > 0 ? idx - 1 : nv + idx;
                if (zero_based < 0)
                    throw ParseError("relative face index " + std::to_string(idx) + " out of range", line_no);
                corners.push_back(static_cast<std::uint32_t>(zero_based));
            }
            for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                mesh.faces.push_back({corners[0], corners[k], corners[k + 1]});
                face_line.push_back(line_no);
            }
        }
        // vt, vn, o, g, usemtl, s, ... are ignored
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        for (auto idx : mesh.faces[f]) {
            if (idx >= mesh.vertices.size())
                throw ParseError("face index " + std::to_string(idx + 1) + " out of range (" +
                                     std::to_string(mesh.vertices.size()) + " vertices)",
                                 face_line[f]);
        }
    }
    if (mesh.faces.empty()) throw InvalidInput("OBJ contains no faces");
    return mesh;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
    return parse_obj(detail::read_file(path));
}

// --- sampling and normalization ------------------------------------------

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
    validate(mesh);
    if (n == 0) throw InvalidInput("sample count must be positive");
    std::vector<double> cumulative(mesh.faces.size());
    double total = 0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        total += mesh.face_area(f);
        cumulative[f] = total;
    }
    if (!(total > 0) || !std::isfinite(total)) throw InvalidInput("mesh has zero surface area");

    Rng rng(seed);
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pick = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        // Zero-area faces are never selected: upper_bound skips equal prefix sums.
        const std::size_t f = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                    cumulative.size() - 1);
        const auto& t = mesh.faces[f];
        const double r1 = std::sqrt(rng.uniform());
        const double r2 = rng.uniform();
        const Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
        out.push_back((1.0 - r1) * a + (r1 * (1.0 - r2)) * b + (r1 * r2) * c);
    }
    return PointCloud(std::move(out));
}

SimilarityTransform unit_normalization(const PointCloud& cloud) {
    const Aabb box = bounding_box(cloud.points());
    const double side = box.max_side();
    if (!(side > 0)) throw InvalidInput("cannot normalize a zero-extent point cloud");
    return {box.center(), 1.0 / side, Vec3{}};
}

PointCloud normalize_unit(const PointCloud& cloud) { return unit_normalization(cloud).apply(cloud); }

SimilarityTransform reference_alignment(const PointCloud& pred, const PointCloud& ref) {
    const double pred_side = bounding_box(pred.points()).max_side();
    const double ref_side = bounding_box(ref.points()).max_side();
    if (!(pred_side > 0) || !(ref_side > 0)) throw InvalidInput("cannot align degenerate point clouds");
    const Vec3 c = centroid(pred.points());
    return {c, ref_side / pred_side, centroid(ref.points())};
}

PointCloud align_to_reference(const PointCloud& pred, const PointCloud& ref) {
    return reference_alignment(pred, ref).apply(pred);
}

// --- point cloud files ----------------------------------------------------

PointCloud parse_xyz(std::string_view text) {
    std::vector<Vec3> pts;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        auto tokens = detail::split_ws(detail::strip_comment(line, '#'));
        if (tokens.empty()) continue;
        if (tokens.size() != 3) throw ParseError("expected 'x y z'", line_no);
        Vec3 p;
        if (!detail::parse_double(tokens[0], p.x) || !detail::parse_double(tokens[1], p.y) ||
            !detail::parse_double(tokens[2], p.z) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
            !std::isfinite(p.z))
            throw ParseError("bad coordinate", line_no);
        pts.push_back(p);
    }
    return PointCloud(std::move(pts));
}

std::string format_xyz(const PointCloud& cloud) {
    std::string out;
    for (const Vec3& p : cloud.points()) {
        out += detail::format_double(p.x);
        out += ' ';
        out += detail::format_double(p.y);
        out += ' ';
        out += detail::format_double(p.z);
        out += '\n';
    }
    return out;
}

namespace {

bool is_binary_path(const std::filesystem::path& path) { return path.extension() == ".bin"; }

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

}  // namespace

PointCloud read_point_cloud(const std::filesystem::path& path) {
    const std::string data = detail::read_file(path);
    if (!is_binary_path(path)) return parse_xyz(data);
    if (data.size() % 24 != 0) throw ParseError(path.string() + ": size is not a multiple of 24 bytes");
    std::vector<Vec3> pts(data.size() / 24);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double xyz[3];
        for (int k = 0; k < 3; ++k) {
            std::uint64_t raw;
            std::memcpy(&raw, data.data() + 24 * i + 8 * k, 8);
            xyz[k] = std::bit_cast<double>(to_little(raw));
        }
        pts[i] = {xyz[0], xyz[1], xyz[2]};
    }
    return PointCloud(std::move(pts));
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
    if (!is_binary_path(path)) {
        detail::write_file(path, format_xyz(cloud));
        return;
    }
    std::string data(cloud.size() * 24, '\0');
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 p = cloud[i];
        const double xyz[3] = {p.x, p.y, p.z};
        for (int k = 0; k < 3; ++k) {
            const std::uint64_t raw = to_little(std::bit_cast<std::uint64_t>(xyz[k]));
            std::memcpy(data.data() + 24 * i + 8 * k, &raw, 8);
        }
    }
    detail::write_file(path, data);
}

}  // namespace sketch3d
