#include "fixtures.hpp"

#include <cmath>
#include <cstdio>

namespace fixture {

TriangleMesh unit_cube() {
    TriangleMesh m;
    for (int i = 0; i < 8; ++i) m.vertices.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    const std::uint32_t f[12][3] = {{0, 1, 3}, {0, 3, 2}, {4, 6, 7}, {4, 7, 5}, {0, 4, 5}, {0, 5, 1},
                                    {2, 3, 7}, {2, 7, 6}, {0, 2, 6}, {0, 6, 4}, {1, 5, 7}, {1, 7, 3}};
    for (const auto& t : f) m.faces.push_back({t[0], t[1], t[2]});
    return m;
}

TriangleMesh unit_square() {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

PointCloud random_cloud(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<Vec3> pts(n);
    for (Vec3& p : pts) p = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
    return PointCloud(std::move(pts));
}

Sketch random_sketch(Rng& rng, std::size_t strokes, std::size_t points_per_stroke) {
    Sketch s;
    for (std::size_t i = 0; i < strokes; ++i) {
        Stroke st;
        Vec2 p{rng.uniform(20, 236), rng.uniform(20, 236)};
        for (std::size_t k = 0; k < points_per_stroke; ++k) {
            st.points.push_back(p);
            p = p + Vec2{rng.uniform(-12, 12), rng.uniform(-12, 12)};
        }
        st.width = rng.uniform(0.5, 4.0);
        s.strokes.push_back(std::move(st));
    }
    return s;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string random_svg(Rng& rng, int variant) {
    auto coord = [&] { return num(rng.uniform(0, 256)); };
    std::string body;
    const int elements = 1 + static_cast<int>(rng.index(6));
    for (int e = 0; e < elements; ++e) {
        const std::string width = num(rng.uniform(0.5, 4));
        switch ((variant + e) % 4) {
            case 0:
                body += "<line x1=\"" + coord() + "\" y1=\"" + coord() + "\" x2=\"" + coord() + "\" y2=\"" + coord() +
                        "\" stroke-width=\"" + width + "\"/>\n";
                break;
            case 1: {
                body += "<polyline stroke-width=\"" + width + "\" points=\"";
                for (int k = 0; k < 5; ++k) body += coord() + "," + coord() + " ";
                body += "\"/>\n";
                break;
            }
            case 2:
                body += "<path style=\"fill:none;stroke-width:" + width + "\" d=\"M " + coord() + " " + coord() +
                        " C " + coord() + " " + coord() + " " + coord() + " " + coord() + " " + coord() + " " +
                        coord() + " c 10 -20 30 20 40 0 l 5 5 Z\"/>\n";
                break;
            default:
                body += "<g transform=\"translate(" + num(rng.uniform(-10, 10)) + "," + num(rng.uniform(-10, 10)) +
                        ") rotate(" + num(rng.uniform(-30, 30)) + ")\"><path stroke-width=\"" + width + "\" d=\"M " +
                        coord() + "," + coord() + " L " + coord() + "," + coord() + " m 3 3 l 10 0 10 10\"/></g>\n";
        }
    }
    return "<?xml version=\"1.0\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"256\" height=\"256\">\n" + body +
           "</svg>\n";
}

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sketch3d_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixture
