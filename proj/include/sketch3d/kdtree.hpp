#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sketch3d/geometry.hpp"

namespace sketch3d {

/// Static 3D kd-tree for exact nearest-neighbor queries. Keeps a reference
/// to the indexed points; they must outlive the tree.
class KdTree {
public:
    explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = 12);

    struct Hit {
        std::size_t index;
        double squared_distance;
    };

    /// Nearest indexed point to `query`. The squared distance is computed
    /// exactly as squared_norm(query - point), so it matches a linear scan
    /// bit for bit.
    Hit nearest(Vec3 query) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        // Leaf when axis < 0: [begin, end) into order_.
        int axis = -1;
        double split = 0;
        std::uint32_t begin = 0, end = 0;
        std::uint32_t left = 0, right = 0;
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);

    std::span<const Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace sketch3d
