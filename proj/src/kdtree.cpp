#include "sketch3d/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "sketch3d/error.hpp"

namespace sketch3d {

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size) : points_(points) {
    if (points.empty()) throw InvalidInput("kd-tree over an empty point set");
    if (points.size() >= std::numeric_limits<std::uint32_t>::max()) throw InvalidInput("point set too large");
    order_.resize(points.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * points.size() / std::max<std::size_t>(leaf_size, 1) + 1);
    build(0, static_cast<std::uint32_t>(order_.size()), std::max<std::size_t>(leaf_size, 1));
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    if (end - begin <= leaf_size) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        const Vec3 p = points_[order_[i]];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 ext = hi - lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    if (ext[axis] == 0) {
        // All points coincide; keep them in one leaf.
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
    const double split = points_[order_[mid]][axis];
    const std::uint32_t left = build(begin, mid, leaf_size);
    const std::uint32_t right = build(mid, end, leaf_size);
    Node& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

KdTree::Hit KdTree::nearest(Vec3 query) const {
    Hit best{0, std::numeric_limits<double>::infinity()};
    struct Pending {
        std::uint32_t node;
        double plane_sq;
    };
    Pending stack[128];
    int top = 0;
    stack[top++] = {0, 0.0};
    while (top > 0) {
        const Pending cur = stack[--top];
        if (cur.plane_sq > best.squared_distance) continue;
        const Node& node = nodes_[cur.node];
        if (node.axis < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const double d = squared_norm(query - points_[order_[i]]);
                if (d < best.squared_distance || (d == best.squared_distance && order_[i] < best.index)) {
                    best = {order_[i], d};
                }
            }
            continue;
        }
        // Left holds coordinates <= split, right holds >= split.
        const double delta = query[node.axis] - node.split;
        const std::uint32_t near = delta <= 0 ? node.left : node.right;
        const std::uint32_t far = delta <= 0 ? node.right : node.left;
        stack[top++] = {far, delta * delta};
        stack[top++] = {near, 0.0};
    }
    return best;
}

}  // namespace sketch3d
