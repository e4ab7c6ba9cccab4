#include "sketch3d/maskkit.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"

namespace sketch3d {

namespace {

std::vector<PixelCoord> place_labels(const BinaryMask& gt, bool want, std::uint64_t count, Rng& rng,
                                     const LabelSamplingParams& params) {
    const double rows = static_cast<double>(gt.rows()), cols = static_cast<double>(gt.cols());
    std::vector<PixelCoord> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < params.retry_cap && !placed; ++attempt) {
            const double r = std::round(rng.normal(0.5 * rows, 0.5 * rows));
            const double c = std::round(rng.normal(0.5 * cols, 0.5 * cols));
            if (r < 0 || c < 0 || r >= rows || c >= cols) continue;
            const PixelCoord px{static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
            if (gt(px.row, px.col) != want) continue;
            out.push_back(px);
            placed = true;
        }
        if (!placed) throw SamplingError("label placement exceeded the retry cap");
    }
    return out;
}

}  // namespace

SparseLabelSet sample_labels(const BinaryMask& gt, std::uint64_t seed, const LabelSamplingParams& params) {
    const std::size_t fg = gt.count();
    if (fg == 0 || fg == gt.rows() * gt.cols())
        throw InvalidInput("label sampling needs both foreground and background pixels");
    Rng rng(seed);
    SparseLabelSet labels;
    const std::uint64_t n_fg = rng.geometric_trials(params.success_probability);
    const std::uint64_t n_bg = rng.geometric_trials(params.success_probability);
    labels.foreground = place_labels(gt, true, n_fg, rng, params);
    labels.background = place_labels(gt, false, n_bg, rng, params);
    return labels;
}

MaskReport mask_metrics(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.rows() != gt.rows() || pred.cols() != gt.cols()) throw InvalidInput("mask dimensions differ");
    std::size_t p = 0, g = 0, both = 0;
    for (std::size_t r = 0; r < gt.rows(); ++r) {
        for (std::size_t c = 0; c < gt.cols(); ++c) {
            const bool a = pred(r, c), b = gt(r, c);
            p += a;
            g += b;
            both += a && b;
        }
    }
    const std::size_t uni = p + g - both;
    MaskReport m;
    m.precision = p > 0 ? static_cast<double>(both) / static_cast<double>(p) : (g == 0 ? 1.0 : 0.0);
    m.recall = g > 0 ? static_cast<double>(both) / static_cast<double>(g) : (p == 0 ? 1.0 : 0.0);
    m.iou = uni > 0 ? static_cast<double>(both) / static_cast<double>(uni) : 1.0;
    return m;
}

BinaryMask propagate_labels(const BinaryImage& raster, const SparseLabelSet& labels, const PropagationParams& params) {
    if (labels.foreground.empty() || labels.background.empty())
        throw InvalidInput("propagation needs at least one foreground and one background label");
    if (params.stroke_cost <= 0 || params.free_cost <= 0) throw InvalidInput("step costs must be positive");
    const std::size_t rows = raster.rows(), cols = raster.cols();
    constexpr long long kUnreached = std::numeric_limits<long long>::max();
    std::vector<long long> cost(rows * cols, kUnreached);
    std::vector<std::uint8_t> cls(rows * cols, 2);

    // (cost, class, pixel): background (0) pops before foreground (1) on ties.
    using Item = std::tuple<long long, std::uint8_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    auto seed = [&](const std::vector<PixelCoord>& pts, std::uint8_t label) {
        for (const PixelCoord& p : pts) {
            if (p.row >= rows || p.col >= cols) throw InvalidInput("label outside the image");
            const std::size_t i = p.row * cols + p.col;
            if (cost[i] > 0 || (cost[i] == 0 && label < cls[i])) {
                cost[i] = 0;
                cls[i] = label;
                queue.emplace(0, label, i);
            }
        }
    };
    seed(labels.background, 0);
    seed(labels.foreground, 1);

    while (!queue.empty()) {
        const auto [c, label, i] = queue.top();
        queue.pop();
        if (c != cost[i] || label != cls[i]) continue;
        const std::size_t r = i / cols, col = i % cols;
        const std::size_t nbr[4] = {r > 0 ? i - cols : i, r + 1 < rows ? i + cols : i, col > 0 ? i - 1 : i,
                                    col + 1 < cols ? i + 1 : i};
        for (std::size_t j : nbr) {
            if (j == i) continue;
            const long long step = raster(j / cols, j % cols) ? params.stroke_cost : params.free_cost;
            const long long next = c + step;
            if (next < cost[j] || (next == cost[j] && label < cls[j])) {
                cost[j] = next;
                cls[j] = label;
                queue.emplace(next, label, j);
            }
        }
    }

    BinaryMask out(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) out.set(i / cols, i % cols, cls[i] == 1);
    return out;
}

}  // namespace sketch3d
