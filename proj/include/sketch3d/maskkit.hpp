#pragma once

#include <cstdint>
#include <vector>

#include "sketch3d/image.hpp"

namespace sketch3d {

struct PixelCoord {
    std::size_t row = 0;
    std::size_t col = 0;

    friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Sparse foreground/background hints.
struct SparseLabelSet {
    std::vector<PixelCoord> foreground;
    std::vector<PixelCoord> background;

    friend bool operator==(const SparseLabelSet&, const SparseLabelSet&) = default;
};

struct LabelSamplingParams {
    double success_probability = 1.0 / 8.0;  ///< labels per class ~ Geometric(p), support {1, 2, ...}
    int retry_cap = 100000;                  ///< position redraws per label
};

/// Draws a label count per class from a Geometric(p) (number of trials),
/// then places each label by rounding a sample of
/// Normal(mean = (H/2, W/2), cov = diag((H/2)², (W/2)²)) to the nearest
/// pixel, redrawing while it falls off the image or on the other class.
SparseLabelSet sample_labels(const BinaryMask& gt, std::uint64_t seed, const LabelSamplingParams& params = {});

struct MaskReport {
    double iou = 0;
    double precision = 0;
    double recall = 0;

    friend bool operator==(const MaskReport&, const MaskReport&) = default;
};

/// IoU, precision and recall of `pred` against `gt`.
/// Empty denominators: precision (recall) is 1 when both masks are empty and
/// 0 when only pred (gt) is empty; IoU is 1 when both are empty.
MaskReport mask_metrics(const BinaryMask& pred, const BinaryMask& gt);

struct PropagationParams {
    long long stroke_cost = 50;  ///< cost of stepping onto a stroke pixel
    long long free_cost = 1;     ///< cost of stepping onto any other pixel
};

/// Geodesic nearest-label classification: each pixel takes the class of the
/// label it can reach most cheaply over the 4-connected grid, where
/// entering a stroke pixel costs `stroke_cost`. Ties go to background.
BinaryMask propagate_labels(const BinaryImage& sketch_raster, const SparseLabelSet& labels,
                            const PropagationParams& params = {});

}  // namespace sketch3d
