#include "sketch3d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sketch3d/assignment.hpp"
#include "sketch3d/error.hpp"
#include "sketch3d/kdtree.hpp"

namespace sketch3d {

ChamferReduce parse_reduce(std::string_view s) {
    if (s == "sum") return ChamferReduce::Sum;
    if (s == "mean") return ChamferReduce::Mean;
    throw InvalidInput("unknown reduce mode '" + std::string(s) + "' (expected sum|mean)");
}

AlignMode parse_align(std::string_view s) {
    if (s == "none") return AlignMode::None;
    if (s == "centroid-scale") return AlignMode::CentroidScale;
    throw InvalidInput("unknown align mode '" + std::string(s) + "' (expected none|centroid-scale)");
}

std::string_view to_string(ChamferReduce r) { return r == ChamferReduce::Sum ? "sum" : "mean"; }
std::string_view to_string(AlignMode a) { return a == AlignMode::None ? "none" : "centroid-scale"; }

namespace {

constexpr double kBruteForceLimit = 1e6;

// Squared nearest-neighbor distance from every point of `from` into `to`.
std::vector<double> nearest_squared(const PointCloud& from, const PointCloud& to) {
    std::vector<double> out(from.size());
    if (static_cast<double>(from.size()) * static_cast<double>(to.size()) <= kBruteForceLimit) {
        for (std::size_t i = 0; i < from.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to.points()) best = std::min(best, squared_norm(from[i] - q));
            out[i] = best;
        }
        return out;
    }
    const KdTree tree(to.points());
    for (std::size_t i = 0; i < from.size(); ++i) out[i] = tree.nearest(from[i]).squared_distance;
    return out;
}

void require_nonempty(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw InvalidInput("metric on an empty point cloud");
}

}  // namespace

double chamfer_distance(const PointCloud& a, const PointCloud& b, ChamferReduce reduce) {
    require_nonempty(a, b);
    double ab = 0, ba = 0;
    for (double d : nearest_squared(a, b)) ab += d;
    for (double d : nearest_squared(b, a)) ba += d;
    if (reduce == ChamferReduce::Mean) {
        ab /= static_cast<double>(a.size());
        ba /= static_cast<double>(b.size());
    }
    // a+b == b+a in IEEE arithmetic, so swapping the arguments is exact.
    return ab + ba;
}

double emd_exact(const PointCloud& a, const PointCloud& b) {
    require_nonempty(a, b);
    if (a.size() != b.size())
        throw InvalidInput("EMD needs equal-size clouds (" + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()) + ")");
    const std::size_t n = a.size();
    CostMatrix cost(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = norm(a[i] - b[j]);
    return solve_assignment(cost).cost;
}

double harmonic_mean(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0 ? 2.0 * precision * recall / denom : 0.0;
}

FscoreResult fscore(const PointCloud& pred, const PointCloud& ref, double threshold) {
    require_nonempty(pred, ref);
    if (!(threshold > 0) || !std::isfinite(threshold)) throw InvalidInput("F-score threshold must be positive");
    auto matched_fraction = [threshold](const PointCloud& from, const PointCloud& to) {
        std::size_t hits = 0;
        for (double d2 : nearest_squared(from, to))
            if (std::sqrt(d2) <= threshold) ++hits;
        return static_cast<double>(hits) / static_cast<double>(from.size());
    };
    FscoreResult r;
    r.precision = matched_fraction(pred, ref);
    r.recall = matched_fraction(ref, pred);
    r.fscore = harmonic_mean(r.precision, r.recall);
    return r;
}

PointCloud reference_sample(const TriangleMesh& mesh, std::uint64_t seed, std::size_t n) {
    return sample_surface(mesh, n, seed);
}

MetricReport evaluate_pair(const TriangleMesh& pred_mesh, const PointCloud& ref_cloud, std::uint64_t seed,
                           const EvalOptions& options) {
    if (ref_cloud.size() < options.emd_samples && options.compute_emd)
        throw InvalidInput("reference cloud has fewer points than the EMD sample size");
    const SimilarityTransform to_unit = unit_normalization(ref_cloud);
    const PointCloud ref = to_unit.apply(ref_cloud);
    const PointCloud raw_pred = sample_surface(pred_mesh, options.prediction_samples, seed);
    const PointCloud pred = options.align == AlignMode::CentroidScale ? align_to_reference(raw_pred, ref)
                                                                     : to_unit.apply(raw_pred);

    MetricReport report;
    report.threshold = options.threshold;
    report.chamfer = chamfer_distance(pred, ref, options.reduce);
    const FscoreResult f = fscore(pred, ref, options.threshold);
    report.precision = f.precision;
    report.recall = f.recall;
    report.fscore = f.fscore;
    if (options.compute_emd) {
        const PointCloud pred_emd =
            pred.size() == options.emd_samples ? pred : pred.prefix(std::min(options.emd_samples, pred.size()));
        report.emd = emd_exact(pred_emd, ref.prefix(pred_emd.size()));
    }
    return report;
}

}  // namespace sketch3d
