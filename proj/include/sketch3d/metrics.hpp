#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sketch3d/geometry.hpp"

namespace sketch3d {

/// Default F-score matching threshold (unit-normalized reference shapes).
inline constexpr double kDefaultFscoreThreshold = 0.01;
/// Points sampled from a predicted mesh.
inline constexpr std::size_t kPredictionSamples = 2048;
/// Points in the fixed reference sample of a ground-truth shape.
inline constexpr std::size_t kReferenceSamples = 100000;
/// Equal-size sample used for EMD on both sides.
inline constexpr std::size_t kEmdSamples = 2048;

enum class ChamferReduce { Sum, Mean };
enum class AlignMode { None, CentroidScale };

ChamferReduce parse_reduce(std::string_view s);
AlignMode parse_align(std::string_view s);
std::string_view to_string(ChamferReduce r);
std::string_view to_string(AlignMode a);

/// Sum over both clouds of the squared distance to the nearest neighbor in
/// the other cloud. With ChamferReduce::Mean each directional sum is divided
/// by its cloud size instead. Uses a kd-tree once n·m exceeds 10^6.
double chamfer_distance(const PointCloud& a, const PointCloud& b, ChamferReduce reduce = ChamferReduce::Sum);

/// min over bijections of the summed Euclidean distance. Requires equal sizes.
double emd_exact(const PointCloud& a, const PointCloud& b);

struct FscoreResult {
    double precision = 0;
    double recall = 0;
    double fscore = 0;
};

/// Harmonic mean of precision and recall, 0 when both are 0.
double harmonic_mean(double precision, double recall);

/// A point counts as matched when some point of the other cloud lies within
/// `threshold` (inclusive).
FscoreResult fscore(const PointCloud& pred, const PointCloud& ref, double threshold = kDefaultFscoreThreshold);

struct MetricReport {
    double chamfer = 0;
    std::optional<double> emd;
    double fscore = 0;
    double precision = 0;
    double recall = 0;
    double threshold = kDefaultFscoreThreshold;

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct EvalOptions {
    double threshold = kDefaultFscoreThreshold;
    ChamferReduce reduce = ChamferReduce::Sum;
    AlignMode align = AlignMode::CentroidScale;
    bool compute_emd = true;
    std::size_t prediction_samples = kPredictionSamples;
    std::size_t emd_samples = kEmdSamples;
};

/// The fixed reference sample of a ground-truth mesh.
PointCloud reference_sample(const TriangleMesh& mesh, std::uint64_t seed, std::size_t n = kReferenceSamples);

/// Full evaluation of one predicted mesh against a reference sample. The
/// reference is normalized to unit size; the prediction is sampled, then
/// aligned to it (or carried along by the same normalization when
/// align = None). EMD uses the first emd_samples reference points.
MetricReport evaluate_pair(const TriangleMesh& pred_mesh, const PointCloud& ref_cloud, std::uint64_t seed,
                           const EvalOptions& options = {});

}  // namespace sketch3d
