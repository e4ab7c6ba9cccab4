#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketch3d/embedloss.hpp"
#include "sketch3d/maskkit.hpp"
#include "sketch3d/metrics.hpp"
#include "sketch3d/sketch.hpp"
#include "sketch3d/viewpoints.hpp"

namespace sketch3d::app {

struct GlobalOptions {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::filesystem::path out_dir = ".";
};

/// Seed of the stream used by `command` for one entry.
std::uint64_t entry_seed(std::uint64_t master, const std::string& shape_id, const std::string& command);

struct StylizeOptions {
    std::filesystem::path in, out, raster, sidecar;  ///< single-file mode
    std::filesystem::path manifest;                  ///< batch mode (outputs under out_dir)
    std::string id;                                  ///< stream key in single-file mode; defaults to the input stem
    StylizeParams params;
};
int cmd_stylize(const GlobalOptions& g, const StylizeOptions& o, std::ostream& log);

struct SampleViewsOptions {
    std::filesystem::path shapes, out;
    ViewpointParams params;
};
int cmd_sample_views(const GlobalOptions& g, const SampleViewsOptions& o, std::ostream& log);

struct SampleLabelsOptions {
    std::filesystem::path mask, out;
    std::string id;
};
int cmd_sample_labels(const GlobalOptions& g, const SampleLabelsOptions& o, std::ostream& log);

struct PropagateOptions {
    std::filesystem::path sketch;  ///< .svg (rasterized first) or .pgm
    std::filesystem::path labels, out;
    PropagationParams params;
};
int cmd_propagate(const GlobalOptions& g, const PropagateOptions& o, std::ostream& log);

struct EvalMaskOptions {
    std::filesystem::path pred, gt, out;
};
int cmd_eval_mask(const GlobalOptions& g, const EvalMaskOptions& o, std::ostream& out);

struct EvalReconOptions {
    std::filesystem::path pred_manifest, ref_manifest;
    double threshold = kDefaultFscoreThreshold;
    ChamferReduce reduce = ChamferReduce::Sum;
    AlignMode align = AlignMode::CentroidScale;
    bool emd = true;
    std::size_t pred_samples = kPredictionSamples;
    std::size_t ref_samples = kReferenceSamples;
    std::size_t emd_samples = kEmdSamples;
    std::size_t view_choices = 48;
};
int cmd_eval_recon(const GlobalOptions& g, const EvalReconOptions& o, std::ostream& log);

struct RegLossOptions {
    std::filesystem::path embeddings, distances, out;
    bool grad_check = false;
};
int cmd_regloss(const GlobalOptions& g, const RegLossOptions& o, std::ostream& out);

struct ReportOptions {
    std::filesystem::path in, out, gnuplot;
};
int cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out);

// File formats shared with tests.
nlohmann::json labels_to_json(const SparseLabelSet& labels, std::size_t rows, std::size_t cols);
SparseLabelSet labels_from_json(const nlohmann::json& doc);

/// Embeddings CSV: first line "B,d"; then B lines "shape_id,v_1,...,v_d".
EmbeddingBatch parse_embeddings_csv(const std::string& text);
/// Distances CSV: first line "B,B"; then B lines "shape_id,sigma,d_1,...,d_B".
ShapeDistanceMatrix parse_distances_csv(const std::string& text, std::vector<std::string>* ids = nullptr);

/// Full command-line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sketch3d::app
