#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketch3d/metrics.hpp"

namespace sketch3d::app {

struct ShapeRow {
    std::string shape_id;
    std::size_t viewpoint_id = 0;
    std::string category;
    MetricReport report;
};

struct CategoryAggregate {
    std::string category;
    std::size_t count = 0;
    double chamfer = 0;
    std::optional<double> emd;  ///< mean over rows that carry an EMD
    double precision = 0;
    double recall = 0;
    double fscore = 0;
};

/// Per-category means, categories in sorted order. Sums run in shape_id
/// order so the values do not depend on manifest order.
std::vector<CategoryAggregate> aggregate(const std::vector<ShapeRow>& rows);

struct EvalSettings {
    std::uint64_t seed = 0;
    double threshold = kDefaultFscoreThreshold;
    ChamferReduce reduce = ChamferReduce::Sum;
    AlignMode align = AlignMode::CentroidScale;
};

struct Failure {
    std::string shape_id;
    std::string error;
};

/// CSV with header `shape_id,viewpoint_id,chamfer,emd,precision,recall,fscore`.
/// A missing EMD is an empty field.
std::string metrics_csv(const std::vector<ShapeRow>& rows);

nlohmann::json metrics_json(const EvalSettings& settings, const std::vector<ShapeRow>& rows,
                            const std::vector<Failure>& failures);

struct MetricTables {
    std::vector<ShapeRow> rows;
    std::vector<CategoryAggregate> aggregates;
};

/// Reads a metrics JSON document (or a bare array of records). When the
/// document embeds aggregates they must agree with means recomputed from
/// the records to 1e-12, otherwise ParseError.
MetricTables parse_metrics_json(const std::string& text);

/// Aligned text table with one row per category.
std::string format_table(const std::vector<CategoryAggregate>& aggregates);

/// Whitespace-separated columns for bar-chart plotting (gnuplot "using").
std::string format_gnuplot(const std::vector<CategoryAggregate>& aggregates);

}  // namespace sketch3d::app
