#include "sketch3d_app/commands.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <set>

#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"
#include "sketch3d/text_util.hpp"
#include "sketch3d_app/manifest.hpp"
#include "sketch3d_app/parallel.hpp"
#include "sketch3d_app/report.hpp"

namespace sketch3d::app {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t entry_seed(std::uint64_t master, const std::string& shape_id, const std::string& command) {
    return derive_seed(master, {shape_id, command});
}

namespace {

void write_json(const json& doc, const fs::path& path) { detail::write_file(path, doc.dump(2) + "\n"); }

void emit_json(const json& doc, const fs::path& path, std::ostream& out) {
    if (path.empty())
        out << doc.dump(2) << "\n";
    else
        write_json(doc, path);
}

std::string id_or_stem(const std::string& id, const fs::path& input) {
    return id.empty() ? input.stem().string() : id;
}

void require_file(const fs::path& p, const char* what) {
    if (p.empty()) throw InvalidInput(std::string(what) + " path is empty");
    if (!fs::exists(p)) throw Error(std::string(what) + " not found: " + p.string());
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

json params_json(const StylizeParams& p) {
    return {{"rot_max_deg", p.rot_max_deg},         {"scale_range", json::array({p.scale_lo, p.scale_hi})},
            {"trans_radius", p.trans_radius},       {"local_noise_max", p.local_noise_max},
            {"max_traces", p.max_traces},           {"width_mean", p.width_mean},
            {"width_var", p.width_var},             {"noise_wavelength", p.noise_wavelength}};
}

json sidecar_json(const std::string& shape_id, const fs::path& source, std::uint64_t seed, const StylizeParams& p,
                  const StylizeResult& result) {
    json traces = json::array();
    for (const TraceRecord& t : result.traces) {
        json controls = json::array();
        for (Vec2 c : t.noise_controls) controls.push_back(vec2_json(c));
        traces.push_back({{"stroke", t.stroke},
                          {"trace", t.trace},
                          {"trace_count", t.trace_count},
                          {"rotation_deg", t.rotation_deg},
                          {"scale", json::array({t.scale_x, t.scale_y})},
                          {"translation", vec2_json(t.translation)},
                          {"pivot", vec2_json(t.pivot)},
                          {"width", t.width},
                          {"noise_controls", std::move(controls)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"shape_id", shape_id},
            {"source", source.filename().string()},
            {"seed", seed},
            {"params", params_json(p)},
            {"traces", std::move(traces)}};
}

}  // namespace

// --- stylize -----------------------------------------------------------------

int cmd_stylize(const GlobalOptions& g, const StylizeOptions& o, std::ostream& log) {
    validate(o.params);
    if (o.manifest.empty()) {
        if (o.in.empty() || o.out.empty()) throw InvalidInput("stylize needs --in and --out, or --manifest");
        require_file(o.in, "input sketch");
        const std::string id = id_or_stem(o.id, o.in);
        const std::uint64_t seed = entry_seed(g.seed, id, "stylize");
        const StylizeResult result = stylize_traced(parse_svg(o.in), o.params, seed);
        write_svg(result.sketch, o.out);
        if (!o.raster.empty()) write_pgm(rasterize(result.sketch), o.raster);
        if (!o.sidecar.empty()) write_json(sidecar_json(id, o.in, seed, o.params, result), o.sidecar);
        log << "stylized " << o.in.string() << " -> " << o.out.string() << " (" << result.sketch.strokes.size()
            << " strokes)\n";
        return 0;
    }

    const DatasetManifest manifest = load_manifest(o.manifest);
    fs::create_directories(g.out_dir);
    std::vector<std::string> errors(manifest.entries.size());
    parallel_for(manifest.entries.size(), g.jobs, [&](std::size_t i) {
        const ManifestEntry& e = manifest.entries[i];
        try {
            if (!e.sketch_path) throw InvalidInput("entry has no sketch_path");
            require_file(*e.sketch_path, "sketch");
            const std::uint64_t seed = entry_seed(g.seed, e.shape_id, "stylize");
            const StylizeResult result = stylize_traced(parse_svg(*e.sketch_path), o.params, seed);
            const std::string stem = file_stem_for(e.shape_id);
            write_svg(result.sketch, g.out_dir / (stem + ".svg"));
            write_json(sidecar_json(e.shape_id, *e.sketch_path, seed, o.params, result),
                       g.out_dir / (stem + ".stylize.json"));
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty()) {
            log << "ok     " << manifest.entries[i].shape_id << "\n";
        } else {
            ++failed;
            log << "FAILED " << manifest.entries[i].shape_id << ": " << errors[i] << "\n";
        }
    }
    log << (manifest.entries.size() - failed) << "/" << manifest.entries.size() << " sketches stylized\n";
    return failed == 0 ? 0 : 1;
}

// --- sample-views ------------------------------------------------------------

int cmd_sample_views(const GlobalOptions& g, const SampleViewsOptions& o, std::ostream& log) {
    if (o.out.empty()) throw InvalidInput("sample-views needs --out");
    const std::vector<std::string> shapes = load_shape_list(o.shapes);
    std::vector<std::vector<Viewpoint>> views(shapes.size());
    parallel_for(shapes.size(), g.jobs, [&](std::size_t i) { views[i] = dataset_viewpoints(shapes[i], g.seed, o.params); });

    json cameras = json::array(), test_views = json::array();
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        for (std::size_t k = 0; k < views[s].size(); ++k) {
            const Viewpoint& v = views[s][k];
            cameras.push_back({{"shape_id", shapes[s]},
                               {"viewpoint_id", k},
                               {"azimuth_deg", v.azimuth_deg},
                               {"elevation_deg", v.elevation_deg},
                               {"distance", v.distance},
                               {"is_base", v.is_base},
                               {"base_id", v.base_id}});
        }
        test_views.push_back(
            {{"shape_id", shapes[s]}, {"viewpoint_id", select_test_viewpoint(shapes[s], views[s].size(), g.seed)}});
    }
    write_json({{"schema_version", kSchemaVersion},
                {"seed", g.seed},
                {"projection", "perspective"},
                {"cameras", std::move(cameras)},
                {"test_viewpoints", std::move(test_views)}},
               o.out);
    log << "wrote " << shapes.size() << " shapes x " << (shapes.empty() ? 0 : views[0].size()) << " viewpoints to "
        << o.out.string() << "\n";
    return 0;
}

// --- masks -------------------------------------------------------------------

json labels_to_json(const SparseLabelSet& labels, std::size_t rows, std::size_t cols) {
    auto coords = [](const std::vector<PixelCoord>& pts) {
        json arr = json::array();
        for (const PixelCoord& p : pts) arr.push_back(json::array({p.row, p.col}));
        return arr;
    };
    return {{"schema_version", kSchemaVersion},
            {"height", rows},
            {"width", cols},
            {"foreground", coords(labels.foreground)},
            {"background", coords(labels.background)}};
}

SparseLabelSet labels_from_json(const json& doc) {
    auto coords = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(std::string("labels JSON lacks '") + key + "'");
        std::vector<PixelCoord> pts;
        for (const json& p : doc[key]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
                throw ParseError(std::string("bad coordinate in '") + key + "'");
            pts.push_back({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
        }
        return pts;
    };
    if (!doc.is_object()) throw ParseError("labels JSON must be an object");
    return {coords("foreground"), coords("background")};
}

int cmd_sample_labels(const GlobalOptions& g, const SampleLabelsOptions& o, std::ostream& log) {
    if (o.out.empty()) throw InvalidInput("sample-labels needs --out");
    require_file(o.mask, "mask");
    const BinaryMask gt = read_pgm(o.mask);
    const std::string id = id_or_stem(o.id, o.mask);
    const SparseLabelSet labels = sample_labels(gt, entry_seed(g.seed, id, "sample-labels"));
    json doc = labels_to_json(labels, gt.rows(), gt.cols());
    doc["shape_id"] = id;
    write_json(doc, o.out);
    log << labels.foreground.size() << " foreground / " << labels.background.size() << " background labels -> "
        << o.out.string() << "\n";
    return 0;
}

int cmd_propagate(const GlobalOptions&, const PropagateOptions& o, std::ostream& log) {
    if (o.out.empty()) throw InvalidInput("propagate needs --out");
    require_file(o.sketch, "sketch");
    require_file(o.labels, "labels");
    const BinaryImage raster = o.sketch.extension() == ".svg" ? rasterize(parse_svg(o.sketch)) : read_pgm(o.sketch);
    json doc;
    try {
        doc = json::parse(detail::read_file(o.labels));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("labels file is not valid JSON: ") + e.what());
    }
    const BinaryMask mask = propagate_labels(raster, labels_from_json(doc), o.params);
    write_pgm(mask, o.out);
    log << "foreground pixels: " << mask.count() << " of " << mask.rows() * mask.cols() << "\n";
    return 0;
}

int cmd_eval_mask(const GlobalOptions&, const EvalMaskOptions& o, std::ostream& out) {
    require_file(o.pred, "predicted mask");
    require_file(o.gt, "ground-truth mask");
    const MaskReport m = mask_metrics(read_pgm(o.pred), read_pgm(o.gt));
    emit_json({{"schema_version", kSchemaVersion}, {"iou", m.iou}, {"precision", m.precision}, {"recall", m.recall}},
              o.out, out);
    return 0;
}

// --- eval-recon --------------------------------------------------------------

namespace {

bool is_cloud_file(const fs::path& p) {
    const auto ext = p.extension();
    return ext == ".xyz" || ext == ".bin" || ext == ".txt";
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

}  // namespace

int cmd_eval_recon(const GlobalOptions& g, const EvalReconOptions& o, std::ostream& log) {
    const DatasetManifest pred = load_manifest(o.pred_manifest);
    const DatasetManifest ref = load_manifest(o.ref_manifest);
    std::vector<std::string> only_pred, only_ref;
    for (const auto& e : pred.entries)
        if (!ref.find(e.shape_id)) only_pred.push_back(e.shape_id);
    for (const auto& e : ref.entries)
        if (!pred.find(e.shape_id)) only_ref.push_back(e.shape_id);
    if (!only_pred.empty() || !only_ref.empty())
        throw InvalidInput("manifests do not share shape ids; only in predictions: [" + join(only_pred) +
                           "]; only in references: [" + join(only_ref) + "]");

    EvalOptions eval;
    eval.threshold = o.threshold;
    eval.reduce = o.reduce;
    eval.align = o.align;
    eval.compute_emd = o.emd;
    eval.prediction_samples = o.pred_samples;
    eval.emd_samples = std::min(o.emd_samples, o.pred_samples);

    std::vector<ShapeRow> rows(pred.entries.size());
    std::vector<std::string> errors(pred.entries.size());
    parallel_for(pred.entries.size(), g.jobs, [&](std::size_t i) {
        const ManifestEntry& p = pred.entries[i];
        const ManifestEntry& r = *ref.find(p.shape_id);
        try {
            require_file(r.mesh_path, "reference");
            require_file(p.mesh_path, "prediction");
            const PointCloud ref_cloud = is_cloud_file(r.mesh_path)
                                             ? read_point_cloud(r.mesh_path)
                                             : reference_sample(load_obj(r.mesh_path),
                                                                entry_seed(g.seed, r.shape_id, "reference"),
                                                                o.ref_samples);
            rows[i].shape_id = p.shape_id;
            rows[i].category = r.category;
            rows[i].viewpoint_id = select_test_viewpoint(p.shape_id, o.view_choices, g.seed);
            rows[i].report = evaluate_pair(load_obj(p.mesh_path), ref_cloud,
                                           entry_seed(g.seed, p.shape_id, "eval-recon"), eval);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });

    std::vector<ShapeRow> ok;
    std::vector<Failure> failures;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (errors[i].empty()) {
            ok.push_back(rows[i]);
        } else {
            failures.push_back({pred.entries[i].shape_id, errors[i]});
            log << "FAILED " << pred.entries[i].shape_id << ": " << errors[i] << "\n";
        }
    }
    fs::create_directories(g.out_dir);
    detail::write_file(g.out_dir / "metrics.csv", metrics_csv(ok));
    write_json(metrics_json({g.seed, o.threshold, o.reduce, o.align}, ok, failures), g.out_dir / "metrics.json");
    log << ok.size() << "/" << rows.size() << " shapes evaluated -> " << (g.out_dir / "metrics.csv").string()
        << ", " << (g.out_dir / "metrics.json").string() << "\n";
    return failures.empty() ? 0 : 1;
}

// --- regloss -----------------------------------------------------------------

namespace {

struct CsvTable {
    std::size_t rows = 0, cols = 0;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> values;
};

CsvTable parse_counted_csv(const std::string& text, std::size_t extra_cols, const char* what) {
    const auto lines = detail::split_lines(text);
    std::size_t line_no = 0;
    CsvTable t;
    bool have_header = false;
    for (std::string_view raw : lines) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, ',');
        if (!have_header) {
            long long b = 0, d = 0;
            if (fields.size() != 2 || !detail::parse_int(fields[0], b) || !detail::parse_int(fields[1], d) || b < 1 || d < 1)
                throw ParseError(std::string(what) + ": first line must be 'B,d'", line_no);
            t.rows = static_cast<std::size_t>(b);
            t.cols = static_cast<std::size_t>(d);
            have_header = true;
            continue;
        }
        if (fields.size() != 1 + extra_cols + t.cols)
            throw ParseError(std::string(what) + ": expected " + std::to_string(1 + extra_cols + t.cols) + " fields",
                             line_no);
        t.ids.emplace_back(detail::trim(fields[0]));
        std::vector<double> vals;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v = 0;
            if (!detail::parse_double(fields[k], v)) throw ParseError(std::string(what) + ": bad number", line_no);
            vals.push_back(v);
        }
        t.values.push_back(std::move(vals));
    }
    if (!have_header) throw ParseError(std::string(what) + ": empty file");
    if (t.values.size() != t.rows)
        throw ParseError(std::string(what) + ": header says " + std::to_string(t.rows) + " rows, found " +
                         std::to_string(t.values.size()));
    return t;
}

}  // namespace

EmbeddingBatch parse_embeddings_csv(const std::string& text) {
    const CsvTable t = parse_counted_csv(text, 0, "embeddings");
    EmbeddingBatch emb;
    emb.rows = Matrix(t.rows, t.cols);
    for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c) emb.rows(r, c) = t.values[r][c];
    emb.shape_ids = t.ids;
    return emb;
}

ShapeDistanceMatrix parse_distances_csv(const std::string& text, std::vector<std::string>* ids) {
    const CsvTable t = parse_counted_csv(text, 1, "distances");
    if (t.rows != t.cols) throw ParseError("distances: header must be 'B,B'");
    ShapeDistanceMatrix d;
    d.d_cd = Matrix(t.rows, t.rows);
    for (std::size_t r = 0; r < t.rows; ++r) {
        d.sigma.push_back(t.values[r][0]);
        for (std::size_t c = 0; c < t.rows; ++c) d.d_cd(r, c) = t.values[r][c + 1];
    }
    if (ids) *ids = t.ids;
    return d;
}

int cmd_regloss(const GlobalOptions&, const RegLossOptions& o, std::ostream& out) {
    require_file(o.embeddings, "embeddings");
    require_file(o.distances, "distances");
    const EmbeddingBatch emb = parse_embeddings_csv(detail::read_file(o.embeddings));
    std::vector<std::string> ids;
    const ShapeDistanceMatrix d = parse_distances_csv(detail::read_file(o.distances), &ids);
    if (ids != emb.shape_ids) throw InvalidInput("embedding and distance files list different shape ids or orders");

    const LossReport report = regression_loss(emb, d);
    json grad = json::array();
    for (std::size_t r = 0; r < report.grad.rows(); ++r) {
        const auto row = report.grad.row(r);
        grad.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json doc = {{"schema_version", kSchemaVersion},
                {"batch", emb.size()},
                {"dim", emb.dim()},
                {"shape_ids", emb.shape_ids},
                {"loss", report.loss},
                {"grad", std::move(grad)}};
    if (o.grad_check) {
        constexpr double h = 1e-5;
        const Matrix numeric = finite_difference_gradient(emb, d, h);
        doc["grad_check"] = {{"h", h},
                             {"max_relative_error", gradient_relative_error(report.grad, numeric)},
                             {"kink_margin", kink_margin(emb, d)}};
    }
    emit_json(doc, o.out, out);
    return 0;
}

// --- report ------------------------------------------------------------------

int cmd_report(const GlobalOptions&, const ReportOptions& o, std::ostream& out) {
    require_file(o.in, "metrics JSON");
    const MetricTables tables = parse_metrics_json(detail::read_file(o.in));
    const std::string table = format_table(tables.aggregates);
    if (o.out.empty())
        out << table;
    else
        detail::write_file(o.out, table);
    if (!o.gnuplot.empty()) detail::write_file(o.gnuplot, format_gnuplot(tables.aggregates));
    return 0;
}

}  // namespace sketch3d::app
