#include <ostream>

#include <CLI11.hpp>

#include "sketch3d/error.hpp"
#include "sketch3d_app/commands.hpp"
#include "sketch3d_app/config.hpp"

namespace sketch3d::app {

namespace {

void add_stylize_params(CLI::App* cmd, StylizeParams& p) {
    cmd->add_option("--rot-max", p.rot_max_deg, "rotation magnitude bound (degrees)")->capture_default_str();
    cmd->add_option("--scale-lo", p.scale_lo, "lower per-axis scale factor")->capture_default_str();
    cmd->add_option("--scale-hi", p.scale_hi, "upper per-axis scale factor")->capture_default_str();
    cmd->add_option("--trans-radius", p.trans_radius, "translation disk radius (px)")->capture_default_str();
    cmd->add_option("--noise-max", p.local_noise_max, "local noise offset bound (px)")->capture_default_str();
    cmd->add_option("--noise-wavelength", p.noise_wavelength, "noise control spacing (px)")->capture_default_str();
    cmd->add_option("--max-traces", p.max_traces, "over-sketching traces per stroke")->capture_default_str();
    cmd->add_option("--width-mean", p.width_mean, "stroke width mean (px)")->capture_default_str();
    cmd->add_option("--width-var", p.width_var, "stroke width variance (px^2)")->capture_default_str();
}

// Splices config-file entries in as "--key=value": top-level keys at the
// front, subcommand keys right after the subcommand name, so explicit flags
// (parsed later, last one wins) override the file. Keys unknown to the chosen subcommand and the top level are
// rejected.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::size_t sub_at = args.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].empty() || args[i][0] == '-') continue;
        try {
            sub = app.get_subcommand(args[i]);
            sub_at = i;
            break;
        } catch (const CLI::OptionNotFound&) {
        }
    }
    std::vector<std::string> global, local;
    for (const auto& [key, value] : load_config(config_path)) {
        const std::string flag = "--" + key;
        if (key == "config") continue;
        if (sub != nullptr && sub->get_option_no_throw(flag) != nullptr)
            local.push_back(flag + "=" + value);
        else if (app.get_option_no_throw(flag) != nullptr)
            global.push_back(flag + "=" + value);
        else
            throw ParseError("config key '" + key + "' is not an option of this command");
    }
    if (sub_at < args.size())
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_at + 1), local.begin(), local.end());
    args.insert(args.begin(), global.begin(), global.end());
    return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sketch-to-3D toolkit: sketch stylization, viewpoint and label sampling, "
                 "embedding regression loss, and reconstruction metrics."};
    app.name(argc > 0 ? argv[0] : "sketch3d");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::string config_unused;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for batch outputs")->capture_default_str();
    app.add_option("--config", config_unused, "flat key=value file mirroring the flags; flags win");

    StylizeOptions stylize;
    auto* c_stylize = app.add_subcommand("stylize", "randomly deform the strokes of SVG sketches");
    c_stylize->add_option("--in", stylize.in, "input SVG");
    c_stylize->add_option("--out", stylize.out, "output SVG");
    c_stylize->add_option("--raster", stylize.raster, "also write the rasterized result (PGM)");
    c_stylize->add_option("--sidecar", stylize.sidecar, "also write sampled parameters (JSON)");
    c_stylize->add_option("--manifest", stylize.manifest, "dataset manifest (batch mode, writes to --out-dir)");
    c_stylize->add_option("--id", stylize.id, "stream key in single-file mode (default: input stem)");
    add_stylize_params(c_stylize, stylize.params);

    SampleViewsOptions views;
    auto* c_views = app.add_subcommand("sample-views", "generate the per-shape camera set");
    c_views->add_option("--shapes", views.shapes, "shape id list, one per line")->required();
    c_views->add_option("--out", views.out, "camera manifest JSON")->required();
    c_views->add_option("--angle-sigma", views.params.angle_sigma_deg, "angle std-dev (degrees)")->capture_default_str();
    c_views->add_option("--distance-sigma", views.params.distance_sigma, "distance std-dev")->capture_default_str();

    SampleLabelsOptions labels;
    auto* c_labels = app.add_subcommand("sample-labels", "draw sparse foreground/background hints from a mask");
    c_labels->add_option("--mask", labels.mask, "ground-truth mask (PGM)")->required();
    c_labels->add_option("--out", labels.out, "labels JSON")->required();
    c_labels->add_option("--id", labels.id, "stream key (default: mask stem)");

    PropagateOptions propagate;
    auto* c_prop = app.add_subcommand("propagate", "grow a foreground mask from sparse labels");
    c_prop->add_option("--sketch", propagate.sketch, "sketch (SVG or PGM raster)")->required();
    c_prop->add_option("--labels", propagate.labels, "labels JSON")->required();
    c_prop->add_option("--out", propagate.out, "output mask (PGM)")->required();
    c_prop->add_option("--stroke-cost", propagate.params.stroke_cost, "cost of crossing a stroke pixel")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    EvalMaskOptions eval_mask;
    auto* c_emask = app.add_subcommand("eval-mask", "IoU / precision / recall of a predicted mask");
    c_emask->add_option("--pred", eval_mask.pred, "predicted mask (PGM)")->required();
    c_emask->add_option("--gt", eval_mask.gt, "ground-truth mask (PGM)")->required();
    c_emask->add_option("--out", eval_mask.out, "report JSON (default: stdout)");

    EvalReconOptions recon;
    std::string reduce = "sum", align = "centroid-scale";
    bool no_emd = false;
    auto* c_recon = app.add_subcommand("eval-recon", "Chamfer / EMD / F-score of predicted meshes");
    c_recon->add_option("--pred", recon.pred_manifest, "manifest of predicted meshes")->required();
    c_recon->add_option("--ref", recon.ref_manifest, "manifest of reference meshes or clouds")->required();
    c_recon->add_option("--threshold", recon.threshold, "F-score distance threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_recon->add_option("--reduce", reduce, "Chamfer reduction")->check(CLI::IsMember({"sum", "mean"}))->capture_default_str();
    c_recon->add_option("--align", align, "prediction alignment")
        ->check(CLI::IsMember({"none", "centroid-scale"}))
        ->capture_default_str();
    c_recon->add_flag("--no-emd", no_emd, "skip the exact EMD");
    c_recon->add_option("--pred-samples", recon.pred_samples, "points sampled per prediction")->capture_default_str();
    c_recon->add_option("--ref-samples", recon.ref_samples, "points sampled per reference mesh")->capture_default_str();

    RegLossOptions regloss;
    auto* c_reg = app.add_subcommand("regloss", "embedding regression loss and its gradient");
    c_reg->add_option("--embeddings", regloss.embeddings, "embeddings CSV")->required();
    c_reg->add_option("--distances", regloss.distances, "distances CSV")->required();
    c_reg->add_option("--out", regloss.out, "result JSON (default: stdout)");
    c_reg->add_flag("--grad-check", regloss.grad_check, "compare against central finite differences");

    ReportOptions report;
    auto* c_report = app.add_subcommand("report", "summary table of a metrics JSON");
    c_report->add_option("--in", report.in, "metrics JSON")->required();
    c_report->add_option("--out", report.out, "table output (default: stdout)");
    c_report->add_option("--gnuplot", report.gnuplot, "bar-chart data file");

    try {
        std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
        args = expand_config(app, std::move(args));
        std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c_stylize) return cmd_stylize(g, stylize, out);
        if (*c_views) return cmd_sample_views(g, views, out);
        if (*c_labels) return cmd_sample_labels(g, labels, out);
        if (*c_prop) return cmd_propagate(g, propagate, out);
        if (*c_emask) return cmd_eval_mask(g, eval_mask, out);
        if (*c_recon) {
            recon.reduce = parse_reduce(reduce);
            recon.align = parse_align(align);
            recon.emd = !no_emd;
            return cmd_eval_recon(g, recon, out);
        }
        if (*c_reg) return cmd_regloss(g, regloss, out);
        if (*c_report) return cmd_report(g, report, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace sketch3d::app
