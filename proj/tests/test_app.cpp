#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "sketch3d/error.hpp"
#include "sketch3d/text_util.hpp"
#include "sketch3d_app/commands.hpp"
#include "sketch3d_app/config.hpp"
#include "sketch3d_app/manifest.hpp"
#include "sketch3d_app/report.hpp"

using namespace sketch3d;
using namespace sketch3d::app;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sketch3d");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char* kCubeObj =
    "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n"
    "f 1 3 2\nf 1 4 3\nf 5 6 7\nf 5 7 8\nf 1 2 6\nf 1 6 5\nf 2 3 7\nf 2 7 6\nf 3 4 8\nf 3 8 7\nf 4 1 5\nf 4 5 8\n";

const char* kWedgeObj = "v 0 0 0\nv 2 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n";

std::string manifest_json(const std::vector<std::array<std::string, 3>>& entries) {
    nlohmann::json doc{{"schema_version", 1}, {"root", "."}, {"entries", nlohmann::json::array()}};
    for (const auto& [id, mesh, cat] : entries) doc["entries"].push_back({{"shape_id", id}, {"mesh_path", mesh}, {"category", cat}});
    return doc.dump(2);
}

}  // namespace

TEST_CASE("manifest parsing") {
    const auto dir = fixture::temp_dir("app_manifest");
    detail::write_file(dir / "m.json",
                       R"({"schema_version": 1, "root": "data", "entries": [
                            {"shape_id": "a", "mesh_path": "a.obj", "sketch_path": "a.svg", "category": "chair"},
                            {"shape_id": "b/c", "mesh_path": "/abs/b.obj"}]})");
    const DatasetManifest m = load_manifest(dir / "m.json");
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].mesh_path == dir / "data" / "a.obj");
    CHECK(m.entries[0].sketch_path == dir / "data" / "a.svg");
    CHECK(m.entries[1].mesh_path == fs::path("/abs/b.obj"));
    CHECK(m.entries[1].category == "uncategorized");
    CHECK(m.find("b/c") != nullptr);
    CHECK(m.find("zzz") == nullptr);
    CHECK(file_stem_for("b/c").find('/') == std::string::npos);

    CHECK_THROWS_AS(parse_manifest(R"({"schema_version": 1, "entries": [{"shape_id": "a", "mesh_path": "x"},
                                       {"shape_id": "a", "mesh_path": "y"}]})", dir),
                    Error);
    CHECK_THROWS_AS(parse_manifest(R"({"schema_version": 2, "entries": []})", dir), Error);
    CHECK_THROWS_AS(parse_manifest("{not json", dir), Error);
}

TEST_CASE("shape list and config files") {
    const auto dir = fixture::temp_dir("app_lists");
    detail::write_file(dir / "shapes.txt", "# ids\nchair_1\n\n  table_2  \n");
    CHECK(load_shape_list(dir / "shapes.txt") == std::vector<std::string>{"chair_1", "table_2"});
    const auto cfg = parse_config("# run\nseed = 7\n--jobs=2\nreduce = \"mean\"  # trailing\n");
    REQUIRE(cfg.size() == 3);
    CHECK(cfg[0] == std::pair<std::string, std::string>{"seed", "7"});
    CHECK(cfg[1] == std::pair<std::string, std::string>{"jobs", "2"});
    CHECK(cfg[2] == std::pair<std::string, std::string>{"reduce", "mean"});
    CHECK_THROWS_AS(parse_config("novalue\n"), ParseError);
}

TEST_CASE("report: aggregates, table and recomputation check") {
    std::vector<ShapeRow> rows;
    auto row = [](std::string id, std::string cat, double c, double f) {
        ShapeRow r;
        r.shape_id = std::move(id);
        r.category = std::move(cat);
        r.report.chamfer = c;
        r.report.fscore = f;
        r.report.precision = f;
        r.report.recall = f;
        return r;
    };
    rows.push_back(row("t1", "table", 0.3, 0.2));
    rows.push_back(row("c1", "chair", 0.1, 0.5));
    rows.push_back(row("c2", "chair", 0.2, 0.7));
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].category == "chair");
    CHECK(agg[0].count == 2);
    CHECK(agg[0].chamfer == doctest::Approx(0.15).epsilon(1e-15));
    CHECK_FALSE(agg[0].emd.has_value());

    const std::string text = metrics_json({}, rows, {}).dump();
    const MetricTables t = parse_metrics_json(text);
    CHECK(t.rows.size() == 3);
    REQUIRE(t.aggregates.size() == 2);
    CHECK(std::abs(t.aggregates[1].chamfer - 0.3) < 1e-12);

    // Tampered aggregate.
    auto doc = nlohmann::json::parse(text);
    doc["aggregates"][0]["chamfer"] = 0.16;
    CHECK_THROWS_AS(parse_metrics_json(doc.dump()), ParseError);

    const std::string table = format_table(t.aggregates);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);
    const std::string empty = format_table({});
    CHECK(empty.find("category") != std::string::npos);
    CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
    CHECK(parse_metrics_json("[]").aggregates.empty());
    CHECK(metrics_csv(rows).starts_with("shape_id,viewpoint_id,chamfer,emd,precision,recall,fscore\n"));

    std::vector<ShapeRow> one{rows[0]};
    const auto single = aggregate(one);
    CHECK(single[0].chamfer == rows[0].report.chamfer);
    CHECK(single[0].fscore == rows[0].report.fscore);
}

TEST_CASE("embedding and distance CSV formats") {
    const EmbeddingBatch e = parse_embeddings_csv("2,3\na,1,0,0\nb,0,1,0\n");
    CHECK(e.size() == 2);
    CHECK(e.dim() == 3);
    CHECK(e.shape_ids[1] == "b");
    std::vector<std::string> ids;
    const ShapeDistanceMatrix d = parse_distances_csv("2,2\na,0.5,0,1\nb,0.7,1,0\n", &ids);
    CHECK(d.sigma == std::vector<double>{0.5, 0.7});
    CHECK(d.d_cd(0, 1) == 1.0);
    CHECK(ids == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_embeddings_csv("2,3\na,1,0\nb,0,1,0\n"), ParseError);
    CHECK_THROWS_AS(parse_distances_csv("2,2\na,0.5,0,1\n"), ParseError);
}

TEST_CASE("labels JSON round trip") {
    const SparseLabelSet l{{{1, 2}, {3, 4}}, {{0, 0}}};
    CHECK(labels_from_json(labels_to_json(l, 10, 10)) == l);
}

TEST_CASE("cli: stylize batch isolates failing entries") {
    const auto dir = fixture::temp_dir("app_stylize");
    Rng rng(1);
    for (const char* name : {"a", "b"}) write_svg(fixture::random_sketch(rng, 4), dir / (std::string(name) + ".svg"));
    nlohmann::json doc{{"schema_version", 1}, {"root", "."}, {"entries", nlohmann::json::array()}};
    for (const char* id : {"a", "missing", "b"})
        doc["entries"].push_back({{"shape_id", id}, {"mesh_path", "unused.obj"}, {"sketch_path", std::string(id) + ".svg"}});
    detail::write_file(dir / "m.json", doc.dump());

    const auto r = cli({"--seed", "3", "--out-dir", (dir / "out").string(), "stylize", "--manifest", (dir / "m.json").string()});
    CHECK(r.code == 1);
    CHECK((r.out + r.err).find("missing") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "a.svg"));
    CHECK(fs::exists(dir / "out" / "a.stylize.json"));
    CHECK(fs::exists(dir / "out" / "b.svg"));
    CHECK(fs::exists(dir / "out" / "b.stylize.json"));
    CHECK_FALSE(fs::exists(dir / "out" / "missing.svg"));

    const std::string first = detail::read_file(dir / "out" / "b.svg");
    cli({"--seed", "3", "--jobs", "3", "--out-dir", (dir / "out2").string(), "stylize", "--manifest", (dir / "m.json").string()});
    CHECK(detail::read_file(dir / "out2" / "b.svg") == first);
}

TEST_CASE("cli: eval-recon defaults, order independence, unmatched ids") {
    const auto dir = fixture::temp_dir("app_recon");
    detail::write_file(dir / "cube.obj", kCubeObj);
    detail::write_file(dir / "wedge.obj", kWedgeObj);
    detail::write_file(dir / "pred.json", manifest_json({{"cube", "cube.obj", "box"}, {"wedge", "wedge.obj", "prism"},
                                                         {"cube2", "cube.obj", "box"}}));
    detail::write_file(dir / "pred_shuffled.json", manifest_json({{"wedge", "wedge.obj", "prism"}, {"cube2", "cube.obj", "box"},
                                                                  {"cube", "cube.obj", "box"}}));
    detail::write_file(dir / "ref.json", manifest_json({{"cube2", "cube.obj", "box"}, {"cube", "cube.obj", "box"},
                                                        {"wedge", "wedge.obj", "prism"}}));
    auto run = [&](const std::string& pred, const std::string& out, const std::string& jobs) {
        return cli({"--seed", "5", "--jobs", jobs, "--out-dir", (dir / out).string(), "eval-recon", "--pred",
                    (dir / pred).string(), "--ref", (dir / "ref.json").string(), "--ref-samples", "5000",
                    "--pred-samples", "512"});
    };
    REQUIRE(run("pred.json", "o1", "1").code == 0);
    REQUIRE(run("pred_shuffled.json", "o2", "2").code == 0);
    const auto j1 = nlohmann::json::parse(detail::read_file(dir / "o1" / "metrics.json"));
    const auto j2 = nlohmann::json::parse(detail::read_file(dir / "o2" / "metrics.json"));
    CHECK(j1["threshold"] == 0.01);
    CHECK(j1["schema_version"] == 1);
    CHECK(j1["aggregates"] == j2["aggregates"]);
    CHECK(j1["aggregates"].size() == 2);

    const auto report = cli({"report", "--in", (dir / "o1" / "metrics.json").string()});
    CHECK(report.code == 0);
    CHECK(report.out.find("prism") != std::string::npos);

    detail::write_file(dir / "bad.json", manifest_json({{"cube", "cube.obj", "box"}, {"sphere", "cube.obj", "box"}}));
    const auto bad = cli({"--out-dir", (dir / "o3").string(), "eval-recon", "--pred", (dir / "bad.json").string(), "--ref",
                          (dir / "ref.json").string()});
    CHECK(bad.code != 0);
    CHECK(bad.err.find("sphere") != std::string::npos);
    CHECK(bad.err.find("wedge") != std::string::npos);
}

TEST_CASE("cli: mask commands and regloss") {
    const auto dir = fixture::temp_dir("app_mask");
    BinaryMask gt(32, 32);
    for (std::size_t r = 8; r < 24; ++r)
        for (std::size_t c = 8; c < 24; ++c) gt.set(r, c);
    write_pgm(gt, dir / "gt.pgm");
    BinaryImage strokes(32, 32);
    for (std::size_t k = 7; k <= 24; ++k) {
        strokes.set(7, k);
        strokes.set(24, k);
        strokes.set(k, 7);
        strokes.set(k, 24);
    }
    write_pgm(strokes, dir / "sketch.pgm");
    CHECK(cli({"--seed", "2", "sample-labels", "--mask", (dir / "gt.pgm").string(), "--out", (dir / "l.json").string()}).code == 0);
    CHECK(cli({"propagate", "--sketch", (dir / "sketch.pgm").string(), "--labels", (dir / "l.json").string(), "--out",
               (dir / "pred.pgm").string()}).code == 0);
    const auto em = cli({"eval-mask", "--pred", (dir / "pred.pgm").string(), "--gt", (dir / "gt.pgm").string()});
    REQUIRE(em.code == 0);
    const auto rep = nlohmann::json::parse(em.out);
    // Only the stroke band itself may disagree with the ground truth.
    CHECK(rep["recall"] == 1.0);
    CHECK(rep["precision"].get<double>() > 0.7);

    detail::write_file(dir / "e.csv", "3,2\na,1,0\nb,0,1\nc,-1,0.2\n");
    detail::write_file(dir / "d.csv", "3,3\na,1,0,1,2\nb,1,1,0,1.5\nc,1,2,1.5,0\n");
    const auto rl = cli({"regloss", "--embeddings", (dir / "e.csv").string(), "--distances", (dir / "d.csv").string(),
                         "--grad-check"});
    REQUIRE(rl.code == 0);
    const auto out = nlohmann::json::parse(rl.out);
    CHECK(out["loss"].get<double>() > 0);
    CHECK(out["grad_check"]["max_relative_error"].get<double>() < 1e-5);

    detail::write_file(dir / "d2.csv", "3,3\na,1,0,1,2\nx,1,1,0,1.5\nc,1,2,1.5,0\n");
    CHECK(cli({"regloss", "--embeddings", (dir / "e.csv").string(), "--distances", (dir / "d2.csv").string()}).code != 0);
}

TEST_CASE("cli: usage errors and config precedence") {
    CHECK(cli({"no-such-command"}).code != 0);
    CHECK(cli({"eval-mask", "--pred", "x.pgm"}).code != 0);
    const auto help = cli({"eval-recon", "--help"});
    CHECK(help.out.find("0.01") != std::string::npos);

    const auto dir = fixture::temp_dir("app_config");
    detail::write_file(dir / "shapes.txt", "s1\ns2\n");
    detail::write_file(dir / "run.cfg", "seed = 11\nangle-sigma = 6\n");
    REQUIRE(cli({"--config", (dir / "run.cfg").string(), "sample-views", "--shapes", (dir / "shapes.txt").string(), "--out",
                 (dir / "a.json").string()}).code == 0);
    REQUIRE(cli({"--seed", "11", "sample-views", "--angle-sigma", "6", "--shapes", (dir / "shapes.txt").string(), "--out",
                 (dir / "b.json").string()}).code == 0);
    REQUIRE(cli({"--config", (dir / "run.cfg").string(), "--seed", "12", "sample-views", "--shapes",
                 (dir / "shapes.txt").string(), "--out", (dir / "c.json").string()}).code == 0);
    CHECK(detail::read_file(dir / "a.json") == detail::read_file(dir / "b.json"));
    CHECK(nlohmann::json::parse(detail::read_file(dir / "c.json"))["seed"] == 12);
    detail::write_file(dir / "bad.cfg", "bogus-key = 1\n");
    CHECK(cli({"--config", (dir / "bad.cfg").string(), "sample-views", "--shapes", (dir / "shapes.txt").string(), "--out",
               (dir / "d.json").string()}).code != 0);
}
