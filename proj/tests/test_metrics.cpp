#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sketch3d/error.hpp"
#include "sketch3d/kdtree.hpp"
#include "sketch3d/metrics.hpp"

using namespace sketch3d;

TEST_CASE("chamfer: hand examples") {
    const PointCloud a({{0, 0, 0}}), b({{1, 0, 0}});
    CHECK(chamfer_distance(a, b) == 2.0);
    CHECK(chamfer_distance(a, a) == 0.0);
    const PointCloud c({{0, 0, 0}, {2, 0, 0}});
    // a->c: 0; c->a: 0 + 4.
    CHECK(chamfer_distance(a, c) == 4.0);
    CHECK(chamfer_distance(a, c, ChamferReduce::Mean) == 2.0);
    CHECK_THROWS_AS(chamfer_distance(PointCloud(), a), InvalidInput);
}

TEST_CASE("chamfer: symmetric and matches the exhaustive oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const PointCloud a = fixture::random_cloud(rng, 1 + rng.index(64));
        const PointCloud b = fixture::random_cloud(rng, 1 + rng.index(64));
        const double c = chamfer_distance(a, b);
        CHECK(std::abs(c - oracle::chamfer(a, b)) <= 1e-10);
        CHECK(c == chamfer_distance(b, a));
    }
}

TEST_CASE("chamfer: kd-tree path on a large instance") {
    Rng rng(2);
    const PointCloud a = fixture::random_cloud(rng, 1500);
    const PointCloud b = fixture::random_cloud(rng, 1200);
    CHECK(std::abs(chamfer_distance(a, b) - oracle::chamfer(a, b)) <= 1e-10);
}

TEST_CASE("kd-tree nearest equals a linear scan bit for bit") {
    Rng rng(3);
    const PointCloud pts = fixture::random_cloud(rng, 500);
    const KdTree tree(pts.points(), 4);
    for (int q = 0; q < 500; ++q) {
        const Vec3 query{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        double best = 1e300;
        for (const Vec3& p : pts.points()) best = std::min(best, oracle::squared_distance(query, p));
        CHECK(tree.nearest(query).squared_distance == best);
    }
}

TEST_CASE("emd: hand examples") {
    CHECK(emd_exact(PointCloud({{0, 0, 0}}), PointCloud({{3, 4, 0}})) == 5.0);
    const PointCloud a({{0, 0, 0}, {10, 0, 0}});
    const PointCloud b({{10, 1, 0}, {0, 1, 0}});
    CHECK(emd_exact(a, b) == 2.0);
    CHECK_THROWS_AS(emd_exact(a, PointCloud({{0, 0, 0}})), InvalidInput);
}

TEST_CASE("emd: matches exhaustive permutations, is a metric") {
    Rng rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.index(7);
        const PointCloud a = fixture::random_cloud(rng, n), b = fixture::random_cloud(rng, n);
        const double e = emd_exact(a, b);
        CHECK(std::abs(e - oracle::emd(a, b)) <= 1e-10);
        CHECK(std::abs(e - emd_exact(b, a)) <= 1e-12);
        CHECK(emd_exact(a, a) == 0.0);
    }
    for (int trial = 0; trial < 200; ++trial) {
        const PointCloud a = fixture::random_cloud(rng, 5), b = fixture::random_cloud(rng, 5),
                         c = fixture::random_cloud(rng, 5);
        CHECK(emd_exact(a, c) <= emd_exact(a, b) + emd_exact(b, c) + 1e-12);
    }
}

TEST_CASE("fscore: half-matched prediction") {
    const PointCloud ref({{0, 0, 0}, {1, 0, 0}});
    const PointCloud pred({{0, 0, 0.005}, {1, 0, 0}, {5, 5, 5}, {6, 6, 6}});
    const FscoreResult r = fscore(pred, ref, 0.01);
    CHECK(r.precision == 0.5);
    CHECK(r.recall == 1.0);
    CHECK(r.fscore == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("fscore: threshold is inclusive, zero when nothing matches") {
    const PointCloud a({{0, 0, 0}}), b({{0.5, 0, 0}});
    CHECK(fscore(a, b, 0.5).fscore == 1.0);
    CHECK(fscore(a, b, 0.25).fscore == 0.0);
    CHECK(harmonic_mean(0, 0) == 0.0);
    CHECK_THROWS_AS(fscore(a, b, 0.0), InvalidInput);
    CHECK_THROWS_AS(fscore(a, b, -1.0), InvalidInput);
}

TEST_CASE("fscore: matches the oracle and is monotone in the threshold") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const PointCloud a = fixture::random_cloud(rng, 1 + rng.index(40));
        const PointCloud b = fixture::random_cloud(rng, 1 + rng.index(40));
        double prev_p = 0, prev_r = 0;
        for (double t : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
            const FscoreResult r = fscore(a, b, t);
            const oracle::Fscore o = oracle::fscore(a, b, t);
            CHECK(r.precision == o.precision);
            CHECK(r.recall == o.recall);
            CHECK(std::abs(r.fscore - o.fscore) <= 1e-15);
            CHECK(r.precision >= prev_p);
            CHECK(r.recall >= prev_r);
            prev_p = r.precision;
            prev_r = r.recall;
        }
    }
}

TEST_CASE("option names") {
    CHECK(parse_reduce("mean") == ChamferReduce::Mean);
    CHECK(parse_align("centroid-scale") == AlignMode::CentroidScale);
    CHECK(to_string(parse_align("none")) == "none");
    CHECK_THROWS_AS(parse_reduce("median"), InvalidInput);
}

TEST_CASE("evaluate_pair: self-evaluation of the unit cube") {
    const TriangleMesh cube = fixture::unit_cube();
    const PointCloud ref = reference_sample(cube, 10);
    EvalOptions opt;
    opt.reduce = ChamferReduce::Mean;
    opt.compute_emd = false;

    opt.align = AlignMode::None;
    const MetricReport none = evaluate_pair(cube, ref, 20, opt);
    CHECK(none.chamfer <= 1.5e-3);
    CHECK(none.precision >= 0.98);
    // 2048 points cannot cover 10^5 reference points at radius 0.01.
    CHECK(none.recall < 0.5);

    opt.align = AlignMode::CentroidScale;
    const MetricReport aligned = evaluate_pair(cube, ref, 20, opt);
    CHECK(aligned.chamfer <= 2.5e-3);

    CHECK(evaluate_pair(cube, ref, 20, opt) == aligned);
}

TEST_CASE("evaluate_pair: EMD on equal-size samples, zero-area prediction") {
    const TriangleMesh cube = fixture::unit_cube();
    const PointCloud ref = reference_sample(cube, 1, 3000);
    EvalOptions opt;
    opt.prediction_samples = 256;
    opt.emd_samples = 256;
    const MetricReport r = evaluate_pair(cube, ref, 2, opt);
    REQUIRE(r.emd.has_value());
    CHECK(*r.emd > 0);
    CHECK(r.threshold == kDefaultFscoreThreshold);

    TriangleMesh flat;
    flat.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    flat.faces = {{0, 1, 2}};
    CHECK_THROWS_AS(evaluate_pair(flat, ref, 2, opt), InvalidInput);
}
