#include <doctest.h>

#include <algorithm>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sketch3d/error.hpp"
#include "sketch3d/maskkit.hpp"

using namespace sketch3d;

namespace {

BinaryMask random_mask(Rng& rng, std::size_t h, std::size_t w) {
    BinaryMask m(h, w);
    // Random ellipse, never empty and never full.
    const double cy = rng.uniform(0, h), cx = rng.uniform(0, w);
    const double ry = rng.uniform(1, h / 2.0), rx = rng.uniform(1, w / 2.0);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) {
            const double y = (r + 0.5 - cy) / ry, x = (c + 0.5 - cx) / rx;
            m.set(r, c, x * x + y * y <= 1);
        }
    m.set(static_cast<std::size_t>(cy) % h, static_cast<std::size_t>(cx) % w, true);
    m.set(0, 0, false);
    return m;
}

// Single-source costs by repeated relaxation until nothing changes.
std::vector<long long> relaxed_costs(const BinaryImage& strokes, const std::vector<PixelCoord>& sources) {
    const std::size_t h = strokes.rows(), w = strokes.cols();
    constexpr long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> d(h * w, inf);
    for (const PixelCoord& s : sources) d[s.row * w + s.col] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const long long step = strokes(r, c) ? 50 : 1;
                const long long nbr[4] = {r > 0 ? d[(r - 1) * w + c] : inf, r + 1 < h ? d[(r + 1) * w + c] : inf,
                                          c > 0 ? d[r * w + c - 1] : inf, c + 1 < w ? d[r * w + c + 1] : inf};
                const long long best = *std::min_element(nbr, nbr + 4) + step;
                if (best < d[r * w + c]) {
                    d[r * w + c] = best;
                    changed = true;
                }
            }
    }
    return d;
}

}  // namespace

TEST_CASE("sample_labels: counts and class consistency over 10^4 masks") {
    Rng rng(1);
    double fg = 0, bg = 0;
    for (int i = 0; i < 10000; ++i) {
        const BinaryMask gt = random_mask(rng, 16 + rng.index(48), 16 + rng.index(48));
        const SparseLabelSet labels = sample_labels(gt, static_cast<std::uint64_t>(i));
        REQUIRE(!labels.foreground.empty());
        REQUIRE(!labels.background.empty());
        for (const PixelCoord& p : labels.foreground) REQUIRE(gt(p.row, p.col));
        for (const PixelCoord& p : labels.background) REQUIRE(!gt(p.row, p.col));
        fg += static_cast<double>(labels.foreground.size());
        bg += static_cast<double>(labels.background.size());
    }
    CHECK(fg / 10000 >= 7.5);
    CHECK(fg / 10000 <= 8.5);
    CHECK(bg / 10000 >= 7.5);
    CHECK(bg / 10000 <= 8.5);
}

TEST_CASE("sample_labels: forced placement and determinism") {
    BinaryMask gt(2, 2);
    gt.set(1, 0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SparseLabelSet labels = sample_labels(gt, seed);
        for (const PixelCoord& p : labels.foreground) CHECK(p == PixelCoord{1, 0});
    }
    Rng rng(2);
    const BinaryMask m = random_mask(rng, 40, 30);
    CHECK(sample_labels(m, 5) == sample_labels(m, 5));
    CHECK_THROWS_AS(sample_labels(BinaryMask(3, 3), 0), InvalidInput);
    BinaryMask full(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) full.set(r, c);
    CHECK_THROWS_AS(sample_labels(full, 0), InvalidInput);
}

TEST_CASE("mask_metrics: hand-counted cases") {
    BinaryMask pred(4, 4), gt(4, 4);
    // pred: top-left 2x2; gt: top two rows of columns 1..2.
    pred.set(0, 0);
    pred.set(0, 1);
    pred.set(1, 0);
    pred.set(1, 1);
    gt.set(0, 1);
    gt.set(1, 1);
    gt.set(0, 2);
    gt.set(1, 2);
    const MaskReport r = mask_metrics(pred, gt);
    CHECK(r.iou == 1.0 / 3.0);
    CHECK(r.precision == 0.5);
    CHECK(r.recall == 0.5);
    CHECK(mask_metrics(gt, gt) == MaskReport{1, 1, 1});

    BinaryMask apart(4, 4);
    apart.set(3, 3);
    CHECK(mask_metrics(apart, gt) == MaskReport{0, 0, 0});

    const BinaryMask empty(4, 4);
    CHECK(mask_metrics(empty, empty) == MaskReport{1, 1, 1});
    CHECK(mask_metrics(empty, gt).precision == 0);
    CHECK(mask_metrics(gt, empty).recall == 0);
    CHECK_THROWS_AS(mask_metrics(BinaryMask(4, 5), gt), InvalidInput);
}

TEST_CASE("mask_metrics: symmetry and ordering") {
    Rng rng(3);
    for (int t = 0; t < 300; ++t) {
        const BinaryMask a = random_mask(rng, 20, 20), b = random_mask(rng, 20, 20);
        const MaskReport ab = mask_metrics(a, b), ba = mask_metrics(b, a);
        CHECK(ab.iou == ba.iou);
        CHECK(ab.precision == ba.recall);
        CHECK(ab.iou <= std::min(ab.precision, ab.recall));
    }
}

TEST_CASE("propagate_labels: closed rectangle") {
    BinaryImage strokes(32, 32);
    for (std::size_t k = 8; k <= 23; ++k) {
        strokes.set(8, k);
        strokes.set(23, k);
        strokes.set(k, 8);
        strokes.set(k, 23);
    }
    const SparseLabelSet labels{{{15, 15}}, {{0, 0}}};
    const BinaryMask out = propagate_labels(strokes, labels);
    const BinaryImage inside = oracle::flood_fill(strokes, 15, 15);
    for (std::size_t r = 0; r < 32; ++r)
        for (std::size_t c = 0; c < 32; ++c)
            if (!strokes(r, c)) CHECK(out(r, c) == inside(r, c));
}

TEST_CASE("propagate_labels: Manhattan split without strokes") {
    const BinaryImage strokes(12, 17);
    const SparseLabelSet labels{{{0, 0}}, {{11, 16}}};
    const BinaryMask out = propagate_labels(strokes, labels);
    for (long long r = 0; r < 12; ++r)
        for (long long c = 0; c < 17; ++c) {
            const long long to_fg = r + c, to_bg = (11 - r) + (16 - c);
            CHECK(out(r, c) == (to_fg < to_bg));
        }
}

TEST_CASE("propagate_labels: agrees with relaxation on random images") {
    Rng rng(4);
    for (int t = 0; t < 40; ++t) {
        const std::size_t h = 4 + rng.index(14), w = 4 + rng.index(14);
        BinaryImage strokes(h, w);
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) strokes.set(r, c, rng.uniform() < 0.3);
        SparseLabelSet labels;
        for (int k = 0; k < 3; ++k) {
            labels.foreground.push_back({rng.index(h), rng.index(w)});
            labels.background.push_back({rng.index(h), rng.index(w)});
        }
        const auto dfg = relaxed_costs(strokes, labels.foreground);
        const auto dbg = relaxed_costs(strokes, labels.background);
        const BinaryMask out = propagate_labels(strokes, labels);
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) CHECK(out(r, c) == (dfg[r * w + c] < dbg[r * w + c]));
    }
}

TEST_CASE("propagate_labels: extra labels") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        BinaryImage strokes(24, 24);
        for (std::size_t r = 0; r < 24; ++r)
            for (std::size_t c = 0; c < 24; ++c) strokes.set(r, c, rng.uniform() < 0.2);
        SparseLabelSet labels{{{rng.index(24), rng.index(24)}}, {{rng.index(24), rng.index(24)}}};
        const BinaryMask before = propagate_labels(strokes, labels);

        SparseLabelSet dup = labels;
        dup.foreground.push_back(labels.foreground[0]);
        dup.background.push_back(labels.background[0]);
        CHECK(propagate_labels(strokes, dup) == before);

        // A further foreground label can only turn pixels foreground.
        SparseLabelSet more = labels;
        more.foreground.push_back({rng.index(24), rng.index(24)});
        const BinaryMask after = propagate_labels(strokes, more);
        for (std::size_t r = 0; r < 24; ++r)
            for (std::size_t c = 0; c < 24; ++c)
                if (before(r, c)) CHECK(after(r, c));
    }
}

TEST_CASE("propagate_labels: preconditions") {
    const BinaryImage strokes(4, 4);
    CHECK_THROWS_AS(propagate_labels(strokes, {{{0, 0}}, {}}), InvalidInput);
    CHECK_THROWS_AS(propagate_labels(strokes, {{}, {{0, 0}}}), InvalidInput);
    CHECK_THROWS_AS(propagate_labels(strokes, {{{0, 9}}, {{0, 0}}}), InvalidInput);
    CHECK_THROWS_AS(BinaryImage(0, 3), InvalidInput);
}

TEST_CASE("pgm round trip") {
    Rng rng(6);
    const BinaryMask m = random_mask(rng, 13, 29);
    CHECK(decode_pgm(encode_pgm(m)) == m);
    CHECK_THROWS_AS(decode_pgm("P2\n2 2\n255\n0 0 0 0\n"), ParseError);
}
