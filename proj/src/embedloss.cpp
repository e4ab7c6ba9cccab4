#include "sketch3d/embedloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sketch3d/error.hpp"
#include "sketch3d/metrics.hpp"
#include "sketch3d/rng.hpp"

namespace sketch3d {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kThreeSigmaFraction = 0.997 / 3.0;

// Stable softmax of `logits`.
std::vector<double> softmax(std::vector<double> logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0;
    for (double& v : logits) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : logits) v /= sum;
    return logits;
}

void check_consistent(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d) {
    validate(emb);
    validate(d);
    if (d.size() != emb.size())
        throw InvalidInput("batch size mismatch: " + std::to_string(emb.size()) + " embeddings vs " +
                           std::to_string(d.size()) + " distance rows");
}

}  // namespace

void validate(const EmbeddingBatch& emb) {
    if (emb.size() < 2) throw InvalidInput("embedding batch needs at least 2 rows");
    if (emb.dim() == 0) throw InvalidInput("embedding dimension must be positive");
    if (!emb.shape_ids.empty() && emb.shape_ids.size() != emb.size())
        throw InvalidInput("shape_ids must match the number of embedding rows");
    for (std::size_t r = 0; r < emb.size(); ++r)
        for (double v : emb.rows.row(r))
            if (!std::isfinite(v)) throw InvalidInput("non-finite embedding value");
}

void validate(const ShapeDistanceMatrix& d) {
    const std::size_t b = d.d_cd.rows();
    if (d.d_cd.cols() != b) throw InvalidInput("distance matrix must be square");
    if (d.sigma.size() != b) throw InvalidInput("need one sigma per shape");
    for (std::size_t i = 0; i < b; ++i) {
        if (!(d.sigma[i] > 0) || !std::isfinite(d.sigma[i])) throw InvalidInput("sigma must be positive and finite");
        if (d.d_cd(i, i) != 0) throw InvalidInput("distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < b; ++j) {
            const double v = d.d_cd(i, j);
            if (!std::isfinite(v) || v < 0) throw InvalidInput("distances must be finite and non-negative");
            if (v != d.d_cd(j, i)) throw InvalidInput("distance matrix must be symmetric");
        }
    }
}

Matrix normalize_rows(const Matrix& m) {
    Matrix out = m;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double n2 = 0;
        for (double v : m.row(r)) n2 += v * v;
        const double n = std::sqrt(n2);
        if (!(n > 0)) throw InvalidInput("cannot normalize a zero embedding row");
        for (double& v : out.row(r)) v /= n;
    }
    return out;
}

double sigma_from_dataset(const std::string& shape_id, const std::map<std::string, PointCloud>& dataset,
                          std::size_t subset_size, std::uint64_t seed) {
    if (dataset.empty()) throw InvalidInput("empty dataset");
    const auto anchor = dataset.find(shape_id);
    if (anchor == dataset.end()) throw InvalidInput("shape '" + shape_id + "' not in dataset");
    if (subset_size == 0 || subset_size > dataset.size()) throw InvalidInput("subset size must be in [1, dataset size]");

    // std::map iterates in sorted key order, so the permutation only depends on the ids.
    std::vector<const std::pair<const std::string, PointCloud>*> order;
    for (const auto& entry : dataset) order.push_back(&entry);
    Rng rng(derive_seed(seed, {"sigma-subset"}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    double max_cd = 0;
    for (std::size_t k = 0; k < subset_size; ++k)
        max_cd = std::max(max_cd, chamfer_distance(anchor->second, order[k]->second));
    const double sigma = kThreeSigmaFraction * max_cd;
    if (!(sigma > 0)) throw InvalidInput("sigma is zero: the subset holds no shape distinct from '" + shape_id + "'");
    return sigma;
}

std::vector<double> cd_to_prob(const ShapeDistanceMatrix& d, std::size_t anchor) {
    validate(d);
    if (anchor >= d.size()) throw InvalidInput("anchor out of range");
    const double two_s2 = 2.0 * d.sigma[anchor] * d.sigma[anchor];
    std::vector<double> logits(d.size());
    for (std::size_t b = 0; b < d.size(); ++b) logits[b] = -d.d_cd(anchor, b) * d.d_cd(anchor, b) / two_s2;
    return softmax(std::move(logits));
}

std::vector<double> emb_to_prob(const Matrix& unit_rows, std::size_t anchor) {
    if (anchor >= unit_rows.rows()) throw InvalidInput("anchor out of range");
    for (std::size_t r = 0; r < unit_rows.rows(); ++r) {
        double n2 = 0;
        for (double v : unit_rows.row(r)) n2 += v * v;
        if (std::abs(std::sqrt(n2) - 1.0) > kUnitTolerance) throw InvalidInput("embedding rows must be unit-normalized");
    }
    const auto fa = unit_rows.row(anchor);
    std::vector<double> logits(unit_rows.rows());
    for (std::size_t b = 0; b < unit_rows.rows(); ++b) {
        const auto fb = unit_rows.row(b);
        logits[b] = std::inner_product(fa.begin(), fa.end(), fb.begin(), 0.0);
    }
    return softmax(std::move(logits));
}

LossReport regression_loss(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d) {
    check_consistent(emb, d);
    const std::size_t n = emb.size(), dim = emb.dim();
    const double inv_pairs = 1.0 / static_cast<double>(n * n);
    const Matrix f = normalize_rows(emb.rows);

    LossReport report;
    Matrix grad_f(n, dim);
    for (std::size_t a = 0; a < n; ++a) {
        const std::vector<double> p = cd_to_prob(d, a);
        const std::vector<double> q = emb_to_prob(f, a);
        // g = ∂loss/∂q_ab; subgradient 0 at q == p.
        std::vector<double> g(n);
        double g_mean = 0;
        for (std::size_t b = 0; b < n; ++b) {
            const double diff = q[b] - p[b];
            report.loss += std::abs(diff) * inv_pairs;
            g[b] = diff > 0 ? inv_pairs : (diff < 0 ? -inv_pairs : 0.0);
            g_mean += g[b] * q[b];
        }
        // Softmax Jacobian: ∂loss/∂s_ab = q_ab (g_ab − Σ_c g_ac q_ac), with s_ab = f_a·f_b.
        for (std::size_t b = 0; b < n; ++b) {
            const double h = q[b] * (g[b] - g_mean);
            if (h == 0) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                grad_f(a, k) += h * f(b, k);
                grad_f(b, k) += h * f(a, k);
            }
        }
    }

    // Back through f = x/‖x‖: ∂/∂x = (g − (g·f) f) / ‖x‖.
    report.grad = Matrix(n, dim);
    for (std::size_t r = 0; r < n; ++r) {
        const auto x = emb.rows.row(r);
        const double len = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        double gf = 0;
        for (std::size_t k = 0; k < dim; ++k) gf += grad_f(r, k) * f(r, k);
        for (std::size_t k = 0; k < dim; ++k) report.grad(r, k) = (grad_f(r, k) - gf * f(r, k)) / len;
    }
    return report;
}

Matrix finite_difference_gradient(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d, double h) {
    check_consistent(emb, d);
    Matrix grad(emb.size(), emb.dim());
    EmbeddingBatch probe = emb;
    for (std::size_t r = 0; r < emb.size(); ++r) {
        for (std::size_t k = 0; k < emb.dim(); ++k) {
            const double x = emb.rows(r, k);
            probe.rows(r, k) = x + h;
            const double up = regression_loss(probe, d).loss;
            probe.rows(r, k) = x - h;
            const double down = regression_loss(probe, d).loss;
            probe.rows(r, k) = x;
            grad(r, k) = (up - down) / (2.0 * h);
        }
    }
    return grad;
}

double gradient_relative_error(const Matrix& analytic, const Matrix& numeric) {
    if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols())
        throw InvalidInput("gradient shapes differ");
    double diff = 0, scale = 0;
    for (std::size_t r = 0; r < analytic.rows(); ++r) {
        for (std::size_t c = 0; c < analytic.cols(); ++c) {
            diff = std::max(diff, std::abs(analytic(r, c) - numeric(r, c)));
            scale = std::max({scale, std::abs(analytic(r, c)), std::abs(numeric(r, c))});
        }
    }
    // Central differences at h ~ 1e-5 carry ~1e-12..1e-11 of roundoff, so a
    // gradient that (nearly) vanishes is judged against a floor instead.
    constexpr double kScaleFloor = 1e-6;
    return diff / std::max(scale, kScaleFloor);
}

double kink_margin(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d) {
    check_consistent(emb, d);
    const Matrix f = normalize_rows(emb.rows);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < emb.size(); ++a) {
        const auto p = cd_to_prob(d, a);
        const auto q = emb_to_prob(f, a);
        for (std::size_t b = 0; b < emb.size(); ++b) margin = std::min(margin, std::abs(q[b] - p[b]));
    }
    return margin;
}

}  // namespace sketch3d
