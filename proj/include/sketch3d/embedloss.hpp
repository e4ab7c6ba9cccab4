#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sketch3d/geometry.hpp"

namespace sketch3d {

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {v_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {v_.data() + r * cols_, cols_}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> v_;
};

/// Sketch embeddings for a batch of shapes: B rows of dimension d, as the
/// raw (pre-normalization) network outputs.
struct EmbeddingBatch {
    Matrix rows;
    std::vector<std::string> shape_ids;

    std::size_t size() const { return rows.rows(); }
    std::size_t dim() const { return rows.cols(); }
};

/// Pairwise shape distances plus the per-anchor bandwidth sigma.
struct ShapeDistanceMatrix {
    Matrix d_cd;
    std::vector<double> sigma;

    std::size_t size() const { return d_cd.rows(); }
};

/// Checks B >= 2 and consistent row count/ids.
void validate(const EmbeddingBatch& emb);
/// Checks shape, symmetry, zero diagonal, non-negativity, finiteness and positive sigma.
void validate(const ShapeDistanceMatrix& d);

/// Rows scaled to unit Euclidean norm; zero rows are rejected.
Matrix normalize_rows(const Matrix& m);

/// sigma = (0.997 / 3) · max Chamfer distance from `shape_id` to the shapes
/// of a seeded subset of the dataset. The subset is a prefix of a seeded
/// permutation of the ids, so growing subset_size never shrinks sigma.
double sigma_from_dataset(const std::string& shape_id, const std::map<std::string, PointCloud>& dataset,
                          std::size_t subset_size, std::uint64_t seed);

/// Shape-side distribution for one anchor: softmax over the batch of
/// −d²/(2σ²), anchor's own (zero-distance) term included.
std::vector<double> cd_to_prob(const ShapeDistanceMatrix& d, std::size_t anchor);

/// Embedding-side distribution for one anchor: softmax over the batch of the
/// dot products with the anchor, self term included. Rows must be unit norm.
std::vector<double> emb_to_prob(const Matrix& unit_rows, std::size_t anchor);

struct LossReport {
    double loss = 0;
    Matrix grad;  ///< ∂loss/∂(raw embedding), B×d
};

/// Mean over all B² ordered (anchor, other) pairs of |p̂ − p|, with the exact
/// gradient through both the softmax and the row normalization.
LossReport regression_loss(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d);

/// Central finite-difference gradient of the loss (for verification).
Matrix finite_difference_gradient(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d, double h = 1e-5);

/// max |analytic − numeric| / max(‖analytic‖∞, ‖numeric‖∞, 1e-6).
double gradient_relative_error(const Matrix& analytic, const Matrix& numeric);

/// Smallest |p̂ − p| over all pairs: distance to the non-differentiable set.
double kink_margin(const EmbeddingBatch& emb, const ShapeDistanceMatrix& d);

}  // namespace sketch3d
