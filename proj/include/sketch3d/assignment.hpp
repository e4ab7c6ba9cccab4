#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sketch3d {

/// Dense square cost matrix, row-major.
class CostMatrix {
public:
    CostMatrix(std::size_t n, std::vector<double> values);
    explicit CostMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t row, std::size_t col) const { return values_[row * n_ + col]; }
    double& operator()(std::size_t row, std::size_t col) { return values_[row * n_ + col]; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * n_, n_}; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

/// Optimal assignment together with the dual potentials that certify it:
/// cost(i, j) - row_dual[i] - col_dual[j] >= 0 everywhere, with equality on
/// every assigned pair.
struct Assignment {
    std::vector<std::size_t> col_for_row;
    double cost = 0;
    std::vector<double> row_dual;
    std::vector<double> col_dual;
};

/// Exact minimum-cost perfect matching on a square matrix of finite costs.
/// Shortest augmenting paths (Dijkstra on reduced costs) after a
/// column/row reduction warm start; O(n^3) worst case.
Assignment solve_assignment(const CostMatrix& cost);

/// Largest violation of the dual certificate; 0 for an exactly optimal
/// solution, a few ulps in floating point.
double certificate_gap(const CostMatrix& cost, const Assignment& a);

}  // namespace sketch3d
