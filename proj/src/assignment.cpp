#include "sketch3d/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sketch3d/error.hpp"

namespace sketch3d {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != n * n) throw InvalidInput("cost matrix must have n*n entries");
}

Assignment solve_assignment(const CostMatrix& cost) {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t n = cost.size();
    for (std::size_t i = 0; i < n; ++i)
        for (double c : cost.row(i))
            if (!std::isfinite(c)) throw InvalidInput("assignment costs must be finite");

    std::vector<double> u(n, 0.0), v(n, kInf);
    std::vector<std::size_t> col4row(n, kNone), row4col(n, kNone);

    // Warm start: column minima then row minima of the reduced matrix keep
    // every reduced cost non-negative.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[j] = std::min(v[j], cost(i, j));
    for (std::size_t i = 0; i < n; ++i) {
        double m = kInf;
        for (std::size_t j = 0; j < n; ++j) m = std::min(m, cost(i, j) - v[j]);
        u[i] = m;
    }

    std::vector<double> dist(n);
    std::vector<std::size_t> pred(n), remaining(n), scanned_rows, scanned_cols;
    std::vector<char> row_seen(n);
    scanned_rows.reserve(n);
    scanned_cols.reserve(n);

    for (std::size_t start = 0; start < n; ++start) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(row_seen.begin(), row_seen.end(), 0);
        scanned_rows.clear();
        scanned_cols.clear();
        for (std::size_t j = 0; j < n; ++j) remaining[j] = n - 1 - j;
        std::size_t n_remaining = n;

        double reached = 0;
        std::size_t i = start;
        std::size_t sink = kNone;
        while (sink == kNone) {
            row_seen[i] = 1;
            scanned_rows.push_back(i);
            double lowest = kInf;
            std::size_t lowest_at = 0;
            const auto crow = cost.row(i);
            for (std::size_t k = 0; k < n_remaining; ++k) {
                const std::size_t j = remaining[k];
                const double r = reached + crow[j] - u[i] - v[j];
                if (r < dist[j]) {
                    pred[j] = i;
                    dist[j] = r;
                }
                // Prefer free columns on ties: they end the search sooner.
                if (dist[j] < lowest || (dist[j] == lowest && row4col[j] == kNone)) {
                    lowest = dist[j];
                    lowest_at = k;
                }
            }
            if (lowest == kInf) throw Error("assignment: infeasible problem");
            reached = lowest;
            const std::size_t j = remaining[lowest_at];
            scanned_cols.push_back(j);
            remaining[lowest_at] = remaining[--n_remaining];
            if (row4col[j] == kNone)
                sink = j;
            else
                i = row4col[j];
        }

        // Dual update keeps reduced costs non-negative and tight on the tree.
        u[start] += reached;
        for (std::size_t r : scanned_rows)
            if (r != start) u[r] += reached - dist[col4row[r]];
        for (std::size_t c : scanned_cols) v[c] -= reached - dist[c];

        // Flip the augmenting path.
        std::size_t j = sink;
        for (;;) {
            const std::size_t r = pred[j];
            row4col[j] = r;
            std::swap(col4row[r], j);
            if (r == start) break;
        }
    }

    Assignment result;
    result.col_for_row = std::move(col4row);
    for (std::size_t r = 0; r < n; ++r) result.cost += cost(r, result.col_for_row[r]);
    result.row_dual = std::move(u);
    result.col_dual = std::move(v);
    return result;
}

double certificate_gap(const CostMatrix& cost, const Assignment& a) {
    const std::size_t n = cost.size();
    double gap = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double reduced = cost(i, j) - a.row_dual[i] - a.col_dual[j];
            gap = std::max(gap, -reduced);
            if (a.col_for_row[i] == j) gap = std::max(gap, std::abs(reduced));
        }
    }
    return gap;
}

}  // namespace sketch3d
