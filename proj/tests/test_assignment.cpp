#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sketch3d/assignment.hpp"
#include "sketch3d/error.hpp"
#include "sketch3d/rng.hpp"

using namespace sketch3d;

namespace {

double brute_force(const CostMatrix& c) {
    std::vector<std::size_t> perm(c.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double s = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) s += c(i, perm[i]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("assignment: textbook 3x3") {
    const CostMatrix c(3, {4, 1, 3, 2, 0, 5, 3, 2, 2});
    const Assignment a = solve_assignment(c);
    CHECK(a.cost == 5.0);
    CHECK(a.col_for_row == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("assignment: random integer and real matrices match brute force") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.index(7);
        std::vector<double> v(n * n);
        const bool integer = trial % 2 == 0;
        for (double& x : v) x = integer ? static_cast<double>(rng.index(5)) : rng.uniform(-3, 10);
        const CostMatrix c(n, v);
        const Assignment a = solve_assignment(c);
        CHECK(a.cost == doctest::Approx(brute_force(c)).epsilon(1e-12));
        std::vector<std::size_t> cols = a.col_for_row;
        std::sort(cols.begin(), cols.end());
        for (std::size_t i = 0; i < n; ++i) CHECK(cols[i] == i);
        CHECK(certificate_gap(c, a) < 1e-12);
    }
}

TEST_CASE("assignment: dual certificate on a larger instance") {
    Rng rng(99);
    const std::size_t n = 300;
    std::vector<double> v(n * n);
    for (double& x : v) x = rng.uniform(0, 1);
    const CostMatrix c(n, v);
    const Assignment a = solve_assignment(c);
    CHECK(certificate_gap(c, a) < 1e-12);
    // Weak duality: sum of duals equals the primal cost at the optimum.
    double dual = 0;
    for (std::size_t i = 0; i < n; ++i) dual += a.row_dual[i] + a.col_dual[i];
    CHECK(dual == doctest::Approx(a.cost).epsilon(1e-10));
}

TEST_CASE("assignment: degenerate inputs") {
    CHECK(solve_assignment(CostMatrix(0)).cost == 0);
    CHECK(solve_assignment(CostMatrix(1, {7})).cost == 7);
    CHECK_THROWS_AS(CostMatrix(2, {1, 2, 3}), InvalidInput);
    CHECK_THROWS_AS(solve_assignment(CostMatrix(2, {1, 2, 3, 1.0 / 0.0})), InvalidInput);
}
