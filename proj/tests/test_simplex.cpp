#include <doctest.h>

#include <cmath>
#include <random>

#include "alift/simplex.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace alift;

TEST_SUITE_BEGIN("simplex");

TEST_CASE("point-mass decomposition over the basis") {
  Vector px(3);
  px << 0.2, 0.5, 0.3;
  const Matrix basis = Matrix::Identity(3, 3);
  const Vector costs = Vector::Zero(3);
  const auto sol = solve_min_cost_mixture(basis, costs, ProbVector(px));
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK((sol.weights - px).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(sol.support.size() == 3);
}

TEST_CASE("singleton candidate set") {
  Vector px(2);
  px << 0.4, 0.6;
  Matrix cand(2, 1);
  cand.col(0) = px;
  Vector costs(1);
  costs << entropy(px);
  const auto sol = solve_min_cost_mixture(cand, costs, ProbVector(px));
  CHECK(sol.weights(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(entropy(px)).epsilon(1e-12));
}

TEST_CASE("three candidates on the 2-simplex match brute force") {
  Vector px(2);
  px << 0.5, 0.5;
  Matrix cand(2, 3);
  cand.col(0) << 1.0, 0.0;
  cand.col(1) << 0.3, 0.7;
  cand.col(2) << 0.5, 0.5;
  Vector costs(3);
  for (Index i = 0; i < 3; ++i) costs(i) = entropy(cand.col(i));
  const auto sol = solve_min_cost_mixture(cand, costs, ProbVector(px));
  const double brute =
      oracle::min_entropy_mixture_exhaustive(cand, px);
  CHECK(sol.objective == doctest::Approx(brute).epsilon(1e-9));
  // Mixing the point mass with [0.3, 0.7] beats staying at [0.5, 0.5].
  CHECK(sol.objective < entropy(px) - 1e-6);
}

TEST_CASE("infeasible targets are reported") {
  Vector px(2);
  px << 0.5, 0.5;
  Matrix cand(2, 2);
  cand.col(0) << 1.0, 0.0;
  cand.col(1) << 0.9, 0.1;  // hull is [0.9, 1.0] x {rest}; P_X outside
  Vector costs = Vector::Zero(2);
  CHECK_THROWS_AS(solve_min_cost_mixture(cand, costs, ProbVector(px)),
                  InfeasibleError);
}

TEST_CASE("optimality matches exhaustive support search on random pools") {
  std::mt19937_64 eng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + static_cast<Index>(eng() % 3);  // |X| in 2..4
    const Index m = 4 + static_cast<Index>(eng() % 9);  // up to 12 candidates
    const Vector px = testutil::random_simplex(eng, n);
    Matrix cand(n, m);
    cand.col(0) = px;  // guarantee feasibility
    for (Index i = 1; i < m; ++i) {
      cand.col(i) = testutil::random_simplex(eng, n);
    }
    Vector costs(m);
    for (Index i = 0; i < m; ++i) costs(i) = entropy(cand.col(i));

    const auto sol = solve_min_cost_mixture(cand, costs, ProbVector(px));
    const double brute = oracle::min_entropy_mixture_exhaustive(cand, px);
    CHECK(sol.objective == doctest::Approx(brute).epsilon(1e-9));

    // Feasibility residual and support bound.
    Vector mix = Vector::Zero(n);
    double total = 0.0;
    for (Index i : sol.support) {
      mix += sol.weights(i) * cand.col(i);
      total += sol.weights(i);
    }
    CHECK((mix - px).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.support.size() <= static_cast<size_t>(n) + 1);
  }
}

TEST_CASE("scaling costs scales the objective and keeps the support") {
  std::mt19937_64 eng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 3;
    const Index m = 8;
    const Vector px = testutil::random_simplex(eng, n);
    Matrix cand(n, m);
    cand.col(0) = px;
    for (Index i = 1; i < m; ++i) cand.col(i) = testutil::random_simplex(eng, n);
    Vector costs(m);
    for (Index i = 0; i < m; ++i) costs(i) = entropy(cand.col(i));

    const auto base = solve_min_cost_mixture(cand, costs, ProbVector(px));
    const double c = 2.75;
    const auto scaled = solve_min_cost_mixture(cand, (c * costs).eval(),
                                               ProbVector(px));
    CHECK(scaled.objective == doctest::Approx(c * base.objective).epsilon(1e-9));
    CHECK(scaled.support == base.support);
  }
}

TEST_CASE("duplicate columns keep the lowest-index support") {
  Vector px(2);
  px << 0.5, 0.5;
  Matrix cand(2, 4);
  cand.col(0) << 0.5, 0.5;
  cand.col(1) << 0.5, 0.5;  // duplicate of column 0
  cand.col(2) << 1.0, 0.0;
  cand.col(3) << 0.0, 1.0;
  Vector costs(4);
  costs << 1.0, 1.0, 0.0, 0.0;
  const auto sol = solve_min_cost_mixture(cand, costs, ProbVector(px));
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.support == std::vector<Index>{2, 3});
}

TEST_SUITE_END();
