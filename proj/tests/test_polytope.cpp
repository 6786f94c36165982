#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "alift/lift.hpp"
#include "alift/polytope.hpp"
#include "alift/simplex.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace alift;

namespace {

// Counts active constraints (nonnegativity or tight lift rows) at v.
int active_constraints(const Vector& v, const Channel& c,
                       const ProbVector& p_s, double eps) {
  int active = 0;
  for (Index x = 0; x < v.size(); ++x) {
    if (std::abs(v(x)) <= 1e-7) ++active;
  }
  const Vector bounds = std::exp(eps) * p_s.values();
  for (Index s = 0; s < c.output_card(); ++s) {
    if (std::abs(c.matrix().row(s).dot(v) - bounds(s)) <=
        1e-7 * std::max(1.0, bounds(s))) {
      ++active;
    }
  }
  return active;
}

bool set_equal_up_to_tol(const Matrix& a, const Matrix& b, double tol) {
  if (a.cols() != b.cols()) return false;
  std::vector<bool> used(static_cast<size_t>(b.cols()), false);
  for (Index i = 0; i < a.cols(); ++i) {
    bool matched = false;
    for (Index j = 0; j < b.cols() && !matched; ++j) {
      if (!used[static_cast<size_t>(j)] &&
          (a.col(i) - b.col(j)).lpNorm<Eigen::Infinity>() < tol) {
        used[static_cast<size_t>(j)] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("polytope");

TEST_CASE("negative eps is rejected; eps past eps_max gives the simplex") {
  std::mt19937_64 eng(3);
  const auto j = testutil::random_joint(eng, 3, 4);
  const Channel c = conditional_s_given_x(j);
  CHECK_THROWS_AS(enumerate_vertices(c, j.marginal_s(), -0.1),
                  InfeasibleEpsError);

  const double big = eps_max(j, AlphaParam::infinity()) + 0.5;
  const auto vs = enumerate_vertices(c, j.marginal_s(), big);
  CHECK(vs.count() == 4);
  CHECK(set_equal_up_to_tol(vs.vertices, Matrix::Identity(4, 4), 1e-12));
}

TEST_CASE("two-symbol polytope matches the closed-form interval") {
  // |X| = 2: the simplex is the segment V = (t, 1-t); each lift
  // constraint clips t to an interval, so the polytope has exactly the
  // two interval endpoints as vertices.
  Matrix t(2, 2);
  t << 0.4, 0.1, 0.1, 0.4;
  const auto j = validate_joint(t);
  const Channel c = conditional_s_given_x(j);
  const double eps = 0.3;

  // Closed form: constraint row s reads c0 t + c1 (1-t) <= L p_s.
  double lo = 0.0, hi = 1.0;
  const Vector bounds = std::exp(eps) * j.marginal_s().values();
  for (Index s = 0; s < 2; ++s) {
    const double c0 = c.matrix()(s, 0), c1 = c.matrix()(s, 1);
    const double rhs = bounds(s) - c1;
    if (c0 - c1 > 0) {
      hi = std::min(hi, rhs / (c0 - c1));
    } else if (c0 - c1 < 0) {
      lo = std::max(lo, rhs / (c0 - c1));
    }
  }
  const auto vs = enumerate_vertices(c, j.marginal_s(), eps);
  REQUIRE(vs.count() == 2);
  // Vertices are lexicographically sorted: first has the smaller t.
  CHECK(vs.vertices(0, 0) == doctest::Approx(lo).epsilon(1e-12));
  CHECK(vs.vertices(0, 1) == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("vertex sets match the exact rational oracle on small instances") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int s_card = 2 + static_cast<int>(eng() % 2);
    const int x_card = 2 + static_cast<int>(eng() % 3);
    const auto rj = oracle::random_rational_joint(eng, s_card, x_card, 60);
    const auto j = validate_joint(rj.table_double());
    const Channel c = conditional_s_given_x(j);

    // Rational bound L between 1 and just past the max lift, so the
    // oracle's feasibility checks are exact.
    const oracle::Rat lmax = oracle::max_lift(rj);
    const int num = static_cast<int>(eng() % 5);  // 0, 1/4, ..., 9/8 of range
    oracle::Rat theta(num == 4 ? 9 : num, num == 4 ? 8 : 4);
    theta.canonicalize();
    const oracle::Rat bound = 1 + theta * (lmax - 1);
    const double eps = std::log(bound.get_d());

    const auto impl = enumerate_vertices(c, j.marginal_s(), eps);
    const auto exact = oracle::enumerate_vertices_exact(rj, bound);
    const Matrix oracle_cols = oracle::to_double_columns(exact);
    CHECK(set_equal_up_to_tol(impl.vertices, oracle_cols, 1e-7));
  }
}

TEST_CASE("vertex invariants on random instances") {
  std::mt19937_64 eng(19);
  for (int trial = 0; trial < 15; ++trial) {
    const auto j = testutil::random_joint(eng, 3, 5);
    const Channel c = conditional_s_given_x(j);
    const double emax = eps_max(j, AlphaParam::infinity());
    const double eps = emax * (0.2 + 0.7 * testutil::uniform01(eng));
    const auto vs = enumerate_vertices(c, j.marginal_s(), eps);
    REQUIRE(vs.count() >= 1);

    const double budget = std::exp(eps);
    for (Index i = 0; i < vs.count(); ++i) {
      const Vector v = vs.vertices.col(i);
      // Simplex membership.
      CHECK(v.minCoeff() >= 0.0);
      CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-9));
      // Max-lift feasibility.
      CHECK(posterior_alpha_lift(c, j.marginal_s(), v,
                                 AlphaParam::infinity()) <=
            budget * (1 + kFeasTol));
      // Basic-feasible-solution certificate.
      CHECK(active_constraints(v, c, j.marginal_s(), eps) >= j.x_card() - 1);
      // No duplicates.
      for (Index k = i + 1; k < vs.count(); ++k) {
        CHECK((v - vs.vertices.col(k)).lpNorm<Eigen::Infinity>() >=
              kDedupeTol);
      }
    }

    // P_X lies in the hull: the zero-cost mixture program is feasible.
    const Vector zero_costs = Vector::Zero(vs.count());
    CHECK_NOTHROW(solve_min_cost_mixture(vs.vertices, zero_costs,
                                         j.marginal_x()));

    // Nesting: every vertex stays feasible at a looser budget.
    const double eps2 = eps + 0.3;
    const double budget2 = std::exp(eps2);
    for (Index i = 0; i < vs.count(); ++i) {
      CHECK(posterior_alpha_lift(c, j.marginal_s(), vs.vertices.col(i),
                                 AlphaParam::infinity()) <=
            budget2 * (1 + kFeasTol));
    }
  }
}

TEST_CASE("eps = 0 forces every posterior onto the prior") {
  std::mt19937_64 eng(29);
  const auto j = testutil::random_joint(eng, 2, 3);
  const Channel c = conditional_s_given_x(j);
  const auto vs = enumerate_vertices(c, j.marginal_s(), 0.0);
  REQUIRE(vs.count() >= 1);
  for (Index i = 0; i < vs.count(); ++i) {
    const Vector posterior = c.matrix() * vs.vertices.col(i);
    CHECK((posterior - j.marginal_s().values()).lpNorm<Eigen::Infinity>() <=
          1e-9);
  }
}

TEST_CASE("active-set cap raises CapExceeded") {
  std::mt19937_64 eng(37);
  const auto j = testutil::random_joint(eng, 6, 10);
  const Channel c = conditional_s_given_x(j);
  CHECK_THROWS_AS(enumerate_vertices(c, j.marginal_s(), 0.1, 100),
                  CapExceededError);
}

TEST_SUITE_END();
