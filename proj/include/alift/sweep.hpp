#pragma once

#include <map>
#include <vector>

#include "alift/polytope.hpp"
#include "alift/put.hpp"
#include "alift/rational.hpp"

namespace alift {

/// Configuration of a privacy-budget sweep: alpha values in strictly
/// decreasing order (infinity allowed only first), budgets in strictly
/// increasing order, per-budget interpolation counts, the band width
/// delta and the extrapolation budget past the last grid point.
struct SweepConfig {
  std::vector<AlphaParam> alphas;
  std::vector<Rational> epsilons;
  std::vector<int> interp_counts;
  double delta = 0.01;
  Rational eps_tail;

  /// Throws ValidationError when any invariant fails.
  void validate() const;

  /// Uniform grid helper: epsilons start, start+step, ..., <= stop,
  /// all exact decimals; interp_counts filled with `interp`.
  static SweepConfig uniform(std::vector<AlphaParam> alphas,
                             const Rational& start, const Rational& step,
                             const Rational& stop, int interp, double delta,
                             const Rational& eps_tail);
};

/// Per-cell results of a sweep, row-major over (alpha_i, eps_j).
struct SweepGrid {
  std::vector<AlphaParam> alphas;
  std::vector<double> epsilons;
  std::vector<std::vector<PutSolution>> cells;  // [i][j]
  std::vector<std::vector<int>> pool_sizes;     // candidates per cell

  const PutSolution& at(size_t i, size_t j) const { return cells[i][j]; }
};

/// The interpolated budget levels, grouped by grid index j: group j is
/// { eps_j + k (eps_{j+1} - eps_j) / n_j : 0 <= k < n_j } with eps_tail
/// standing in for the budget past the end.
std::vector<std::vector<Rational>> build_eps_grid(const SweepConfig& cfg);

/// Vertex sets of the max-lift polytope at every requested level,
/// computed once and shared across sweep cells.
std::map<Rational, VertexSet> candidate_pool(
    const JointDistribution& j, const std::vector<Rational>& levels);

/// Keeps the columns whose alpha-lift falls inside the closed band
/// [(1-delta) e^eps, e^eps].
Matrix filter_band(const Matrix& vertices, const Channel& s_given_x,
                   const ProbVector& p_s, AlphaParam alpha, double eps,
                   double delta);

/// Estimates the optimal utility for every (alpha_i, eps_j) cell by
/// pooling feasible backward columns (exact max-lift seeds, previous
/// cell solutions, and near-extremal polytope vertices selected by the
/// delta band) and solving the entropy-mixture LP per cell.
SweepGrid run_sweep(const JointDistribution& j, const SweepConfig& cfg);

}  // namespace alift
