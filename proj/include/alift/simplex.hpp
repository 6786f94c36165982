#pragma once

#include <vector>

#include "alift/prob.hpp"

namespace alift {

/// Weights over candidate columns decomposing P_X, found by the
/// entropy-cost linear program.
struct MixtureSolution {
  Vector weights;                    // Q, size = number of candidates
  double objective = 0.0;            // sum_i Q_i cost_i
  std::vector<Index> support;        // indices with Q_i > 0
};

/// Solves
///   min_Q  sum_i Q_i cost_i
///   s.t.   sum_i Q_i candidates.col(i) = p_x,  1^T Q = 1,  Q >= 0
/// with a two-phase primal simplex using Bland's anti-cycling rule.
/// The normalization row is redundant for stochastic candidates; rows
/// that become redundant are dropped during basis construction.
///
/// Returns an optimal basic feasible solution with a deterministic
/// (lowest-index) tie-break. Throws InfeasibleError if p_x is not in
/// the convex hull of the candidates.
MixtureSolution solve_min_cost_mixture(const Matrix& candidates,
                                       const Vector& costs,
                                       const ProbVector& p_x);

}  // namespace alift
