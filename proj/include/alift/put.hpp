#pragma once

#include "alift/lift.hpp"
#include "alift/polytope.hpp"
#include "alift/prob.hpp"
#include "alift/simplex.hpp"

namespace alift {

/// One solved privacy-utility point: the mechanism together with its
/// utility and leakage measurements at budget eps.
struct PutSolution {
  Mechanism mechanism;
  double utility = 0.0;             // I(X;Y), bits
  double normalized_utility = 0.0;  // I(X;Y) / H(X)
  double alpha_leakage = 0.0;       // max_y log alpha-lift, natural log
  double maxlift_leakage = 0.0;     // max_{y,s} log lift, natural log
  double eps = 0.0;
  AlphaParam alpha = AlphaParam::infinity();
};

/// Builds the mechanism from the nonzero LP weights: output y gets
/// marginal Q_{i_y} and backward column candidates.col(i_y).
Mechanism extract_mechanism(const MixtureSolution& q, const Matrix& candidates);

/// Exact optimum of the max-lift privacy-utility tradeoff: enumerate
/// the polytope vertices at eps, minimize the entropy mixture with the
/// LP, and read the mechanism off the nonzero weights.
PutSolution solve_maxlift_put(const JointDistribution& j, double eps);

/// Same pipeline starting from an explicit candidate set (columns must
/// satisfy the eps constraint); shared by the finite-alpha sweep.
PutSolution solve_put_with_candidates(const JointDistribution& j,
                                      const Channel& s_given_x,
                                      const Matrix& candidates, double eps,
                                      AlphaParam alpha);

}  // namespace alift
