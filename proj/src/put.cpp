#include "alift/put.hpp"

#include <utility>

namespace alift {

Mechanism extract_mechanism(const MixtureSolution& q,
                            const Matrix& candidates) {
  const auto k = static_cast<Index>(q.support.size());
  if (k == 0) throw NumericalError("mixture solution has empty support");
  Matrix backward(candidates.rows(), k);
  Vector p_y(k);
  for (Index y = 0; y < k; ++y) {
    const Index i = q.support[static_cast<size_t>(y)];
    backward.col(y) = candidates.col(i);
    p_y(y) = q.weights(i);
  }
  return Mechanism(Channel(std::move(backward)), ProbVector(std::move(p_y)));
}

PutSolution solve_put_with_candidates(const JointDistribution& j,
                                      const Channel& s_given_x,
                                      const Matrix& candidates, double eps,
                                      AlphaParam alpha) {
  Vector costs(candidates.cols());
  for (Index i = 0; i < candidates.cols(); ++i) {
    costs(i) = entropy(candidates.col(i));
  }
  const MixtureSolution mix =
      solve_min_cost_mixture(candidates, costs, j.marginal_x());
  Mechanism mech = extract_mechanism(mix, candidates);

  PutSolution sol{std::move(mech)};
  sol.eps = eps;
  sol.alpha = alpha;
  sol.utility = mutual_information(sol.mechanism, j.marginal_x());
  sol.normalized_utility = sol.utility / entropy(j.marginal_x().values());
  sol.alpha_leakage =
      mechanism_leakage(sol.mechanism, s_given_x, j.marginal_s(), alpha);
  sol.maxlift_leakage =
      max_lift_leakage(sol.mechanism, s_given_x, j.marginal_s());
  return sol;
}

PutSolution solve_maxlift_put(const JointDistribution& j, double eps) {
  const Channel s_given_x = conditional_s_given_x(j);
  const VertexSet vs = enumerate_vertices(s_given_x, j.marginal_s(), eps);
  return solve_put_with_candidates(j, s_given_x, vs.vertices, eps,
                                   AlphaParam::infinity());
}

}  // namespace alift
