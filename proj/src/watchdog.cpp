#include "alift/watchdog.hpp"

#include <algorithm>
#include <cmath>

namespace alift {

namespace {

Vector merged_column(const JointDistribution& j,
                     const std::vector<Index>& merged) {
  Vector col = Vector::Zero(j.x_card());
  double mass = 0.0;
  for (Index x : merged) mass += j.marginal_x()(x);
  for (Index x : merged) col(x) = j.marginal_x()(x) / mass;
  return col;
}

}  // namespace

MergePartition watchdog_partition(const JointDistribution& j, double eps,
                                  AlphaParam a) {
  if (eps < 0.0) throw InfeasibleEpsError("eps must be >= 0");
  const Channel s_given_x = conditional_s_given_x(j);
  const ProbVector& p_s = j.marginal_s();
  const double budget = std::exp(eps);

  Vector column_lift(j.x_card());
  for (Index x = 0; x < j.x_card(); ++x) {
    Vector lifts = s_given_x.matrix().col(x).cwiseQuotient(p_s.values());
    column_lift(x) = alpha_lift(lifts, p_s, a);
  }

  MergePartition part;
  for (Index x = 0; x < j.x_card(); ++x) {
    (column_lift(x) > budget ? part.merged : part.kept).push_back(x);
  }
  while (!part.merged.empty() && !part.kept.empty()) {
    const Vector col = merged_column(j, part.merged);
    if (posterior_alpha_lift(s_given_x, p_s, col, a) <= budget) break;
    // Greedy victim: highest per-column alpha-lift, ties by lowest index.
    auto victim = std::max_element(
        part.kept.begin(), part.kept.end(), [&](Index lhs, Index rhs) {
          if (column_lift(lhs) != column_lift(rhs)) {
            return column_lift(lhs) < column_lift(rhs);
          }
          return lhs > rhs;
        });
    part.merged.push_back(*victim);
    part.kept.erase(victim);
    std::sort(part.merged.begin(), part.merged.end());
  }
  return part;
}

PutSolution watchdog_merge(const JointDistribution& j, double eps,
                           AlphaParam a) {
  const MergePartition part = watchdog_partition(j, eps, a);
  const Channel s_given_x = conditional_s_given_x(j);

  const Index n_outputs =
      static_cast<Index>(part.kept.size()) + (part.merged.empty() ? 0 : 1);
  Matrix backward(j.x_card(), n_outputs);
  Vector p_y(n_outputs);
  Index y = 0;
  for (Index x : part.kept) {
    backward.col(y).setZero();
    backward(x, y) = 1.0;
    p_y(y) = j.marginal_x()(x);
    ++y;
  }
  if (!part.merged.empty()) {
    backward.col(y) = merged_column(j, part.merged);
    double mass = 0.0;
    for (Index x : part.merged) mass += j.marginal_x()(x);
    p_y(y) = mass;
  }

  Mechanism mech{Channel(std::move(backward)), ProbVector(std::move(p_y))};
  PutSolution sol{std::move(mech)};
  sol.eps = eps;
  sol.alpha = a;
  sol.utility = mutual_information(sol.mechanism, j.marginal_x());
  sol.normalized_utility = sol.utility / entropy(j.marginal_x().values());
  sol.alpha_leakage =
      mechanism_leakage(sol.mechanism, s_given_x, j.marginal_s(), a);
  sol.maxlift_leakage =
      max_lift_leakage(sol.mechanism, s_given_x, j.marginal_s());
  return sol;
}

}  // namespace alift
