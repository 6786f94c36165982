#pragma once

#include <vector>

#include "alift/put.hpp"

namespace alift {

/// Partition of the input alphabet into identity-mapped symbols and
/// symbols collapsed into one shared output.
struct MergePartition {
  std::vector<Index> kept;
  std::vector<Index> merged;
};

/// The partition the merging watchdog settles on at budget (eps, alpha):
/// symbols whose per-column alpha-lift exceeds e^eps are merged; if the
/// merged output still violates the budget, the remaining symbol with
/// the highest per-column alpha-lift joins the merge, until the budget
/// holds or everything is merged.
MergePartition watchdog_partition(const JointDistribution& j, double eps,
                                  AlphaParam a);

/// Baseline merging mechanism: identity on the kept symbols plus one
/// merged output carrying P_X restricted to the merge set.
PutSolution watchdog_merge(const JointDistribution& j, double eps,
                           AlphaParam a);

}  // namespace alift
