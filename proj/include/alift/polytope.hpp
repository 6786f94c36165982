#pragma once

#include <cstdint>

#include "alift/prob.hpp"

namespace alift {

/// Feasibility slack for lift constraints, relative to e^eps P_S(s).
inline constexpr double kFeasTol = 1e-9;
/// Two vertices within this L-infinity distance are considered equal.
inline constexpr double kDedupeTol = 1e-8;
/// Guard against combinatorial blowup of the active-set enumeration.
inline constexpr std::uint64_t kDefaultActiveSetCap = 10'000'000;

enum class VertexProvenance { kPolytopeVertex, kSweepSeed, kPreviousSolution };

/// Candidate backward-channel columns: each column of `vertices` is a
/// distribution over X lying in the max-lift polytope at `eps_level`.
struct VertexSet {
  Matrix vertices;  // |X| x K, columns sorted lexicographically
  double eps_level = 0.0;
  VertexProvenance provenance = VertexProvenance::kPolytopeVertex;

  Index count() const { return vertices.cols(); }
};

/// Enumerates the vertices of
///   { V in simplex(X) : P_{S|X} V <= e^eps P_S componentwise }
/// by solving every square active-constraint system (the normalization
/// row plus |X|-1 rows chosen among V_x = 0 and tight lift constraints),
/// keeping unique feasible solutions. Deterministic: duplicates collapse
/// to the lexicographically smallest representative and the result is
/// sorted lexicographically.
///
/// Throws InfeasibleEpsError for eps < 0 and CapExceededError when the
/// number of active sets exceeds `active_set_cap`.
VertexSet enumerate_vertices(const Channel& s_given_x, const ProbVector& p_s,
                             double eps,
                             std::uint64_t active_set_cap = kDefaultActiveSetCap);

}  // namespace alift
