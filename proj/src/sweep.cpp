#include "alift/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace alift {

void SweepConfig::validate() const {
  if (alphas.empty()) throw ValidationError("sweep needs at least one alpha");
  for (size_t i = 0; i + 1 < alphas.size(); ++i) {
    if (!(alphas[i + 1] < alphas[i])) {
      throw ValidationError("alphas must be strictly decreasing");
    }
  }
  if (epsilons.empty()) throw ValidationError("sweep needs at least one eps");
  for (size_t j = 0; j + 1 < epsilons.size(); ++j) {
    if (!(epsilons[j] < epsilons[j + 1])) {
      throw ValidationError("epsilons must be strictly increasing");
    }
  }
  if (epsilons.front() < Rational(0)) {
    throw ValidationError("epsilons must be nonnegative");
  }
  if (interp_counts.size() != epsilons.size()) {
    throw ValidationError("need one interpolation count per eps");
  }
  for (int n : interp_counts) {
    if (n < 1) throw ValidationError("interpolation counts must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0,1)");
  }
  if (!(epsilons.back() < eps_tail)) {
    throw ValidationError("eps_tail must exceed the last grid eps");
  }
}

SweepConfig SweepConfig::uniform(std::vector<AlphaParam> alphas,
                                 const Rational& start, const Rational& step,
                                 const Rational& stop, int interp,
                                 double delta, const Rational& eps_tail) {
  SweepConfig cfg;
  cfg.alphas = std::move(alphas);
  if (!(step > Rational(0))) throw ValidationError("eps step must be > 0");
  for (Rational e = start; !(stop < e); e = e + step) {
    cfg.epsilons.push_back(e);
  }
  if (cfg.epsilons.empty()) throw ValidationError("empty eps grid");
  cfg.interp_counts.assign(cfg.epsilons.size(), interp);
  cfg.delta = delta;
  cfg.eps_tail = eps_tail;
  cfg.validate();
  return cfg;
}

std::vector<std::vector<Rational>> build_eps_grid(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<Rational>> groups(cfg.epsilons.size());
  for (size_t j = 0; j < cfg.epsilons.size(); ++j) {
    const Rational& lo = cfg.epsilons[j];
    const Rational& hi =
        j + 1 < cfg.epsilons.size() ? cfg.epsilons[j + 1] : cfg.eps_tail;
    const Rational width = hi - lo;
    const int n = cfg.interp_counts[j];
    for (int k = 0; k < n; ++k) {
      groups[j].push_back(lo + width * Rational(k) / Rational(n));
    }
  }
  return groups;
}

std::map<Rational, VertexSet> candidate_pool(
    const JointDistribution& j, const std::vector<Rational>& levels) {
  const Channel s_given_x = conditional_s_given_x(j);
  std::map<Rational, VertexSet> pool;
  for (const Rational& level : levels) {
    pool.emplace(level, enumerate_vertices(s_given_x, j.marginal_s(),
                                           level.to_double()));
  }
  return pool;
}

Matrix filter_band(const Matrix& vertices, const Channel& s_given_x,
                   const ProbVector& p_s, AlphaParam alpha, double eps,
                   double delta) {
  const double hi = std::exp(eps);
  const double lo = (1.0 - delta) * hi;
  std::vector<Index> keep;
  for (Index i = 0; i < vertices.cols(); ++i) {
    const double lift = posterior_alpha_lift(s_given_x, p_s, vertices.col(i),
                                             alpha);
    if (lift >= lo && lift <= hi) keep.push_back(i);
  }
  Matrix out(vertices.rows(), static_cast<Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    out.col(static_cast<Index>(i)) = vertices.col(keep[i]);
  }
  return out;
}

namespace {

// Ordered candidate pool with first-seen deduplication at kDedupeTol.
class CandidateAccumulator {
 public:
  explicit CandidateAccumulator(Index dim) : dim_(dim) {}

  void add(const Vector& v) {
    for (const Vector& u : cols_) {
      if ((u - v).lpNorm<Eigen::Infinity>() < kDedupeTol) return;
    }
    cols_.push_back(v);
  }

  void add_columns(const Matrix& m) {
    for (Index i = 0; i < m.cols(); ++i) add(m.col(i));
  }

  Matrix materialize() const {
    Matrix out(dim_, static_cast<Index>(cols_.size()));
    for (size_t i = 0; i < cols_.size(); ++i) {
      out.col(static_cast<Index>(i)) = cols_[i];
    }
    return out;
  }

  size_t size() const { return cols_.size(); }

 private:
  Index dim_;
  std::vector<Vector> cols_;
};

Matrix support_columns(const PutSolution& sol) {
  return sol.mechanism.backward().matrix();
}

}  // namespace

SweepGrid run_sweep(const JointDistribution& joint, const SweepConfig& cfg) {
  cfg.validate();
  const Channel s_given_x = conditional_s_given_x(joint);
  const ProbVector& p_s = joint.marginal_s();
  const size_t n_alpha = cfg.alphas.size();
  const size_t n_eps = cfg.epsilons.size();

  // Interpolated budget levels, flattened and indexed. Group ranges are
  // disjoint and ascending, so the flat list is already sorted.
  const auto groups = build_eps_grid(cfg);
  std::vector<Rational> levels;
  std::vector<std::vector<size_t>> group_level_ids(n_eps);
  for (size_t j = 0; j < n_eps; ++j) {
    for (const Rational& level : groups[j]) {
      group_level_ids[j].push_back(levels.size());
      levels.push_back(level);
    }
  }

  // Vertex sets per level, shared across all cells.
  std::vector<VertexSet> level_vertices;
  level_vertices.reserve(levels.size());
  for (const Rational& level : levels) {
    level_vertices.push_back(
        enumerate_vertices(s_given_x, p_s, level.to_double()));
  }

  // Exact max-lift solutions at each grid eps seed every cell of that
  // column. Grid eps_j is the k=0 level of group j.
  std::vector<PutSolution> exact_seeds;
  exact_seeds.reserve(n_eps);
  for (size_t j = 0; j < n_eps; ++j) {
    const VertexSet& vs = level_vertices[group_level_ids[j][0]];
    exact_seeds.push_back(solve_put_with_candidates(
        joint, s_given_x, vs.vertices, cfg.epsilons[j].to_double(),
        AlphaParam::infinity()));
  }

  // Per-alpha cache of per-vertex alpha-lift values at each level.
  std::vector<std::vector<std::optional<Vector>>> lift_cache(
      n_alpha, std::vector<std::optional<Vector>>(levels.size()));
  auto level_lifts = [&](size_t i, size_t level_id) -> const Vector& {
    auto& slot = lift_cache[i][level_id];
    if (!slot) {
      const Matrix& verts = level_vertices[level_id].vertices;
      Vector lifts(verts.cols());
      for (Index c = 0; c < verts.cols(); ++c) {
        lifts(c) =
            posterior_alpha_lift(s_given_x, p_s, verts.col(c), cfg.alphas[i]);
      }
      slot = std::move(lifts);
    }
    return *slot;
  };

  SweepGrid grid;
  grid.alphas = cfg.alphas;
  for (const Rational& e : cfg.epsilons) grid.epsilons.push_back(e.to_double());
  grid.cells.resize(n_alpha);
  grid.pool_sizes.assign(n_alpha, std::vector<int>(n_eps, 0));

  // prev_alpha_solutions[j] holds the support columns of cell (i-1, j);
  // both boundary solution sets start empty.
  std::vector<Matrix> prev_alpha_solutions(n_eps, Matrix(joint.x_card(), 0));
  for (size_t i = 0; i < n_alpha; ++i) {
    const AlphaParam alpha = cfg.alphas[i];
    Matrix prev_eps_solutions(joint.x_card(), 0);
    grid.cells[i].reserve(n_eps);
    for (size_t j = 0; j < n_eps; ++j) {
      const double eps_j = cfg.epsilons[j].to_double();
      const double band_hi = std::exp(eps_j);
      const double band_lo = (1.0 - cfg.delta) * band_hi;

      CandidateAccumulator pool(joint.x_card());
      pool.add_columns(support_columns(exact_seeds[j]));
      pool.add_columns(prev_alpha_solutions[j]);
      pool.add_columns(prev_eps_solutions);
      for (size_t k = j; k < n_eps; ++k) {
        for (size_t level_id : group_level_ids[k]) {
          const Vector& lifts = level_lifts(i, level_id);
          const Matrix& verts = level_vertices[level_id].vertices;
          for (Index c = 0; c < verts.cols(); ++c) {
            if (lifts(c) >= band_lo && lifts(c) <= band_hi) {
              pool.add(verts.col(c));
            }
          }
        }
      }

      const Matrix candidates = pool.materialize();
      // Pool soundness: every candidate must satisfy this cell's
      // alpha-lift constraint.
      for (Index c = 0; c < candidates.cols(); ++c) {
        const double lift =
            posterior_alpha_lift(s_given_x, p_s, candidates.col(c), alpha);
        if (lift > band_hi * (1.0 + kFeasTol)) {
          throw NumericalError("infeasible candidate in sweep pool (lift " +
                               std::to_string(lift) + " at eps " +
                               std::to_string(eps_j) + ")");
        }
      }

      PutSolution sol = solve_put_with_candidates(joint, s_given_x, candidates,
                                                  eps_j, alpha);
      prev_eps_solutions = support_columns(sol);
      prev_alpha_solutions[j] = prev_eps_solutions;
      grid.pool_sizes[i][j] = static_cast<int>(candidates.cols());
      grid.cells[i].push_back(std::move(sol));
    }
  }
  return grid;
}

}  // namespace alift
