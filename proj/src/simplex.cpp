#include "alift/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace alift {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kPhase1Tol = 1e-8;
constexpr double kWeightTol = 1e-12;

// Dense two-phase simplex tableau over the standard-form program.
class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b)
      : rows_(a.rows()), cols_(a.cols()), t_(a.rows(), a.cols() + a.rows() + 1) {
    t_.leftCols(cols_) = a;
    t_.middleCols(cols_, rows_) = Matrix::Identity(rows_, rows_);
    t_.col(cols_ + rows_) = b;
    basis_.resize(rows_);
    alive_.assign(static_cast<size_t>(rows_), true);
    for (Index r = 0; r < rows_; ++r) basis_[r] = cols_ + r;
  }

  Index rhs_col() const { return cols_ + rows_; }

  void pivot(Index pr, Index pc, Vector& obj) {
    t_.row(pr) /= t_(pr, pc);
    for (Index r = 0; r < rows_; ++r) {
      if (r == pr || !alive_[static_cast<size_t>(r)]) continue;
      const double f = t_(r, pc);
      if (f != 0.0) t_.row(r) -= f * t_.row(pr);
    }
    const double f = obj(pc);
    if (f != 0.0) obj -= f * t_.row(pr).transpose();
    basis_[pr] = pc;
  }

  // Bland's rule: entering = smallest column index with negative reduced
  // cost; leaving = min-ratio row, ties broken by smallest basic index.
  // Only original columns [0, limit) may enter. Returns false at optimum.
  bool bland_step(Vector& obj, Index limit) {
    Index entering = -1;
    for (Index j = 0; j < limit; ++j) {
      if (obj(j) < -kPivotTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return false;
    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < rows_; ++r) {
      if (!alive_[static_cast<size_t>(r)]) continue;
      const double coeff = t_(r, entering);
      if (coeff <= kPivotTol) continue;
      const double ratio = t_(r, rhs_col()) / coeff;
      if (ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol &&
           (leaving < 0 || basis_[r] < basis_[leaving]))) {
        best_ratio = ratio;
        leaving = r;
      }
    }
    if (leaving < 0) {
      throw NumericalError("linear program is unbounded");
    }
    pivot(leaving, entering, obj);
    return true;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool alive(Index r) const { return alive_[static_cast<size_t>(r)]; }
  void kill_row(Index r) { alive_[static_cast<size_t>(r)] = false; }
  Index basic(Index r) const { return basis_[r]; }
  double value(Index r) const { return t_(r, rhs_col()); }
  double coeff(Index r, Index c) const { return t_(r, c); }

 private:
  Index rows_, cols_;
  Matrix t_;
  std::vector<Index> basis_;
  std::vector<bool> alive_;
};

}  // namespace

MixtureSolution solve_min_cost_mixture(const Matrix& candidates,
                                       const Vector& costs,
                                       const ProbVector& p_x) {
  const Index n = p_x.size();
  const Index m = candidates.cols();
  if (m == 0) throw InfeasibleError("no candidates");
  if (candidates.rows() != n || costs.size() != m) {
    throw ValidationError("candidate/cost dimensions disagree");
  }

  const Index rows = n + 1;
  Matrix a(rows, m);
  a.topRows(n) = candidates;
  a.bottomRows(1).setOnes();
  Vector b(rows);
  b.head(n) = p_x.values();
  b(n) = 1.0;

  Tableau t(a, b);
  const long max_iters = 1000 + 50 * static_cast<long>(m + rows);

  // Phase 1: minimize the sum of artificials (all basic initially).
  Vector obj = Vector::Zero(t.rhs_col() + 1);
  for (Index j = 0; j <= t.rhs_col(); ++j) {
    double s = 0.0;
    for (Index r = 0; r < rows; ++r) s += t.coeff(r, j);
    obj(j) = -s;
  }
  for (Index r = 0; r < rows; ++r) obj(t.basic(r)) = 0.0;
  long iters = 0;
  while (t.bland_step(obj, m)) {
    if (++iters > max_iters) throw NumericalError("simplex iteration cap");
  }
  double infeas = 0.0;
  for (Index r = 0; r < rows; ++r) {
    if (t.alive(r) && t.basic(r) >= m) infeas += std::abs(t.value(r));
  }
  if (infeas > kPhase1Tol) {
    throw InfeasibleError("p_x is outside the candidate hull (phase-1 gap " +
                          std::to_string(infeas) + ")");
  }

  // Drive artificials out of the basis; rows with no usable pivot are
  // redundant and dropped.
  for (Index r = 0; r < rows; ++r) {
    if (!t.alive(r) || t.basic(r) < m) continue;
    Index pc = -1;
    double best = 1e-7;  // pivot on the largest coefficient for stability
    for (Index j = 0; j < m; ++j) {
      if (std::abs(t.coeff(r, j)) > best) {
        best = std::abs(t.coeff(r, j));
        pc = j;
      }
    }
    if (pc < 0) {
      t.kill_row(r);
    } else {
      t.pivot(r, pc, obj);
    }
  }

  // Phase 2: minimize the real costs from the feasible basis.
  obj.setZero();
  obj.head(m) = costs;
  for (Index r = 0; r < rows; ++r) {
    if (!t.alive(r)) continue;
    const double cb = costs(t.basic(r));
    if (cb != 0.0) {
      for (Index j = 0; j <= t.rhs_col(); ++j) obj(j) -= cb * t.coeff(r, j);
    }
    obj(t.basic(r)) = 0.0;
  }
  iters = 0;
  while (t.bland_step(obj, m)) {
    if (++iters > max_iters) throw NumericalError("simplex iteration cap");
  }

  MixtureSolution sol;
  sol.weights = Vector::Zero(m);
  std::vector<Index> basic_cols;
  for (Index r = 0; r < rows; ++r) {
    if (t.alive(r) && t.basic(r) < m) {
      sol.weights(t.basic(r)) = std::max(0.0, t.value(r));
      basic_cols.push_back(t.basic(r));
    }
  }
  std::sort(basic_cols.begin(), basic_cols.end());

  // Re-solve the basic system directly to shed accumulated pivot error.
  if (!basic_cols.empty()) {
    Matrix ab(rows, static_cast<Index>(basic_cols.size()));
    for (size_t i = 0; i < basic_cols.size(); ++i) {
      ab.col(static_cast<Index>(i)) = a.col(basic_cols[i]);
    }
    Vector q = ab.colPivHouseholderQr().solve(b);
    if (q.minCoeff() >= -1e-9 &&
        (ab * q - b).lpNorm<Eigen::Infinity>() <= 1e-10) {
      for (size_t i = 0; i < basic_cols.size(); ++i) {
        sol.weights(basic_cols[i]) = std::max(0.0, q(static_cast<Index>(i)));
      }
    }
  }

  const double residual =
      (a * sol.weights - b).lpNorm<Eigen::Infinity>();
  if (residual > 1e-9) {
    throw NumericalError("mixture residual " + std::to_string(residual));
  }
  for (Index i = 0; i < m; ++i) {
    if (sol.weights(i) > kWeightTol) {
      sol.support.push_back(i);
    } else {
      sol.weights(i) = 0.0;
    }
  }
  sol.objective = sol.weights.dot(costs);
  return sol;
}

}  // namespace alift
