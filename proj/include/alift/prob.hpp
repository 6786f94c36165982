#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "alift/errors.hpp"

namespace alift {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Tolerance for stochasticity checks (|sum - 1| and componentwise
/// consistency residuals). Renormalization is never applied silently.
inline constexpr double kSumTol = 1e-9;

/// Shannon entropy in bits, with 0 log 0 := 0. Accepts any Eigen
/// expression over a probability vector (e.g. a matrix column).
template <typename Derived>
double entropy(const Eigen::MatrixBase<Derived>& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double v = p(i);
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

/// A probability distribution over a finite alphabet: entries >= 0,
/// summing to 1 within kSumTol. Immutable after construction.
class ProbVector {
 public:
  explicit ProbVector(Vector values);

  static ProbVector uniform(Index n);
  static ProbVector point_mass(Index n, Index at);

  const Vector& values() const { return values_; }
  double operator()(Index i) const { return values_(i); }
  Index size() const { return values_.size(); }

 private:
  Vector values_;
};

/// A column-stochastic conditional distribution: column j is the
/// distribution of the output given input symbol j.
class Channel {
 public:
  explicit Channel(Matrix columns);

  static Channel identity(Index n);

  const Matrix& matrix() const { return columns_; }
  Index input_card() const { return columns_.cols(); }
  Index output_card() const { return columns_.rows(); }
  Vector column(Index j) const { return columns_.col(j); }

 private:
  Matrix columns_;
};

/// Joint distribution over S x X (rows = sensitive symbol s, columns =
/// useful symbol x) with cached strictly positive marginals.
class JointDistribution {
 public:
  const Matrix& table() const { return table_; }
  const ProbVector& marginal_s() const { return p_s_; }
  const ProbVector& marginal_x() const { return p_x_; }
  Index s_card() const { return table_.rows(); }
  Index x_card() const { return table_.cols(); }

  friend JointDistribution validate_joint(const Matrix& table);

 private:
  JointDistribution(Matrix table, ProbVector p_s, ProbVector p_x)
      : table_(std::move(table)), p_s_(std::move(p_s)), p_x_(std::move(p_x)) {}

  Matrix table_;
  ProbVector p_s_;
  ProbVector p_x_;
};

/// Validates a raw table as a joint distribution. Throws
/// NegativeEntryError, SumNotOneError or ZeroMarginalError.
JointDistribution validate_joint(const Matrix& table);

/// A randomized mechanism described by its backward channel P_{X|Y}
/// (columns indexed by output y) and output marginal P_Y. Outputs with
/// zero mass are pruned before construction.
class Mechanism {
 public:
  Mechanism(Channel backward, ProbVector output_marginal);

  static Mechanism identity(const ProbVector& p_x);
  static Mechanism single_output(const ProbVector& p_x);

  const Channel& backward() const { return backward_; }
  const ProbVector& output_marginal() const { return output_marginal_; }
  Index output_card() const { return output_marginal_.size(); }

  /// The input marginal implied by P_{X|Y} P_Y.
  Vector implied_input_marginal() const {
    return backward_.matrix() * output_marginal_.values();
  }

 private:
  Channel backward_;
  ProbVector output_marginal_;
};

/// Throws InconsistentMechanismError unless P_{X|Y} P_Y = p_x within
/// kSumTol componentwise.
void require_consistent(const Mechanism& m, const ProbVector& p_x);

/// The channel P_{S|X} of a joint: column x is the joint column divided
/// by P_X(x).
Channel conditional_s_given_x(const JointDistribution& j);

/// I(X;Y) = H(X) - sum_y P_Y(y) h(P_{X|Y=y}), in bits.
double mutual_information(const Mechanism& m, const ProbVector& p_x);

/// Bayes inversion P_{Y|X}(y|x) = P_{X|Y=y}(x) P_Y(y) / P_X(x),
/// column-stochastic in x.
Channel forward_channel(const Mechanism& m, const ProbVector& p_x);

}  // namespace alift
