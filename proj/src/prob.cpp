#include "alift/prob.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace alift {

namespace {

void check_prob_entries(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) < 0.0) {
      throw NegativeEntryError("negative probability entry at index " +
                               std::to_string(i));
    }
    if (!std::isfinite(v(i))) {
      throw NegativeEntryError("non-finite probability entry at index " +
                               std::to_string(i));
    }
  }
  const double sum = v.sum();
  if (std::abs(sum - 1.0) > kSumTol) {
    throw SumNotOneError("probability vector sums to " + std::to_string(sum));
  }
}

}  // namespace

ProbVector::ProbVector(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw ValidationError("empty probability vector");
  check_prob_entries(values_);
}

ProbVector ProbVector::uniform(Index n) {
  return ProbVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(Index n, Index at) {
  Vector v = Vector::Zero(n);
  v(at) = 1.0;
  return ProbVector(std::move(v));
}

Channel::Channel(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.size() == 0) throw ValidationError("empty channel");
  for (Index j = 0; j < columns_.cols(); ++j) {
    ProbVector check{columns_.col(j)};  // validates the column
    (void)check;
  }
}

Channel Channel::identity(Index n) { return Channel(Matrix::Identity(n, n)); }

JointDistribution validate_joint(const Matrix& table) {
  if (table.rows() < 1 || table.cols() < 1) {
    throw ValidationError("empty joint table");
  }
  for (Index s = 0; s < table.rows(); ++s) {
    for (Index x = 0; x < table.cols(); ++x) {
      if (table(s, x) < 0.0 || !std::isfinite(table(s, x))) {
        throw NegativeEntryError("invalid joint entry at (" +
                                 std::to_string(s) + "," + std::to_string(x) +
                                 ")");
      }
    }
  }
  const double total = table.sum();
  if (std::abs(total - 1.0) > kSumTol) {
    throw SumNotOneError("joint table sums to " + std::to_string(total));
  }
  Vector p_s = table.rowwise().sum();
  Vector p_x = table.colwise().sum().transpose();
  if (p_s.minCoeff() <= 0.0) {
    throw ZeroMarginalError("some P_S(s) = 0; lift is undefined");
  }
  if (p_x.minCoeff() <= 0.0) {
    throw ZeroMarginalError("some P_X(x) = 0; lift is undefined");
  }
  return JointDistribution(table, ProbVector(std::move(p_s)),
                           ProbVector(std::move(p_x)));
}

Mechanism::Mechanism(Channel backward, ProbVector output_marginal)
    : backward_(std::move(backward)),
      output_marginal_(std::move(output_marginal)) {
  if (backward_.matrix().cols() != output_marginal_.size()) {
    throw ValidationError("backward channel and output marginal disagree");
  }
  if (output_marginal_.values().minCoeff() <= 0.0) {
    throw ValidationError("mechanism has a zero-mass output; prune it first");
  }
}

Mechanism Mechanism::identity(const ProbVector& p_x) {
  return Mechanism(Channel::identity(p_x.size()), p_x);
}

Mechanism Mechanism::single_output(const ProbVector& p_x) {
  Matrix col(p_x.size(), 1);
  col.col(0) = p_x.values();
  Vector py(1);
  py(0) = 1.0;
  return Mechanism(Channel(std::move(col)), ProbVector(std::move(py)));
}

void require_consistent(const Mechanism& m, const ProbVector& p_x) {
  if (m.backward().matrix().rows() != p_x.size()) {
    throw InconsistentMechanismError("mechanism input alphabet mismatch");
  }
  const Vector implied = m.implied_input_marginal();
  const double err = (implied - p_x.values()).lpNorm<Eigen::Infinity>();
  if (err > kSumTol) {
    throw InconsistentMechanismError("P_{X|Y} P_Y differs from P_X by " +
                                     std::to_string(err));
  }
}

Channel conditional_s_given_x(const JointDistribution& j) {
  Matrix cols = j.table();
  for (Index x = 0; x < cols.cols(); ++x) {
    cols.col(x) /= j.marginal_x()(x);
  }
  return Channel(std::move(cols));
}

double mutual_information(const Mechanism& m, const ProbVector& p_x) {
  require_consistent(m, p_x);
  double h_cond = 0.0;
  for (Index y = 0; y < m.output_card(); ++y) {
    h_cond += m.output_marginal()(y) * entropy(m.backward().matrix().col(y));
  }
  double mi = entropy(p_x.values()) - h_cond;
  if (mi < 0.0 && mi > -1e-12) mi = 0.0;  // roundoff at the boundary
  return mi;
}

Channel forward_channel(const Mechanism& m, const ProbVector& p_x) {
  require_consistent(m, p_x);
  Matrix fwd(m.output_card(), p_x.size());
  for (Index x = 0; x < p_x.size(); ++x) {
    for (Index y = 0; y < m.output_card(); ++y) {
      fwd(y, x) =
          m.backward().matrix()(x, y) * m.output_marginal()(y) / p_x(x);
    }
    // Raw sums deviate from 1 by the consistency residual scaled by
    // 1/P_X(x); rescale so the result is a valid Channel.
    fwd.col(x) /= fwd.col(x).sum();
  }
  return Channel(std::move(fwd));
}

}  // namespace alift
