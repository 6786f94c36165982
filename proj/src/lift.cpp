#include "alift/lift.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace alift {

AlphaParam AlphaParam::finite(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw ValidationError("alpha must be finite and > 1, got " +
                          std::to_string(a));
  }
  return AlphaParam(a);
}

double AlphaParam::value() const {
  if (is_infinite()) throw ValidationError("alpha is infinite");
  return value_;
}

std::string AlphaParam::str() const {
  if (is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value_);
  return buf;
}

AlphaParam AlphaParam::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return infinity();
  size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw ValidationError("bad alpha: " + text);
  if (std::isinf(v)) return infinity();
  return finite(v);
}

LiftTable lift_table(const Channel& s_given_x, const ProbVector& p_s) {
  Matrix t = s_given_x.matrix();
  for (Index s = 0; s < t.rows(); ++s) {
    t.row(s) /= p_s(s);
  }
  return LiftTable{std::move(t)};
}

double alpha_lift(const Eigen::Ref<const Vector>& lift_column,
                  const ProbVector& p_s, AlphaParam a) {
  if (a.is_infinite()) {
    return lift_column.maxCoeff();
  }
  const double alpha = a.value();
  // log-sum-exp over log P_S(s) + alpha log l(s), dropping zero lifts.
  double m = -std::numeric_limits<double>::infinity();
  for (Index s = 0; s < lift_column.size(); ++s) {
    if (lift_column(s) > 0.0) m = std::max(m, std::log(lift_column(s)));
  }
  if (!std::isfinite(m)) return 0.0;
  double acc = 0.0;
  for (Index s = 0; s < lift_column.size(); ++s) {
    if (lift_column(s) > 0.0) {
      acc += p_s(s) * std::exp(alpha * (std::log(lift_column(s)) - m));
    }
  }
  return std::exp(m + std::log(acc) / alpha);
}

double posterior_alpha_lift(const Channel& s_given_x, const ProbVector& p_s,
                            const Eigen::Ref<const Vector>& v, AlphaParam a) {
  Vector posterior = s_given_x.matrix() * v;
  Vector lifts = posterior.cwiseQuotient(p_s.values());
  return alpha_lift(lifts, p_s, a);
}

double eps_max(const JointDistribution& j, AlphaParam a) {
  const Channel c = conditional_s_given_x(j);
  double worst = 0.0;
  for (Index x = 0; x < j.x_card(); ++x) {
    Vector lifts = c.matrix().col(x).cwiseQuotient(j.marginal_s().values());
    worst = std::max(worst, alpha_lift(lifts, j.marginal_s(), a));
  }
  return std::log(worst);
}

double mechanism_leakage(const Mechanism& m, const Channel& s_given_x,
                         const ProbVector& p_s, AlphaParam a) {
  const Vector implied = m.implied_input_marginal();
  if (std::abs(implied.sum() - 1.0) > kSumTol) {
    throw InconsistentMechanismError("mechanism output marginal is invalid");
  }
  double worst = 0.0;
  for (Index y = 0; y < m.output_card(); ++y) {
    worst = std::max(worst, posterior_alpha_lift(
                                s_given_x, p_s, m.backward().matrix().col(y), a));
  }
  return std::log(worst);
}

double max_lift_leakage(const Mechanism& m, const Channel& s_given_x,
                        const ProbVector& p_s) {
  return mechanism_leakage(m, s_given_x, p_s, AlphaParam::infinity());
}

}  // namespace alift
