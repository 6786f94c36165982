#pragma once

#include <compare>
#include <limits>
#include <string>

#include "alift/prob.hpp"

namespace alift {

/// The order parameter of the alpha-lift: either a finite value in
/// (1, inf) or infinity. Infinity is a distinct state, never a large
/// finite stand-in.
class AlphaParam {
 public:
  static AlphaParam infinity() { return AlphaParam(kInf); }
  static AlphaParam finite(double a);

  bool is_infinite() const { return value_ == kInf; }
  /// Finite value; only valid when !is_infinite().
  double value() const;

  /// Orders as an extended real (infinity greater than any finite value).
  friend auto operator<=>(const AlphaParam& a, const AlphaParam& b) {
    return a.value_ <=> b.value_;
  }
  friend bool operator==(const AlphaParam& a, const AlphaParam& b) = default;

  std::string str() const;
  static AlphaParam parse(const std::string& text);

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  explicit AlphaParam(double v) : value_(v) {}
  double value_;
};

/// Table of lifts l(s,x) = P_{S|X}(s|x) / P_S(s). Each column has
/// P_S-weighted mean 1.
struct LiftTable {
  Matrix entries;  // |S| x |X|
};

LiftTable lift_table(const Channel& s_given_x, const ProbVector& p_s);

/// The alpha-lift of a lift column: the P_S-weighted power mean of
/// order alpha, or the maximum when alpha is infinite. Evaluated in the
/// log domain for large alpha; zero lift entries contribute nothing.
double alpha_lift(const Eigen::Ref<const Vector>& lift_column,
                  const ProbVector& p_s, AlphaParam a);

/// Alpha-lift of the posterior P_{S|Y=y} = P_{S|X} v for a backward
/// column v = P_{X|Y=y}.
double posterior_alpha_lift(const Channel& s_given_x, const ProbVector& p_s,
                            const Eigen::Ref<const Vector>& v, AlphaParam a);

/// The universal leakage ceiling: log max_x of the per-column
/// alpha-lift of P_{S|X}. Natural log.
double eps_max(const JointDistribution& j, AlphaParam a);

/// max_y log alpha-lift of the mechanism's posteriors. Natural log.
double mechanism_leakage(const Mechanism& m, const Channel& s_given_x,
                         const ProbVector& p_s, AlphaParam a);

/// Worst-case pointwise leakage max_{y,s} log l(s,y); identical to
/// mechanism_leakage at alpha = infinity.
double max_lift_leakage(const Mechanism& m, const Channel& s_given_x,
                        const ProbVector& p_s);

}  // namespace alift
