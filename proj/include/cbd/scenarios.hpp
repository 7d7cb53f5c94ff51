#pragma once

#include <array>
#include <string>
#include <vector>

#include "cbd/cyclic.hpp"
#include "cbd/system.hpp"

namespace cbd {

// Double-slit system: two slits, each open or closed, one small detector.
// Contents ask "did the particle reach the detector through this slit in
// this state?"; contexts are the four open/closed configurations.

namespace double_slit {
inline constexpr const char* kLeftOpen = "left.open";
inline constexpr const char* kRightOpen = "right.open";
inline constexpr const char* kLeftClosed = "left.closed";
inline constexpr const char* kRightClosed = "right.closed";

inline constexpr const char* kBothOpen = "open-open";
inline constexpr const char* kLeftClosedRightOpen = "closed-open";
inline constexpr const char* kBothClosed = "closed-closed";
inline constexpr const char* kLeftOpenRightClosed = "open-closed";
}  // namespace double_slit

struct DoubleSlitParams {
  /// Pr[detected via the left slit | left open, right closed].
  double p = 0.0;
  /// Pr[detected via the right slit | left closed, right open].
  double q = 0.0;
  /// Both open: Pr[left only], Pr[right only], Pr[both] in the joint table.
  double p_prime = 0.0;
  double q_prime = 0.0;
  double r_prime = 0.0;
};

/// Every violated parameter constraint, including the strict smallness
/// conditions 1-2p > 0, 1-2q > 0, 1-2p'-2q' > 0.
std::vector<std::string> validate_double_slit(const DoubleSlitParams& params);

/// Cyclic rank-4 system. Throws ValidationError on invalid params.
System build_double_slit(const DoubleSlitParams& params);

/// The maximal-equality criterion specialised to the double-slit tables:
///   lhs = sum(s) - 2 min(s),  s = (1-2p, 1, 1-2q, 1-2p'-2q')
///   rhs = 2 + 2|p - p' - r'| + 2|q - q' - r'|
CriterionResult check_double_slit(const DoubleSlitParams& params);

/// Question-order system: contents q_A, q_B asked in both orders. Both
/// bunches are over (q_A, q_B) in that bit order.
struct QuestionOrderParams {
  std::vector<double> joint_ab;
  std::vector<double> joint_ba;
};

namespace question_order {
inline constexpr const char* kFirst = "q_A";
inline constexpr const char* kSecond = "q_B";
inline constexpr const char* kOrderAB = "c_AB";
inline constexpr const char* kOrderBA = "c_BA";
}  // namespace question_order

/// Throws ValidationError on invalid bunches.
System build_question_order(const QuestionOrderParams& params);

/// Probabilities of a 2x2 binary distribution from its moments, in bunch
/// bit order: Pr[x, y] = (1 + x<a> + y<b> + xy<ab>) / 4. Throws
/// ValidationError when any implied probability is negative.
std::array<double, 4> bunch_from_moments(double mean_a, double mean_b,
                                         double product);

/// Rank-4 Bell system with contents q1..q4 and contexts c1..c4, context c_j
/// holding (q_j, q_{j+1}). product_expectations[j] = <R_j R_{j+1}> in c_j;
/// marginals[2j] and marginals[2j+1] are the expectations of the two
/// contents in c_j.
System build_bell(const std::array<double, 4>& product_expectations,
                  const std::array<double, 8>& marginals);

}  // namespace cbd
