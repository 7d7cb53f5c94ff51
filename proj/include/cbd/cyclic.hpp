#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbd/system.hpp"

namespace cbd {

/// One position of a cycle: content q_i sits between contexts c_{i-1} and
/// c_i. Context c_i holds q_i and q_{i+1}.
struct CycleLink {
  std::string content;
  std::string prev_context;
  std::string next_context;

  friend bool operator==(const CycleLink&, const CycleLink&) = default;
};

struct CyclicLayout {
  int rank = 0;
  std::vector<CycleLink> order;

  friend bool operator==(const CyclicLayout&, const CyclicLayout&) = default;
};

/// Recognizes cyclic systems of rank 2 or 4. The returned layout starts at
/// the lexicographically least content id and runs toward the smaller
/// neighbour (ties between parallel contexts broken by context id).
std::optional<CyclicLayout> detect_cyclic(const System& sys);

/// Same traversal without the rank restriction; used for invariance tests
/// and for routing rank-3 and rank >= 5 systems.
std::optional<CyclicLayout> detect_cycle_any_rank(const System& sys);

struct ContentGap {
  std::string content;
  double gap;

  friend bool operator==(const ContentGap&, const ContentGap&) = default;
};

struct CriterionResult {
  std::string criterion;
  double lhs = 0.0;
  double rhs = 0.0;
  bool noncontextual = false;
  /// |lhs - rhs| <= kFeasTolerance.
  bool boundary = false;
  /// |<R_i> in c_{i-1} - <R_i> in c_i| per content, in layout order.
  std::vector<ContentGap> deltas;

  double margin() const { return rhs - lhs; }
};

/// Fills noncontextual and boundary from lhs and rhs.
CriterionResult make_verdict(std::string criterion, double lhs, double rhs,
                             std::vector<ContentGap> deltas);

/// Relabels a layout: rotate by `shift` positions, then optionally reverse
/// direction. Criteria values must not depend on either.
CyclicLayout relabel(const CyclicLayout& layout, std::size_t shift,
                     bool reverse);

/// Classical CHSH/Fine test. Requires a consistently connected rank-4
/// system; throws std::invalid_argument otherwise.
CriterionResult chsh_fine(const System& sys, const CyclicLayout& layout);

/// Maximal-equality criterion for rank 4:
///   max_j |sum_i s_i - 2 s_j| <= 2 + sum_i delta_i
/// with s_i = <R_i R_{i+1}> in context c_i.
CriterionResult cbd_cyclic4(const System& sys, const CyclicLayout& layout);

/// Maximal-equality criterion for rank 2:
///   |s_AB - s_BA| <= delta_A + delta_B
CriterionResult cbd_cyclic2(const System& sys, const CyclicLayout& layout);

/// Signed s_0 - s_1 over the two contexts of a rank-2 layout, in layout
/// order. Zero exactly when the QQ equality holds.
double qq_statistic(const System& sys, const CyclicLayout& layout);

}  // namespace cbd
