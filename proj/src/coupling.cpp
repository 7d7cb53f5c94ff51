#include "cbd/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cbd/errors.hpp"

namespace cbd {

std::string_view to_string(CouplingConstraint c) {
  return c == CouplingConstraint::EqualAlways ? "equal-always" : "max-equality";
}

std::optional<CouplingConstraint> parse_constraint(std::string_view text) {
  if (text == "equal-always") return CouplingConstraint::EqualAlways;
  if (text == "max-equality") return CouplingConstraint::MaxEquality;
  return std::nullopt;
}

double max_equality_probability(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("marginal probabilities must lie in [0, 1]");
  }
  return 1.0 - std::abs(a - b);
}

namespace {

double equality_target(CouplingConstraint c, double a, double b) {
  return c == CouplingConstraint::EqualAlways ? 1.0
                                              : max_equality_probability(a, b);
}

bool same_bit(std::size_t j, std::size_t a, std::size_t b) {
  return ((j >> a) & 1U) == ((j >> b) & 1U);
}

}  // namespace

void FeasibilityProblem::add_column(std::size_t j, double scale,
                                    std::span<double> out) const {
  for (const auto& blk : blocks_) {
    const std::size_t mask = (std::size_t{1} << blk.width) - 1;
    out[blk.row_offset + ((j >> blk.bit_offset) & mask)] += scale;
  }
  const std::size_t eq_offset = rhs_.size() - 1 - equalities_.size();
  for (std::size_t e = 0; e < equalities_.size(); ++e) {
    if (same_bit(j, equalities_[e].bit_a, equalities_[e].bit_b))
      out[eq_offset + e] += scale;
  }
  out[rhs_.size() - 1] += scale;
}

double FeasibilityProblem::dot_column(std::size_t j,
                                      std::span<const double> y) const {
  double s = 0.0;
  for (const auto& blk : blocks_) {
    const std::size_t mask = (std::size_t{1} << blk.width) - 1;
    s += y[blk.row_offset + ((j >> blk.bit_offset) & mask)];
  }
  const std::size_t eq_offset = rhs_.size() - 1 - equalities_.size();
  for (std::size_t e = 0; e < equalities_.size(); ++e) {
    if (same_bit(j, equalities_[e].bit_a, equalities_[e].bit_b))
      s += y[eq_offset + e];
  }
  return s + y[rhs_.size() - 1];
}

std::vector<double> FeasibilityProblem::residual(
    std::span<const double> x) const {
  std::vector<double> r(rows(), 0.0);
  for (std::size_t j = 0; j < cols(); ++j) {
    if (x[j] != 0.0) add_column(j, x[j], r);
  }
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs_[i];
  return r;
}

FeasibilityProblem build_feasibility_problem(const System& sys,
                                             CouplingConstraint c,
                                             std::size_t max_variables) {
  const auto conns = connections(sys);
  for (const auto& conn : conns) {
    if (conn.members.size() > 2) {
      throw UnsupportedError(
          "unsupported connection size: content '" + conn.content +
          "' appears in " + std::to_string(conn.members.size()) +
          " contexts (at most 2 supported)");
    }
  }
  const std::size_t m = sys.variable_count();
  if (m > max_variables) {
    throw UnsupportedError("system too large: " + std::to_string(m) +
                           " variables exceed the limit of " +
                           std::to_string(max_variables));
  }

  FeasibilityProblem p;
  p.constraint_ = c;
  std::map<std::pair<std::string, std::string>, std::size_t> bit_of;
  std::size_t row = 0;
  for (const auto& bunch : sys.bunches()) {
    p.blocks_.push_back({p.variables_.size(), bunch.contents.size(), row});
    for (const auto& content : bunch.contents) {
      bit_of[{content, bunch.context}] = p.variables_.size();
      p.variables_.push_back({content, bunch.context});
    }
    p.rhs_.insert(p.rhs_.end(), bunch.probs.begin(), bunch.probs.end());
    row += bunch.probs.size();
  }
  for (const auto& conn : conns) {
    if (conn.members.size() != 2) continue;
    const auto& [first, second] = std::tie(conn.members[0], conn.members[1]);
    const double target = equality_target(c, first.p_plus, second.p_plus);
    p.equalities_.push_back({conn.content, bit_of.at({conn.content, first.context}),
                             bit_of.at({conn.content, second.context}), target});
    p.rhs_.push_back(target);
  }
  p.rhs_.push_back(1.0);
  return p;
}

double witness_violation(const System& sys, const CouplingWitness& witness,
                         CouplingConstraint c) {
  const std::size_t m = witness.variables.size();
  if (m >= 8 * sizeof(std::size_t) ||
      witness.probs.size() != (std::size_t{1} << m)) {
    throw std::invalid_argument("witness probs length does not match its "
                                "variable count");
  }
  auto bit_for = [&](const std::string& content, const std::string& context) {
    for (std::size_t i = 0; i < m; ++i) {
      if (witness.variables[i].content == content &&
          witness.variables[i].context == context)
        return i;
    }
    throw std::invalid_argument("witness lacks variable (" + content + ", " +
                                context + ")");
  };

  double worst = 0.0;
  double total = 0.0;
  for (double p : witness.probs) {
    worst = std::max(worst, -p);
    total += p;
  }
  worst = std::max(worst, std::abs(total - 1.0));

  for (const auto& bunch : sys.bunches()) {
    std::vector<std::size_t> bits;
    for (const auto& content : bunch.contents)
      bits.push_back(bit_for(content, bunch.context));
    std::vector<double> projected(bunch.probs.size(), 0.0);
    for (std::size_t a = 0; a < witness.probs.size(); ++a) {
      std::size_t sub = 0;
      for (std::size_t j = 0; j < bits.size(); ++j)
        sub |= ((a >> bits[j]) & 1U) << j;
      projected[sub] += witness.probs[a];
    }
    for (std::size_t i = 0; i < projected.size(); ++i)
      worst = std::max(worst, std::abs(projected[i] - bunch.probs[i]));
  }

  for (const auto& conn : connections(sys)) {
    if (conn.members.size() != 2) continue;
    const std::size_t a = bit_for(conn.content, conn.members[0].context);
    const std::size_t b = bit_for(conn.content, conn.members[1].context);
    double equal = 0.0;
    for (std::size_t j = 0; j < witness.probs.size(); ++j) {
      if (same_bit(j, a, b)) equal += witness.probs[j];
    }
    const double target =
        equality_target(c, conn.members[0].p_plus, conn.members[1].p_plus);
    worst = std::max(worst, std::abs(equal - target));
  }
  return worst;
}

FeasibilityVerdict decide(const System& sys, CouplingConstraint c,
                          const DecideOptions& options) {
  const auto problem = build_feasibility_problem(sys, c, options.max_variables);

  auto solve = [&](const lp::SimplexOptions& opt) {
    auto res = lp::minimize_infeasibility(problem, problem.rhs(), opt);
    if (res.status != lp::SolveStatus::Optimal) {
      throw SolverError(res.status == lp::SolveStatus::IterationLimit
                            ? "LP iteration limit reached"
                            : "LP basis became numerically singular");
    }
    return res;
  };
  auto ambiguous = [](double slack) {
    return slack > kBoundaryFloor && slack <= 10 * kFeasTolerance;
  };

  auto res = solve(options.simplex);
  bool tightened = false;
  if (ambiguous(res.infeasibility)) {
    res = solve(lp::SimplexOptions::tight());
    tightened = true;
  }

  FeasibilityVerdict verdict;
  verdict.boundary = tightened && ambiguous(res.infeasibility);
  verdict.feasible = res.infeasibility <= kFeasTolerance;
  if (!verdict.feasible) {
    verdict.max_constraint_violation = res.infeasibility;
    return verdict;
  }

  CouplingWitness witness{problem.variables(), std::move(res.x)};
  double violation = witness_violation(sys, witness, c);
  if (violation > kFeasTolerance && !tightened) {
    auto retry = solve(lp::SimplexOptions::tight());
    if (retry.infeasibility <= kFeasTolerance) {
      witness.probs = std::move(retry.x);
      violation = witness_violation(sys, witness, c);
    }
  }
  if (violation > kFeasTolerance) {
    throw SolverError("LP solution failed witness validation (violation " +
                      std::to_string(violation) + ")");
  }
  verdict.max_constraint_violation = violation;
  verdict.witness = std::move(witness);
  return verdict;
}

}  // namespace cbd
