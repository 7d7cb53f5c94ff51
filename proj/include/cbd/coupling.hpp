#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbd/simplex.hpp"
#include "cbd/system.hpp"

namespace cbd {

/// Largest number of (content, context) variables the dense engine accepts.
inline constexpr std::size_t kMaxVariables = 20;

/// Slack below this is solver noise; above it and up to 10 * kFeasTolerance
/// a verdict is re-checked at tight tolerances.
inline constexpr double kBoundaryFloor = 1e-10;

/// Property C imposed on every pair of variables sharing a content.
enum class CouplingConstraint {
  /// Equal with probability 1 (reduced coupling).
  EqualAlways,
  /// Equal with the largest probability their marginals allow.
  MaxEquality,
};

std::string_view to_string(CouplingConstraint c);
std::optional<CouplingConstraint> parse_constraint(std::string_view text);

/// Pr[X = Y] of a maximal coupling of binary X, Y with Pr[X=+1] = a and
/// Pr[Y=+1] = b: min(a, b) + min(1-a, 1-b) = 1 - |a - b|.
double max_equality_probability(double a, double b);

struct CouplingVariable {
  std::string content;
  std::string context;

  friend bool operator==(const CouplingVariable&,
                         const CouplingVariable&) = default;
};

/// Joint distribution over all variables; bit i of an assignment index is
/// variables[i] (1 = +1, 0 = -1).
struct CouplingWitness {
  std::vector<CouplingVariable> variables;
  std::vector<double> probs;

  friend bool operator==(const CouplingWitness&,
                         const CouplingWitness&) = default;
};

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<CouplingWitness> witness;
  /// Feasible: the witness's largest constraint violation. Infeasible: the
  /// minimized total slack ||A x - b||_1.
  double max_constraint_violation = 0.0;
  /// The minimized slack stayed in the ambiguous band
  /// (kBoundaryFloor, 10 * kFeasTolerance] after a re-solve at tight
  /// tolerances.
  bool boundary = false;
};

/// Linear feasibility problem whose solutions are exactly the C-couplings.
///
/// Unknowns are probabilities of the 2^m joint assignments. Variables are
/// ordered context by context (contents in context order), so each context
/// occupies a contiguous run of bits. Rows, in order: one per bunch entry
/// (context by context), one per two-member connection fixing Pr[equal],
/// and the total-mass row.
class FeasibilityProblem final : public lp::ColumnMatrix {
 public:
  struct ContextBlock {
    std::size_t bit_offset;
    std::size_t width;
    std::size_t row_offset;
  };
  struct EqualityRow {
    std::string content;
    std::size_t bit_a;
    std::size_t bit_b;
    double target;
  };

  std::size_t rows() const override { return rhs_.size(); }
  std::size_t cols() const override { return std::size_t{1} << variables_.size(); }
  void add_column(std::size_t j, double scale,
                  std::span<double> out) const override;
  double dot_column(std::size_t j, std::span<const double> y) const override;

  const std::vector<CouplingVariable>& variables() const { return variables_; }
  const std::vector<ContextBlock>& blocks() const { return blocks_; }
  const std::vector<EqualityRow>& equalities() const { return equalities_; }
  const std::vector<double>& rhs() const { return rhs_; }
  CouplingConstraint constraint() const { return constraint_; }

  /// A x - b for a dense x of length cols().
  std::vector<double> residual(std::span<const double> x) const;

 private:
  friend FeasibilityProblem build_feasibility_problem(const System&,
                                                      CouplingConstraint,
                                                      std::size_t);
  FeasibilityProblem() = default;

  CouplingConstraint constraint_ = CouplingConstraint::MaxEquality;
  std::vector<CouplingVariable> variables_;
  std::vector<ContextBlock> blocks_;
  std::vector<EqualityRow> equalities_;
  std::vector<double> rhs_;
};

/// Throws UnsupportedError when a content appears in more than two contexts
/// or the system has more than max_variables variables.
FeasibilityProblem build_feasibility_problem(
    const System& sys, CouplingConstraint c,
    std::size_t max_variables = kMaxVariables);

/// Largest violation of the witness invariants: negative mass, total mass,
/// each bunch entry reproduced by marginalization, each connection pair's
/// Pr[equal] against its target. Throws std::invalid_argument when the
/// witness does not cover the system's variables.
double witness_violation(const System& sys, const CouplingWitness& witness,
                         CouplingConstraint c);

struct DecideOptions {
  std::size_t max_variables = kMaxVariables;
  lp::SimplexOptions simplex{};
};

/// Decides whether a C-coupling exists. Feasible verdicts carry a witness
/// that has been validated with witness_violation. Throws SolverError when
/// the LP backend cannot reach a verdict.
FeasibilityVerdict decide(const System& sys, CouplingConstraint c,
                          const DecideOptions& options = {});

}  // namespace cbd
