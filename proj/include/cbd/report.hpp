#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/system.hpp"

namespace cbd {

enum class Method { Auto, ClosedForm, Lp, Both };

std::optional<Method> parse_method(std::string_view text);

struct AnalysisOptions {
  CouplingConstraint constraint = CouplingConstraint::MaxEquality;
  Method method = Method::Auto;
  bool witness = false;
};

struct SystemSummary {
  std::size_t contents = 0;
  std::size_t contexts = 0;
  std::size_t variables = 0;
  std::optional<int> cyclic_rank;
  std::vector<Connection> connections;
  bool consistently_connected = true;
  double max_marginal_gap = 0.0;

  friend bool operator==(const SystemSummary&, const SystemSummary&) = default;
};

SystemSummary summarize(const System& sys);

/// One way of reaching a verdict: a closed-form criterion or the LP.
struct MethodResult {
  std::string method;
  std::string criterion;
  bool noncontextual = false;
  bool boundary = false;
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::vector<ContentGap> deltas;
  std::optional<double> max_constraint_violation;

  friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

MethodResult from_criterion(const CriterionResult& r);
MethodResult from_verdict(const FeasibilityVerdict& v);

/// Closed-form verdict for a cyclic system under either constraint. Under
/// EqualAlways an inconsistently connected system is contextual outright.
MethodResult closed_form(const System& sys, const CyclicLayout& layout,
                         CouplingConstraint c);

struct EngineSettings {
  double eps_prob = kProbTolerance;
  double eps_feas = kFeasTolerance;
  double boundary_floor = kBoundaryFloor;
  std::size_t max_variables = kMaxVariables;

  friend bool operator==(const EngineSettings&, const EngineSettings&) = default;
};

struct Report {
  SystemSummary system;
  std::string constraint;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<MethodResult> results;
  std::optional<double> qq_statistic;
  /// "noncontextual", "contextual", or "disagreement".
  std::string verdict;
  std::optional<CouplingWitness> witness;
  EngineSettings engine;

  bool agreement() const;
  friend bool operator==(const Report&, const Report&) = default;
};

/// Sets the verdict from the method results.
void settle_verdict(Report& report);

/// Throws UnsupportedError for closed-form analysis of a non-cyclic
/// system; propagates engine errors.
Report analyze(const System& sys, const AnalysisOptions& options);

/// Double-slit point: the specialised inequality, the rank-4 criterion on
/// the built system, and the LP.
Report analyze_double_slit(const DoubleSlitParams& params, bool witness);

/// Rank-2 question-order analysis. Throws UnsupportedError when the system
/// is not cyclic of rank 2.
Report analyze_question_order(const System& sys);

/// Uniform draw from the valid double-slit parameter region, rejecting the
/// measure-zero draws that break strict smallness after rounding.
DoubleSlitParams random_double_slit_params(std::mt19937_64& rng);

struct SweepSummary {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::size_t closed_form_noncontextual = 0;
  std::size_t closed_form_contextual = 0;
  std::size_t lp_noncontextual = 0;
  std::size_t lp_contextual = 0;
  std::size_t disagreements = 0;
  double min_margin = 0.0;
  std::string verdict;

  friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

SweepSummary sweep_double_slit(std::size_t draws, std::uint64_t seed);

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& doc);
std::string render_text(const Report& report);

nlohmann::ordered_json to_json(const SweepSummary& summary);
std::string render_text(const SweepSummary& summary);

}  // namespace cbd
