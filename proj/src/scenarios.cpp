#include "cbd/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "cbd/errors.hpp"
#include "cbd/format.hpp"

namespace cbd {

std::vector<std::string> validate_double_slit(const DoubleSlitParams& params) {
  std::vector<std::string> out;
  const std::array<std::pair<const char*, double>, 5> named{{
      {"p", params.p},
      {"q", params.q},
      {"p'", params.p_prime},
      {"q'", params.q_prime},
      {"r'", params.r_prime},
  }};
  for (const auto& [name, v] : named) {
    if (!std::isfinite(v) || v < 0.0)
      out.push_back(std::string(name) + " = " + format_number(v) +
                    " must be a nonnegative number");
  }
  if (params.r_prime + params.p_prime + params.q_prime > 1.0)
    out.push_back("r' + p' + q' exceeds 1");
  if (!(1.0 - 2.0 * params.p > 0.0)) out.push_back("1 - 2p must be positive");
  if (!(1.0 - 2.0 * params.q > 0.0)) out.push_back("1 - 2q must be positive");
  if (!(1.0 - 2.0 * params.p_prime - 2.0 * params.q_prime > 0.0))
    out.push_back("1 - 2p' - 2q' must be positive");
  return out;
}

System build_double_slit(const DoubleSlitParams& params) {
  auto violations = validate_double_slit(params);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  using namespace double_slit;
  const double p = params.p;
  const double q = params.q;
  const double pp = params.p_prime;
  const double qp = params.q_prime;
  const double rp = params.r_prime;

  // Each context lists the row variable of its table first, so index 1 is
  // (row Yes, column No) and index 2 is (row No, column Yes).
  SystemDescription desc;
  desc.contents = {
      {kLeftOpen, "reached the detector through the open left slit"},
      {kRightOpen, "reached the detector through the open right slit"},
      {kLeftClosed, "reached the detector through the closed left slit"},
      {kRightClosed, "reached the detector through the closed right slit"},
  };
  desc.contexts = {
      {kBothOpen, {kLeftOpen, kRightOpen}, {1.0 - rp - pp - qp, pp, qp, rp}},
      {kLeftClosedRightOpen, {kLeftClosed, kRightOpen}, {1.0 - q, 0.0, q, 0.0}},
      {kBothClosed, {kLeftClosed, kRightClosed}, {1.0, 0.0, 0.0, 0.0}},
      {kLeftOpenRightClosed, {kLeftOpen, kRightClosed}, {1.0 - p, p, 0.0, 0.0}},
  };
  return System::build(std::move(desc));
}

CriterionResult check_double_slit(const DoubleSlitParams& params) {
  auto violations = validate_double_slit(params);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  const double p = params.p;
  const double q = params.q;
  const std::array<double, 4> s{1.0 - 2.0 * p, 1.0, 1.0 - 2.0 * q,
                                1.0 - 2.0 * params.p_prime -
                                    2.0 * params.q_prime};
  const double lhs =
      (s[0] + s[1] + s[2] + s[3]) - 2.0 * *std::min_element(s.begin(), s.end());

  using namespace double_slit;
  std::vector<ContentGap> deltas{
      {kLeftOpen, 2.0 * std::abs(p - params.p_prime - params.r_prime)},
      {kRightOpen, 2.0 * std::abs(q - params.q_prime - params.r_prime)},
      {kLeftClosed, 0.0},
      {kRightClosed, 0.0},
  };
  const double rhs = 2.0 + deltas[0].gap + deltas[1].gap;
  return make_verdict("double-slit", lhs, rhs, std::move(deltas));
}

System build_question_order(const QuestionOrderParams& params) {
  using namespace question_order;
  SystemDescription desc;
  desc.contents = {{kFirst, "question A"}, {kSecond, "question B"}};
  desc.contexts = {
      {kOrderAB, {kFirst, kSecond}, params.joint_ab},
      {kOrderBA, {kFirst, kSecond}, params.joint_ba},
  };
  return System::build(std::move(desc));
}

std::array<double, 4> bunch_from_moments(double mean_a, double mean_b,
                                         double product) {
  std::array<double, 4> probs{};
  std::vector<std::string> violations;
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const double x = (idx & 1U) ? 1.0 : -1.0;
    const double y = (idx & 2U) ? 1.0 : -1.0;
    const double pr = (1.0 + x * mean_a + y * mean_b + x * y * product) / 4.0;
    if (pr < -kProbTolerance) {
      violations.push_back("moments (<a>, <b>, <ab>) = (" +
                           format_number(mean_a) + ", " +
                           format_number(mean_b) + ", " +
                           format_number(product) + ") imply Pr[" +
                           std::to_string(idx) + "] = " + format_number(pr));
    }
    probs[idx] = std::max(pr, 0.0);
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return probs;
}

System build_bell(const std::array<double, 4>& product_expectations,
                  const std::array<double, 8>& marginals) {
  SystemDescription desc;
  for (int i = 1; i <= 4; ++i) {
    desc.contents.push_back({"q" + std::to_string(i), ""});
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const auto probs = bunch_from_moments(marginals[2 * j], marginals[2 * j + 1],
                                          product_expectations[j]);
    desc.contexts.push_back({"c" + std::to_string(j + 1),
                             {desc.contents[j].id, desc.contents[(j + 1) % 4].id},
                             {probs.begin(), probs.end()}});
  }
  return System::build(std::move(desc));
}

}  // namespace cbd
