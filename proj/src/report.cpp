#include "cbd/report.hpp"

#include <algorithm>
#include <sstream>

#include "cbd/errors.hpp"
#include "cbd/format.hpp"

namespace cbd {

using nlohmann::ordered_json;

std::optional<Method> parse_method(std::string_view text) {
  if (text == "auto") return Method::Auto;
  if (text == "closed-form") return Method::ClosedForm;
  if (text == "lp") return Method::Lp;
  if (text == "both") return Method::Both;
  return std::nullopt;
}

SystemSummary summarize(const System& sys) {
  SystemSummary s;
  s.contents = sys.contents().size();
  s.contexts = sys.contexts().size();
  s.variables = sys.variable_count();
  if (auto layout = detect_cyclic(sys)) s.cyclic_rank = layout->rank;
  s.connections = connections(sys);
  const auto report = consistency(sys);
  s.consistently_connected = report.consistently_connected;
  s.max_marginal_gap = report.max_marginal_gap;
  return s;
}

MethodResult from_criterion(const CriterionResult& r) {
  MethodResult m;
  m.method = "closed-form";
  m.criterion = r.criterion;
  m.noncontextual = r.noncontextual;
  m.boundary = r.boundary;
  m.lhs = r.lhs;
  m.rhs = r.rhs;
  m.deltas = r.deltas;
  return m;
}

MethodResult from_verdict(const FeasibilityVerdict& v) {
  MethodResult m;
  m.method = "lp";
  m.criterion = "coupling-lp";
  m.noncontextual = v.feasible;
  m.boundary = v.boundary;
  m.max_constraint_violation = v.max_constraint_violation;
  return m;
}

MethodResult closed_form(const System& sys, const CyclicLayout& layout,
                         CouplingConstraint c) {
  if (c == CouplingConstraint::EqualAlways) {
    const auto report = consistency(sys);
    if (!report.consistently_connected) {
      // Pr[equal] = 1 forces identical marginals within every connection.
      MethodResult m;
      m.method = "closed-form";
      m.criterion = "consistent-connectedness";
      m.lhs = report.max_marginal_gap;
      m.rhs = 0.0;
      return m;
    }
    if (layout.rank == 4) return from_criterion(chsh_fine(sys, layout));
  }
  return from_criterion(layout.rank == 4 ? cbd_cyclic4(sys, layout)
                                         : cbd_cyclic2(sys, layout));
}

bool Report::agreement() const {
  return std::all_of(results.begin(), results.end(), [&](const auto& r) {
    return r.noncontextual == results.front().noncontextual;
  });
}

void settle_verdict(Report& report) {
  if (report.results.empty()) {
    report.verdict.clear();
  } else if (!report.agreement()) {
    report.verdict = "disagreement";
  } else {
    report.verdict =
        report.results.front().noncontextual ? "noncontextual" : "contextual";
  }
}

Report analyze(const System& sys, const AnalysisOptions& options) {
  Report r;
  r.system = summarize(sys);
  r.constraint = std::string(to_string(options.constraint));

  const auto layout = detect_cyclic(sys);
  if (layout && layout->rank == 2) r.qq_statistic = qq_statistic(sys, *layout);

  const Method m = options.method;
  const bool run_closed = m == Method::ClosedForm || m == Method::Both ||
                          (m == Method::Auto && layout);
  const bool run_lp =
      m == Method::Lp || m == Method::Both || (m == Method::Auto && !layout);
  if (run_closed && !layout) {
    throw UnsupportedError(
        "closed-form criteria need a cyclic system of rank 2 or 4");
  }

  if (run_closed) r.results.push_back(closed_form(sys, *layout, options.constraint));
  std::optional<FeasibilityVerdict> lp;
  if (run_lp) {
    lp = decide(sys, options.constraint);
    r.results.push_back(from_verdict(*lp));
  }
  if (options.witness) {
    if (!lp) lp = decide(sys, options.constraint);
    r.witness = lp->witness;
  }
  settle_verdict(r);
  return r;
}

Report analyze_double_slit(const DoubleSlitParams& params, bool witness) {
  const auto sys = build_double_slit(params);
  const auto layout = detect_cyclic(sys);
  if (!layout || layout->rank != 4) {
    throw SolverError("double-slit system was not recognized as cyclic rank 4");
  }

  Report r;
  r.system = summarize(sys);
  r.constraint = std::string(to_string(CouplingConstraint::MaxEquality));
  r.parameters = {{"p", params.p},
                  {"q", params.q},
                  {"p_prime", params.p_prime},
                  {"q_prime", params.q_prime},
                  {"r_prime", params.r_prime}};
  r.results.push_back(from_criterion(check_double_slit(params)));
  r.results.push_back(from_criterion(cbd_cyclic4(sys, *layout)));
  const auto lp = decide(sys, CouplingConstraint::MaxEquality);
  r.results.push_back(from_verdict(lp));
  if (witness) r.witness = lp.witness;
  settle_verdict(r);
  return r;
}

Report analyze_question_order(const System& sys) {
  const auto layout = detect_cyclic(sys);
  if (!layout || layout->rank != 2) {
    throw UnsupportedError("question-order analysis needs a cyclic system of "
                           "rank 2 (two contents asked in two orders)");
  }
  Report r;
  r.system = summarize(sys);
  r.constraint = std::string(to_string(CouplingConstraint::MaxEquality));
  r.qq_statistic = qq_statistic(sys, *layout);
  r.results.push_back(from_criterion(cbd_cyclic2(sys, *layout)));
  settle_verdict(r);
  return r;
}

DoubleSlitParams random_double_slit_params(std::mt19937_64& rng) {
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (;;) {
    DoubleSlitParams p;
    p.p = 0.5 * uniform();
    p.q = 0.5 * uniform();
    p.p_prime = 0.5 * uniform();
    p.q_prime = (0.5 - p.p_prime) * uniform();
    p.r_prime = (1.0 - p.p_prime - p.q_prime) * uniform();
    if (validate_double_slit(p).empty()) return p;
  }
}

SweepSummary sweep_double_slit(std::size_t draws, std::uint64_t seed) {
  SweepSummary s;
  s.draws = draws;
  s.seed = seed;
  s.min_margin = INFINITY;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto params = random_double_slit_params(rng);
    const auto closed = check_double_slit(params);
    const auto lp = decide(build_double_slit(params),
                           CouplingConstraint::MaxEquality);
    (closed.noncontextual ? s.closed_form_noncontextual
                          : s.closed_form_contextual)++;
    (lp.feasible ? s.lp_noncontextual : s.lp_contextual)++;
    if (closed.noncontextual != lp.feasible) ++s.disagreements;
    s.min_margin = std::min(s.min_margin, closed.margin());
  }
  if (draws == 0) s.min_margin = 0.0;
  if (s.disagreements > 0) s.verdict = "disagreement";
  else if (s.closed_form_contextual > 0) s.verdict = "contextual";
  else s.verdict = "noncontextual";
  return s;
}

// JSON

namespace {

ordered_json method_to_json(const MethodResult& m) {
  ordered_json j;
  j["method"] = m.method;
  j["criterion"] = m.criterion;
  if (m.lhs) j["lhs"] = *m.lhs;
  if (m.rhs) j["rhs"] = *m.rhs;
  if (m.lhs && m.rhs) j["margin"] = *m.rhs - *m.lhs;
  if (!m.deltas.empty()) {
    j["deltas"] = ordered_json::array();
    for (const auto& d : m.deltas)
      j["deltas"].push_back({{"content", d.content}, {"gap", d.gap}});
  }
  if (m.max_constraint_violation)
    j["max_constraint_violation"] = *m.max_constraint_violation;
  j["noncontextual"] = m.noncontextual;
  j["boundary"] = m.boundary;
  return j;
}

MethodResult method_from_json(const ordered_json& j) {
  MethodResult m;
  m.method = j.at("method").get<std::string>();
  m.criterion = j.at("criterion").get<std::string>();
  if (j.contains("lhs")) m.lhs = j.at("lhs").get<double>();
  if (j.contains("rhs")) m.rhs = j.at("rhs").get<double>();
  if (j.contains("deltas")) {
    for (const auto& d : j.at("deltas"))
      m.deltas.push_back({d.at("content").get<std::string>(),
                          d.at("gap").get<double>()});
  }
  if (j.contains("max_constraint_violation"))
    m.max_constraint_violation = j.at("max_constraint_violation").get<double>();
  m.noncontextual = j.at("noncontextual").get<bool>();
  m.boundary = j.at("boundary").get<bool>();
  return m;
}

}  // namespace

ordered_json to_json(const Report& report) {
  ordered_json j;
  const auto& s = report.system;
  ordered_json sys;
  sys["contents"] = s.contents;
  sys["contexts"] = s.contexts;
  sys["variables"] = s.variables;
  sys["cyclic_rank"] = s.cyclic_rank ? ordered_json(*s.cyclic_rank) : ordered_json();
  sys["connections"] = ordered_json::array();
  for (const auto& conn : s.connections) {
    ordered_json members = ordered_json::array();
    for (const auto& m : conn.members)
      members.push_back({{"context", m.context}, {"p_plus", m.p_plus}});
    sys["connections"].push_back({{"content", conn.content}, {"members", members}});
  }
  sys["consistency"] = {{"consistently_connected", s.consistently_connected},
                        {"max_marginal_gap", s.max_marginal_gap}};
  j["system"] = std::move(sys);
  j["constraint"] = report.constraint;
  if (!report.parameters.empty()) {
    ordered_json params = ordered_json::object();
    for (const auto& [name, value] : report.parameters) params[name] = value;
    j["parameters"] = std::move(params);
  }
  j["results"] = ordered_json::array();
  for (const auto& m : report.results) j["results"].push_back(method_to_json(m));
  if (report.qq_statistic) j["qq_statistic"] = *report.qq_statistic;
  j["verdict"] = report.verdict;
  if (report.witness) {
    ordered_json vars = ordered_json::array();
    for (const auto& v : report.witness->variables)
      vars.push_back({{"content", v.content}, {"context", v.context}});
    j["witness"] = {{"variables", vars}, {"probs", report.witness->probs}};
  }
  j["engine"] = {{"eps_prob", report.engine.eps_prob},
                 {"eps_feas", report.engine.eps_feas},
                 {"boundary_floor", report.engine.boundary_floor},
                 {"max_variables", report.engine.max_variables}};
  return j;
}

Report report_from_json(const ordered_json& j) {
  Report r;
  const auto& sys = j.at("system");
  r.system.contents = sys.at("contents").get<std::size_t>();
  r.system.contexts = sys.at("contexts").get<std::size_t>();
  r.system.variables = sys.at("variables").get<std::size_t>();
  if (!sys.at("cyclic_rank").is_null())
    r.system.cyclic_rank = sys.at("cyclic_rank").get<int>();
  for (const auto& conn : sys.at("connections")) {
    Connection c{conn.at("content").get<std::string>(), {}};
    for (const auto& m : conn.at("members"))
      c.members.push_back({m.at("context").get<std::string>(),
                           m.at("p_plus").get<double>()});
    r.system.connections.push_back(std::move(c));
  }
  const auto& cons = sys.at("consistency");
  r.system.consistently_connected = cons.at("consistently_connected").get<bool>();
  r.system.max_marginal_gap = cons.at("max_marginal_gap").get<double>();
  r.constraint = j.at("constraint").get<std::string>();
  if (j.contains("parameters")) {
    for (const auto& [name, value] : j.at("parameters").items())
      r.parameters.emplace_back(name, value.get<double>());
  }
  for (const auto& m : j.at("results")) r.results.push_back(method_from_json(m));
  if (j.contains("qq_statistic")) r.qq_statistic = j.at("qq_statistic").get<double>();
  r.verdict = j.at("verdict").get<std::string>();
  if (j.contains("witness")) {
    CouplingWitness w;
    for (const auto& v : j.at("witness").at("variables"))
      w.variables.push_back({v.at("content").get<std::string>(),
                             v.at("context").get<std::string>()});
    w.probs = j.at("witness").at("probs").get<std::vector<double>>();
    r.witness = std::move(w);
  }
  const auto& e = j.at("engine");
  r.engine.eps_prob = e.at("eps_prob").get<double>();
  r.engine.eps_feas = e.at("eps_feas").get<double>();
  r.engine.boundary_floor = e.at("boundary_floor").get<double>();
  r.engine.max_variables = e.at("max_variables").get<std::size_t>();
  return r;
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  const auto& s = report.system;
  out << "system: " << s.contents << " contents, " << s.contexts
      << " contexts, " << s.variables << " variables";
  if (s.cyclic_rank) out << ", cyclic rank " << *s.cyclic_rank;
  out << "\n";
  for (const auto& [name, value] : report.parameters) {
    out << "parameter " << name << " = " << format_number(value) << "\n";
  }
  out << "connections:\n";
  for (const auto& conn : s.connections) {
    out << "  " << conn.content << ":";
    for (const auto& m : conn.members)
      out << " " << m.context << " Pr[+1]=" << format_number(m.p_plus);
    out << "\n";
  }
  out << "consistency: "
      << (s.consistently_connected ? "consistently connected"
                                   : "inconsistently connected")
      << " (max marginal gap " << format_number(s.max_marginal_gap) << ")\n";
  out << "constraint: " << report.constraint << "\n";
  for (const auto& m : report.results) {
    out << m.method << " " << m.criterion << ":";
    if (m.lhs) out << " lhs " << format_number(*m.lhs);
    if (m.rhs) out << " rhs " << format_number(*m.rhs);
    if (m.lhs && m.rhs) out << " margin " << format_number(*m.rhs - *m.lhs);
    if (m.max_constraint_violation)
      out << " max constraint violation "
          << format_number(*m.max_constraint_violation);
    out << " -> " << (m.noncontextual ? "noncontextual" : "contextual");
    if (m.boundary) out << " (boundary)";
    out << "\n";
    if (!m.deltas.empty()) {
      out << "  deltas:";
      for (const auto& d : m.deltas)
        out << " " << d.content << "=" << format_number(d.gap);
      out << "\n";
    }
  }
  if (report.qq_statistic)
    out << "qq statistic: " << format_number(*report.qq_statistic) << "\n";
  out << "verdict: " << report.verdict << "\n";
  if (report.witness) {
    const auto& w = *report.witness;
    out << "witness over " << w.variables.size() << " variables:";
    for (const auto& v : w.variables)
      out << " (" << v.content << "," << v.context << ")";
    out << "\n";
    for (std::size_t i = 0; i < w.probs.size(); ++i) {
      if (w.probs[i] == 0.0) continue;
      out << "  ";
      for (std::size_t b = 0; b < w.variables.size(); ++b)
        out << (((i >> b) & 1U) ? '+' : '-');
      out << " " << format_number(w.probs[i]) << "\n";
    }
  }
  out << "engine: eps_prob " << format_number(report.engine.eps_prob)
      << ", eps_feas " << format_number(report.engine.eps_feas)
      << ", boundary_floor " << format_number(report.engine.boundary_floor)
      << ", max_variables " << report.engine.max_variables << "\n";
  return out.str();
}

ordered_json to_json(const SweepSummary& summary) {
  ordered_json j;
  j["sweep"] = {{"draws", summary.draws}, {"seed", summary.seed}};
  j["closed_form"] = {{"noncontextual", summary.closed_form_noncontextual},
                      {"contextual", summary.closed_form_contextual}};
  j["lp"] = {{"noncontextual", summary.lp_noncontextual},
             {"contextual", summary.lp_contextual}};
  j["disagreements"] = summary.disagreements;
  j["min_margin"] = summary.min_margin;
  j["verdict"] = summary.verdict;
  return j;
}

std::string render_text(const SweepSummary& summary) {
  std::ostringstream out;
  out << "sweep: " << summary.draws << " draws, seed " << summary.seed << "\n"
      << "closed-form: " << summary.closed_form_noncontextual << "/"
      << summary.draws << " noncontextual, " << summary.closed_form_contextual
      << " contextual\n"
      << "lp: " << summary.lp_noncontextual << "/" << summary.draws
      << " noncontextual, " << summary.lp_contextual << " contextual\n"
      << "disagreements: " << summary.disagreements << "\n"
      << "min margin: " << format_number(summary.min_margin) << "\n"
      << "verdict: " << summary.verdict << "\n";
  return out.str();
}

}  // namespace cbd
