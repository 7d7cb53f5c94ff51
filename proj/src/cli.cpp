#include "cbd/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>

#include "CLI11.hpp"

#include "cbd/errors.hpp"
#include "cbd/report.hpp"
#include "cbd/system_io.hpp"

namespace cbd {

namespace {

bool verbose() {
  const char* level = std::getenv("CBD_LOG");
  return level != nullptr && *level != '\0' && std::string(level) != "0";
}

struct Output {
  std::string format = "text";

  void write(std::ostream& out, const Report& r) const {
    if (format == "json") out << to_json(r).dump(2) << "\n";
    else out << render_text(r);
  }
  void write(std::ostream& out, const SweepSummary& s) const {
    if (format == "json") out << to_json(s).dump(2) << "\n";
    else out << render_text(s);
  }
};

int exit_for(const std::string& verdict, std::ostream& err) {
  if (verdict == "noncontextual") return kExitNoncontextual;
  if (verdict == "contextual") return kExitContextual;
  err << "error: methods disagree on the verdict\n";
  return kExitInternalError;
}

// Maps library exceptions onto the exit-code contract.
int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: invalid input\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Contextuality analysis of systems of binary random variables"};
  app.name(args.empty() ? "cbd" : args.front());
  app.require_subcommand(1);

  Output output;
  const std::vector<std::string> formats{"text", "json"};

  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Decide whether a system file is contextual");
  std::string input;
  std::string constraint = "max-equality";
  std::string method = "auto";
  bool witness = false;
  analyze_cmd->add_option("--input", input, "System JSON file")->required();
  analyze_cmd->add_option("--constraint", constraint, "Coupling property")
      ->check(CLI::IsMember({"max-equality", "equal-always"}));
  analyze_cmd->add_option("--method", method, "Decision method")
      ->check(CLI::IsMember({"auto", "closed-form", "lp", "both"}));
  analyze_cmd->add_option("--output", output.format, "Report format")
      ->check(CLI::IsMember(formats));
  analyze_cmd->add_flag("--witness", witness, "Include the coupling witness");

  auto* slit_cmd = app.add_subcommand(
      "double-slit", "Analyze the double-slit system for given parameters");
  DoubleSlitParams params;
  std::size_t sweep_draws = 0;
  std::uint64_t seed = 42;
  slit_cmd->add_option("--p", params.p, "Pr[left slit | right closed]");
  slit_cmd->add_option("--q", params.q, "Pr[right slit | left closed]");
  slit_cmd->add_option("--pp", params.p_prime, "Both open: Pr[left only]");
  slit_cmd->add_option("--qp", params.q_prime, "Both open: Pr[right only]");
  slit_cmd->add_option("--rp", params.r_prime, "Both open: Pr[both]");
  auto* sweep_opt = slit_cmd->add_option(
      "--sweep", sweep_draws, "Analyze N random parameter sets");
  slit_cmd->add_option("--seed", seed, "Seed for --sweep");
  slit_cmd->add_option("--output", output.format, "Report format")
      ->check(CLI::IsMember(formats));
  slit_cmd->add_flag("--witness", witness, "Include the coupling witness");

  auto* qq_cmd = app.add_subcommand(
      "qq", "QQ statistic and rank-2 criterion for a question-order system");
  qq_cmd->add_option("--input", input, "System JSON file")->required();
  qq_cmd->add_option("--output", output.format, "Report format")
      ->check(CLI::IsMember(formats));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitNoncontextual : kExitInputError;
  }

  const auto started = std::chrono::steady_clock::now();
  auto log_done = [&](const char* what) {
    if (!verbose()) return;
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - started;
    err << "[cbd] " << what << " finished in " << dt.count() << " s\n";
  };

  if (*analyze_cmd) {
    return guarded([&] {
      AnalysisOptions opts;
      opts.constraint = *parse_constraint(constraint);
      opts.method = *parse_method(method);
      opts.witness = witness;
      const auto sys = parse_system_file(input);
      if (verbose()) {
        err << "[cbd] loaded " << sys.contexts().size() << " contexts, "
            << sys.variable_count() << " variables from " << input << "\n";
      }
      const auto report = analyze(sys, opts);
      output.write(out, report);
      log_done("analyze");
      return exit_for(report.verdict, err);
    }, err);
  }

  if (*slit_cmd) {
    return guarded([&] {
      if (sweep_opt->count() > 0) {
        const auto summary = sweep_double_slit(sweep_draws, seed);
        output.write(out, summary);
        log_done("double-slit sweep");
        return exit_for(summary.verdict, err);
      }
      const auto report = analyze_double_slit(params, witness);
      output.write(out, report);
      log_done("double-slit");
      return exit_for(report.verdict, err);
    }, err);
  }

  return guarded([&] {
    const auto report = analyze_question_order(parse_system_file(input));
    output.write(out, report);
    log_done("qq");
    return exit_for(report.verdict, err);
  }, err);
}

}  // namespace cbd
