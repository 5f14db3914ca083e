#include "commands.hpp"

#include <compcomp/errors.hpp>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

using namespace compcomp::cli;

namespace {

void add_spec_options(CLI::App *cmd, RunConfig &rc) {
  cmd->add_option("--spec", rc.spec, "Problem-spec JSON file");
  cmd->add_option("--A", rc.A_path, "Design matrix file (.mtx or CSV), overrides the spec");
  cmd->add_option("--b", rc.b_path, "Right-hand side vector file, overrides the spec");
  cmd->add_option("--p", rc.p, "Space exponent p, overrides the spec");
  cmd->add_option("--lambda", rc.lambda, "Regularization weight, overrides the spec");
  cmd->add_option("--emit-spec", rc.emit_spec, "Write the parsed spec back out");
}

void add_run_options(CLI::App *cmd, RunConfig &rc) {
  cmd->add_option("--epsilon", rc.epsilon, "Target accuracy")->capture_default_str();
  cmd->add_option("--max-iters", rc.max_iters, "Iteration budget")->capture_default_str();
  cmd->add_option("--seed", rc.seed, "Seed for randomized diagnostics")->capture_default_str();
  cmd->add_option("--report", rc.report, "JSON report path");
}

void add_hard_options(CLI::App *cmd, RunConfig &rc) {
  cmd->add_option("--d", rc.d, "Dimension")->capture_default_str();
  cmd->add_option("--M", rc.M, "Number of hidden pieces")->capture_default_str();
  cmd->add_option("--kappa", rc.kappa, "Smoothness exponent")->capture_default_str();
  cmd->add_option("--L", rc.L, "Smoothness constant")->capture_default_str();
  cmd->add_option("--eta", rc.eta, "Smoothing radius")->capture_default_str();
  cmd->add_option("--transcript", rc.transcript, "Adversary transcript JSON path");
}

} // namespace

int main(int argc, char **argv) {
  init_logging();
  CLI::App app{"Accelerated complementary composite minimization"};
  app.require_subcommand(1);
  RunConfig rc;

  CLI::App *solve = app.add_subcommand("solve", "Minimize f + psi for a problem-spec file");
  add_spec_options(solve, rc);
  add_run_options(solve, rc);
  solve->add_option("--trace", rc.trace, "Trace path (.csv, or .jsonl)");

  CLI::App *gradnorm = app.add_subcommand("gradnorm", "Drive the dual gradient norm below epsilon");
  add_spec_options(gradnorm, rc);
  add_run_options(gradnorm, rc);
  gradnorm->add_option("--R-init", rc.R_init, "Initial distance estimate")->capture_default_str();
  gradnorm->add_option("--max-restarts", rc.max_restarts, "Restart cap")->capture_default_str();

  CLI::App *lb = app.add_subcommand("lb", "Lower-bound calculators and adversarial runs");
  lb->add_option("--p", rc.p, "Space exponent (default 2)");
  lb->add_option("--lambda", rc.lambda, "Uniform convexity weight (default 1)");
  lb->add_option("--epsilon", rc.epsilon, "Target accuracy")->capture_default_str();
  lb->add_option("--R", rc.R, "Radius")->capture_default_str();
  lb->add_option("--max-iters", rc.max_iters, "Iteration budget for --adversarial");
  lb->add_option("--report", rc.report, "JSON report path");
  lb->add_flag("--adversarial", rc.adversarial, "Run agd_plus against a resisting oracle");
  add_hard_options(lb, rc);

  CLI::App *hard = app.add_subcommand("hard-run", "Run agd_plus against a resisting oracle");
  add_spec_options(hard, rc);
  add_run_options(hard, rc);
  add_hard_options(hard, rc);
  hard->add_option("--trace", rc.trace, "Trace path (.csv, or .jsonl)");

  CLI::App *selfcheck = app.add_subcommand("selfcheck", "Run the invariant suites");
  selfcheck->add_option("--seed", rc.seed, "Seed")->capture_default_str();
  selfcheck->add_option("--inject-fault", rc.fault, "Negative control: duality-sign");

  CLI::App *reference = app.add_subcommand("reference", "Independent high-accuracy reference solution");
  add_spec_options(reference, rc);
  reference->add_option("--tol", rc.tol, "Certified residual")->capture_default_str();
  reference->add_option("--cache", rc.cache, "Reference cache directory");
  reference->add_option("--report", rc.report, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve->parsed())
      return cmd_solve(rc);
    if (gradnorm->parsed())
      return cmd_gradnorm(rc);
    if (lb->parsed()) {
      if (lb->count("--max-iters") == 0)
        rc.max_iters = 3 * rc.M;
      return cmd_lb(rc);
    }
    if (hard->parsed())
      return cmd_hard_run(rc);
    if (selfcheck->parsed())
      return cmd_selfcheck(rc);
    if (reference->parsed())
      return cmd_reference(rc);
  } catch (const compcomp::NumericalError &e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
