#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace compcomp::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2 };

struct RunConfig {
  std::string spec;
  std::string A_path;
  std::string b_path;
  std::optional<double> p;
  std::optional<double> lambda;
  double epsilon = 1e-6;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  std::string trace;
  std::string report;
  std::string emit_spec;

  // gradnorm
  double R_init = 1.0;
  int max_restarts = 60;

  // lb / hard-run
  double kappa = 2.0;
  double L = 1.0;
  double d = 16.0;
  double R = 1.0;
  int M = 8;
  double eta = 1e-3;
  bool adversarial = false;
  std::string transcript;

  // reference
  double tol = 1e-10;
  std::string cache;

  // selfcheck
  std::string fault;
};

int cmd_solve(const RunConfig &rc);
int cmd_gradnorm(const RunConfig &rc);
int cmd_lb(const RunConfig &rc);
int cmd_hard_run(const RunConfig &rc);
int cmd_reference(const RunConfig &rc);
int cmd_selfcheck(const RunConfig &rc);

void init_logging();

} // namespace compcomp::cli
