#pragma once

#include "compcomp/solver.hpp"

namespace compcomp {

struct GradNormConfig {
  double epsilon = 1e-3;
  double R_init = 1.0;
  double lambda_init = 0.0; ///< 0 selects choose_lambda(p, epsilon, R_init)
  int max_restarts = 60;
  /// Inner run; its epsilon (the delta_k budget) defaults to 1e-6 epsilon^2
  /// when left at 0, and its iteration budget applies per restart.
  SolverConfig inner{0.0, 100000};
};

struct GradNormReport {
  int restarts = 0;
  double lambda_init = 0.0;
  double lambda_final = 0.0;
  std::uint64_t grad_queries = 0;
  double final_f_grad_norm = 0.0;
  double final_composite_grad_norm = 0.0;
  bool converged = false;
  bool warm_start = true;
  int inner_iterations = 0;
};

/// epsilon (p-1) / (2R) for p <= 2, epsilon / (2 R^{p-1}) otherwise.
double choose_lambda(double p, double epsilon, double R);

struct GradNormResult {
  Vector y;
  GradNormReport report;
};

/// Drives ||grad f(y)||_* <= epsilon by solving f + lambda psi_p (centered at
/// x0) with agd_plus, halving lambda and warm-restarting from the last iterate
/// whenever the regularized problem is solved but f's gradient is still large.
GradNormResult minimize_grad_norm(const SmoothOracle &oracle, const NormedSpace &space,
                                  const Vector &x0, const GradNormConfig &cfg);

} // namespace compcomp
