#include "compcomp/gradnorm.hpp"

#include "compcomp/errors.hpp"

#include <cmath>

namespace compcomp {

double choose_lambda(double p, double epsilon, double R) {
  dual_exponent(p);
  if (!(epsilon > 0.0) || !(R > 0.0))
    throw InvalidInput("choose_lambda: epsilon and R must be positive");
  if (p <= 2.0)
    return epsilon * (p - 1.0) / (2.0 * R);
  return epsilon / (2.0 * std::pow(R, p - 1.0));
}

GradNormResult minimize_grad_norm(const SmoothOracle &oracle, const NormedSpace &space,
                                  const Vector &x0, const GradNormConfig &cfg) {
  if (!(cfg.epsilon > 0.0) || !(cfg.R_init > 0.0))
    throw InvalidInput("minimize_grad_norm: epsilon and R_init must be positive");
  if (cfg.max_restarts < 0)
    throw InvalidInput("minimize_grad_norm: max_restarts must be nonnegative");
  if (space.dim() != oracle.space().dim())
    throw InvalidInput("minimize_grad_norm: space and oracle dimensions differ");
  space.check_point(x0);

  const std::uint64_t q_start = oracle.queries();
  GradNormResult out;
  GradNormReport &rep = out.report;
  rep.lambda_init = cfg.lambda_init > 0.0 ? cfg.lambda_init
                                          : choose_lambda(space.p, cfg.epsilon, cfg.R_init);
  rep.lambda_final = rep.lambda_init;

  out.y = x0;
  const double g0 = space.dual_norm(oracle.gradient(x0));
  rep.final_f_grad_norm = g0;
  rep.final_composite_grad_norm = g0;
  if (g0 <= cfg.epsilon) {
    rep.converged = true;
    rep.grad_queries = oracle.queries() - q_start;
    return out;
  }

  SolverConfig inner = cfg.inner;
  if (!(inner.epsilon > 0.0))
    inner.epsilon = 1e-6 * cfg.epsilon * cfg.epsilon;
  inner.record_grad_norm = true;
  inner.composite_grad_tol = cfg.epsilon;

  double lambda = rep.lambda_init;
  Vector start = x0;
  for (;;) {
    const Regularizer reg = Regularizer::power(space, lambda, x0);
    // f's own gradient reaching epsilon ends the run early as well
    const SolverResult r = agd_plus(oracle, reg, start, inner, [&](const SolverState &, const IterationRecord &rec) {
      return rec.grad_dual_norm <= cfg.epsilon;
    });
    rep.inner_iterations += r.state.k;
    const IterationRecord &last = r.trace.rows.back();
    out.y = r.y;
    rep.final_f_grad_norm = last.grad_dual_norm;
    rep.final_composite_grad_norm = last.composite_grad_dual_norm;
    rep.lambda_final = lambda;
    if (last.grad_dual_norm <= cfg.epsilon) {
      rep.converged = true;
      break;
    }
    if (rep.restarts >= cfg.max_restarts)
      break;
    lambda *= 0.5;
    ++rep.restarts;
    start = r.y;
  }
  rep.grad_queries = oracle.queries() - q_start;
  return out;
}

} // namespace compcomp
