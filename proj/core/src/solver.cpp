#include "compcomp/solver.hpp"

#include "compcomp/errors.hpp"

#include <chrono>
#include <cmath>

namespace compcomp {

namespace {

constexpr double kMaxM = 1e300;
constexpr double kMaxA = 1e300;

} // namespace

const char *to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::MaxIters:
    return "max_iters";
  case SolverStatus::StopPredicate:
    return "stop_predicate";
  case SolverStatus::CompositeGradTol:
    return "composite_grad_tol";
  case SolverStatus::Stalled:
    return "stalled";
  case SolverStatus::ACap:
    return "A_cap";
  }
  return "unknown";
}

double compute_step(double A_prev, double lambda, double m0, double M, double q, double tol) {
  if (!(A_prev > 0.0) || !(M > 0.0) || !(q > 1.0) || lambda < 0.0 || m0 < 0.0)
    throw InvalidInput("compute_step: need A_prev > 0, M > 0, q > 1, lambda >= 0, m0 >= 0");
  const double a1 = lambda > 0.0 ? A_prev * std::pow(lambda / M, 1.0 / q) : 0.0;
  double a2 = 0.0;
  if (m0 > 0.0) {
    const double r = m0 / M;
    const double log_r = std::log(r);
    // increasing in a > 0
    auto h = [&](double a) { return q * std::log(a) - (q - 1.0) * std::log(A_prev + a) - log_r; };
    double lo = std::pow(r, 1.0 / q) * std::pow(A_prev, (q - 1.0) / q);
    double hi = lo + A_prev + 1.0;
    int expansions = 0;
    while (h(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > 200 || !std::isfinite(hi))
        throw NumericalError("compute_step: no bracket for the step equation");
    }
    for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) < 0.0 ? lo : hi) = mid;
    }
    a2 = 0.5 * (lo + hi);
  }
  const double a = std::max(a1, a2);
  if (!(a > 0.0) || !std::isfinite(a))
    throw NumericalError("compute_step: non-positive step (lambda = m0 = 0?)");
  return a;
}

bool smoothness_holds(double fx, const Vector &gx, double fy, const Vector &x, const Vector &y,
                      const NormedSpace &space, double M, double q, double delta) {
  const Vector d = y - x;
  const double rhs = fx + gx.dot(d) + (M / q) * std::pow(space.norm(d), q) + 0.5 * delta;
  return rhs - fy >= -1e-12 * (1.0 + std::abs(fx));
}

bool validate_smoothness(const SmoothOracle &oracle, const Vector &x, const Vector &y, double M,
                         double q, double delta) {
  return smoothness_holds(oracle.value(x), oracle.gradient(x), oracle.value(y), x, y,
                          oracle.space(), M, q, delta);
}

CompositeModel make_model(const Regularizer &reg, const ScaffoldFunction &scaffold) {
  CompositeModel m;
  m.q = reg.q();
  m.lambda = reg.modulus();
  m.psi = [reg](const Vector &x) { return reg.value(x); };
  m.prox = [reg, scaffold](const Vector &z, double A, double m0) {
    return composite_prox(reg, scaffold, z, A, m0);
  };
  if (reg.differentiable())
    m.psi_gradient = [reg](const Vector &x) { return reg.gradient(x); };
  m.phi = [scaffold](const Vector &u) { return scaffold.value(u); };
  return m;
}

SolverResult agd_plus(const SmoothOracle &oracle, const Regularizer &reg,
                      const ScaffoldFunction &scaffold, const Vector &x0, const SolverConfig &cfg,
                      const StopPredicate &stop) {
  if (reg.space.dim() != oracle.space().dim())
    throw InvalidInput("agd_plus: oracle and regularizer live in different dimensions");
  return agd_plus(oracle, make_model(reg, scaffold), x0, cfg, stop);
}

SolverResult agd_plus(const SmoothOracle &oracle, const Regularizer &reg, const Vector &x0,
                      const SolverConfig &cfg, const StopPredicate &stop) {
  return agd_plus(oracle, reg, make_scaffold(reg, x0), x0, cfg, stop);
}

SolverResult agd_plus(const SmoothOracle &oracle, const CompositeModel &model, const Vector &x0,
                      const SolverConfig &cfg, const StopPredicate &stop) {
  if (!(cfg.epsilon > 0.0))
    throw InvalidInput("agd_plus: epsilon must be positive");
  if (cfg.max_iters < 1)
    throw InvalidInput("agd_plus: max_iters must be at least 1");
  if (!(cfg.M_init > 0.0))
    throw InvalidInput("agd_plus: M_init must be positive");
  if (!(model.q >= 2.0) || model.lambda < 0.0)
    throw InvalidInput("agd_plus: need q >= 2 and lambda >= 0");
  const NormedSpace &space = oracle.space();
  space.check_point(x0);

  const auto t_start = std::chrono::steady_clock::now();
  const std::uint64_t q_start = oracle.queries();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
        .count();
  };
  const double q = model.q;
  const double lambda = model.lambda;

  SolverResult res;
  res.trace.header = {oracle.description(), cfg.epsilon, cfg.M_init, 0.0,
                      q,                    lambda,      cfg.max_iters, cfg.adaptive};
  SolverState &s = res.state;

  auto record = [&](double fy) {
    IterationRecord r;
    r.k = s.k;
    r.a = s.a;
    r.A = s.A;
    r.M = s.M;
    r.delta = (s.a / s.A) * cfg.epsilon;
    r.f = fy;
    r.psi = model.psi(s.y);
    r.obj = r.f + r.psi;
    r.U = fy + s.psi_sum / s.A;
    r.doublings = s.doubling_count;
    if (cfg.record_grad_norm) {
      s.grad_y = oracle.gradient(s.y);
      r.grad_dual_norm = space.dual_norm(s.grad_y);
      if (model.psi_gradient)
        r.composite_grad_dual_norm = space.dual_norm(s.grad_y + model.psi_gradient(s.y));
    }
    r.elapsed_ms = elapsed_ms();
    res.trace.rows.push_back(r);
    return r;
  };

  // returns true when the run should end
  auto check_stop = [&](const IterationRecord &r) {
    if (cfg.composite_grad_tol > 0.0 && r.composite_grad_dual_norm <= cfg.composite_grad_tol) {
      res.status = SolverStatus::CompositeGradTol;
      return true;
    }
    if (stop && stop(s, r)) {
      res.status = SolverStatus::StopPredicate;
      return true;
    }
    const auto n = static_cast<int>(res.trace.rows.size());
    if (cfg.stall_window > 0 && n > cfg.stall_window) {
      const double before = res.trace.rows[static_cast<std::size_t>(n - 1 - cfg.stall_window)].obj;
      if (std::abs(before - r.obj) <= cfg.stall_tol * std::max(1.0, std::abs(r.obj))) {
        res.status = SolverStatus::Stalled;
        return true;
      }
    }
    return false;
  };

  // iteration 0: a0 = A0 = 1, delta0 = epsilon, m0 = A0 M0
  s.k = 0;
  s.a = s.A = 1.0;
  s.M = cfg.M_init;
  s.x = x0;
  const Vector g0 = oracle.gradient(x0);
  const double fx0 = oracle.value(x0);
  double fy = 0.0;
  for (;;) {
    s.m0 = s.A * s.M;
    s.z = s.a * g0;
    s.v = model.prox(s.z, s.A, s.m0);
    s.y = s.v;
    fy = oracle.value(s.y);
    if (!cfg.adaptive || smoothness_holds(fx0, g0, fy, s.x, s.y, space, s.M, q, cfg.epsilon))
      break;
    s.M *= 2.0;
    ++s.doubling_count;
    if (s.M > kMaxM)
      throw NumericalError("agd_plus: M exceeded 1e300 at iteration 0 (nonconvex or nonsmooth oracle?)");
  }
  res.trace.header.m0 = s.m0;
  s.psi_sum = s.a * model.psi(s.v);
  bool done = check_stop(record(fy));

  while (!done && s.k < cfg.max_iters) {
    const Vector y_prev = s.y;
    const Vector v_prev = s.v;
    const Vector z_prev = s.z;
    const double A_prev = s.A;
    double M = s.M;
    for (;;) {
      const double a = compute_step(A_prev, lambda, s.m0, M, q, cfg.bisection_tol);
      const double A = A_prev + a;
      if (A > kMaxA) {
        res.status = SolverStatus::ACap;
        done = true;
        break;
      }
      const Vector x = (A_prev / A) * y_prev + (a / A) * v_prev;
      const Vector g = oracle.gradient(x);
      const double fx = oracle.value(x);
      Vector z = z_prev + a * g;
      Vector v = model.prox(z, A, s.m0);
      Vector y = (A_prev / A) * y_prev + (a / A) * v;
      const double fyk = oracle.value(y);
      const double delta = (a / A) * cfg.epsilon;
      if (!cfg.adaptive || smoothness_holds(fx, g, fyk, x, y, space, M, q, delta)) {
        s.a = a;
        s.A = A;
        s.M = M;
        s.x = x;
        s.z = std::move(z);
        s.v = std::move(v);
        s.y = std::move(y);
        fy = fyk;
        break;
      }
      M *= 2.0;
      ++s.doubling_count;
      if (M > kMaxM)
        throw NumericalError("agd_plus: M exceeded 1e300 at iteration " + std::to_string(s.k + 1) +
                             " (nonconvex or nonsmooth oracle?)");
    }
    if (done)
      break;
    ++s.k;
    s.psi_sum += s.a * model.psi(s.v);
    done = check_stop(record(fy));
  }

  res.y = s.y;
  res.grad_queries = oracle.queries() - q_start;
  return res;
}

} // namespace compcomp
