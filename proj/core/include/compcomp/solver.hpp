#pragma once

#include "compcomp/oracles.hpp"
#include "compcomp/regularizers.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace compcomp {

struct SolverConfig {
  double epsilon = 1e-6;
  int max_iters = 1000;
  double M_init = 1.0;
  bool adaptive = true;
  double bisection_tol = 1e-12;
  std::uint64_t seed = 0;
  /// Query grad f(y_k) every iteration (counted) to fill the gradient-norm columns.
  bool record_grad_norm = false;
  /// Stop once ||grad f(y) + grad psi(y)||_* <= this (needs record_grad_norm, differentiable psi).
  double composite_grad_tol = 0.0;
  /// Relative objective stall over `stall_window` iterations; 0 disables.
  int stall_window = 0;
  double stall_tol = 1e-14;
};

/// psi and the prox subproblem as seen by the iteration. Built from a
/// Regularizer/ScaffoldFunction pair, or supplied directly to plug in a
/// custom exact prox.
struct CompositeModel {
  double q = 2.0;
  double lambda = 0.0; ///< uniform-convexity modulus of psi
  std::function<double(const Vector &)> psi;
  /// argmin_u <z, u> + A psi(u) + m0 phi(u)
  std::function<Vector(const Vector &z, double A, double m0)> prox;
  std::function<Vector(const Vector &)> psi_gradient; ///< optional
  std::function<double(const Vector &)> phi;          ///< optional
};

CompositeModel make_model(const Regularizer &reg, const ScaffoldFunction &scaffold);

struct IterationRecord {
  int k = 0;
  double a = 0.0;
  double A = 0.0;
  double M = 0.0;
  double delta = 0.0;
  double f = 0.0;
  double psi = 0.0;
  double obj = 0.0;
  double grad_dual_norm = std::numeric_limits<double>::quiet_NaN();
  double composite_grad_dual_norm = std::numeric_limits<double>::quiet_NaN();
  double U = 0.0; ///< f(y_k) + (1/A_k) sum a_i psi(v_i)
  int doublings = 0; ///< cumulative
  double elapsed_ms = 0.0;
};

struct TraceHeader {
  std::string oracle;
  double epsilon = 0.0;
  double M_init = 0.0;
  double m0 = 0.0;
  double q = 2.0;
  double lambda = 0.0;
  int max_iters = 0;
  bool adaptive = true;
};

struct Trace {
  TraceHeader header;
  std::vector<IterationRecord> rows;
};

struct SolverState {
  Vector x, v, y, z;
  double A = 0.0;
  double a = 0.0;
  double M = 0.0;
  double m0 = 0.0;
  int k = 0;
  int doubling_count = 0;
  double psi_sum = 0.0; ///< sum a_i psi(v_i)
  Vector grad_y;        ///< grad f(y_k) when recorded, else empty
};

enum class SolverStatus { MaxIters, StopPredicate, CompositeGradTol, Stalled, ACap };

const char *to_string(SolverStatus s);

struct SolverResult {
  Vector y;
  SolverState state;
  Trace trace;
  SolverStatus status = SolverStatus::MaxIters;
  std::uint64_t grad_queries = 0;

  bool converged() const { return status != SolverStatus::MaxIters; }
};

/// Called after every iteration (including k = 0); return true to stop.
using StopPredicate = std::function<bool(const SolverState &, const IterationRecord &)>;

SolverResult agd_plus(const SmoothOracle &oracle, const Regularizer &reg,
                      const ScaffoldFunction &scaffold, const Vector &x0, const SolverConfig &cfg,
                      const StopPredicate &stop = {});

/// Scaffold anchored at x0.
SolverResult agd_plus(const SmoothOracle &oracle, const Regularizer &reg, const Vector &x0,
                      const SolverConfig &cfg, const StopPredicate &stop = {});

SolverResult agd_plus(const SmoothOracle &oracle, const CompositeModel &model, const Vector &x0,
                      const SolverConfig &cfg, const StopPredicate &stop = {});

/// a_k = max(A_prev (lambda/M)^{1/q}, root of a^q = (m0/M)(A_prev + a)^{q-1}).
double compute_step(double A_prev, double lambda, double m0, double M, double q,
                    double tol = 1e-12);

/// f(y) <= f(x) + <g, y - x> + (M/q)||y - x||^q + delta/2, slack 1e-12 (1 + |f(x)|).
bool smoothness_holds(double fx, const Vector &gx, double fy, const Vector &x, const Vector &y,
                      const NormedSpace &space, double M, double q, double delta);

/// Queries the gradient at x once.
bool validate_smoothness(const SmoothOracle &oracle, const Vector &x, const Vector &y, double M,
                         double q, double delta);

} // namespace compcomp
