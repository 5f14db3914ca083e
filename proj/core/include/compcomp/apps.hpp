#pragma once

#include "compcomp/oracles.hpp"
#include "compcomp/regularizers.hpp"

#include <map>
#include <string>
#include <vector>

namespace compcomp {

struct ProblemSpec {
  enum class Kind { ElasticNet, Bridge, Dantzig, LpRegression, Correlated, Schatten };

  Kind kind = Kind::ElasticNet;
  std::string name;
  OraclePtr oracle;
  Regularizer reg;
  ScaffoldFunction scaffold; ///< anchored at the origin
  NormedSpace space;
  Matrix A; ///< design (lifted to vec(X) for Schatten problems)
  Vector b;
  std::map<std::string, double> metadata;
  /// Correlated problems are gradient-norm tasks rather than composite minimizations.
  bool gradnorm_task = false;

  double objective(const Vector &x) const { return oracle->value(x) + reg.value(x); }
  Vector start() const { return Vector::Zero(space.dim()); }
};

const char *to_string(ProblemSpec::Kind k);

ProblemSpec build_elastic_net(const Matrix &A, const Vector &b, double lambda1, double lambda2);

/// (lambda/2)||x||_p^2 for p <= 2, (lambda/p)||x||_p^p for p > 2.
ProblemSpec build_bridge(const Matrix &A, const Vector &b, double lambda, double p);

/// 1/2 ||A^T(Ax - b)||_{p*}^2 + (lambda/2)||x||_p^2 with p* = ln d / ln(1 + eps).
ProblemSpec build_dantzig(const Matrix &A, const Vector &b, double lambda, double approx_eps);

/// (1/q)||Ax - b||_p^q with psi = 0.
ProblemSpec build_lp_regression(const Matrix &A, const Vector &b, double p);

/// Gradient-norm task on 1/2||Ax - b||_2^2 over l_{p*}; target ||A^T(Ax - b)||_p.
ProblemSpec build_correlated(const Matrix &A, const Vector &b, double p_star);

/// Linear map X -> (<S_j, X>)_j, stored as a k x (rows cols) matrix on vec(X).
struct LinearMap {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Matrix lifted;

  static LinearMap from_sensing(const std::vector<Matrix> &sensing);
  /// One observation per nonzero mask entry, in column-major order.
  static LinearMap from_mask(const Matrix &mask);
};

/// 1/2||A(X) - b||^2 + lambda Psi_{S,p}(X), parametrized like build_bridge.
ProblemSpec build_schatten_problem(const LinearMap &op, const Vector &b, double lambda, double p);

/// Bridge: |‖A^T(Ax - b)‖_{p*} - lambda ‖x‖_p^{q-1}| (zero at the optimum).
/// Dantzig: signed slack ((1+e)/(1-e))^2 A_max ‖A^T(Ax - b)‖_inf - lambda ‖x‖_1,
/// nonnegative at the optimum.
double tradeoff_check(const ProblemSpec &spec, const Vector &x);

} // namespace compcomp
