#pragma once

#include "compcomp/spaces.hpp"

namespace compcomp {

/// Uniformly convex term psi.
///
/// PowerOfNorm / SchattenPower: psi(x) = lambda * P(x - center) where
///   P(w) = ||w||^2 / (2(p-1))  for p <= 2   (q = 2)
///   P(w) = ||w||^p / p         for p > 2    (q = p)
/// ElasticNet: (lambda2/2)||x||_2^2 + lambda1 ||x||_1 (uncentered).
/// L1Only: lambda1 ||x||_1.
struct Regularizer {
  enum class Kind { PowerOfNorm, ElasticNet, L1Only, SchattenPower };

  Kind kind = Kind::PowerOfNorm;
  NormedSpace space;
  double lambda = 0.0; ///< coefficient of P (power kinds) or lambda2 (ElasticNet)
  Vector center;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  static Regularizer power_of_norm(const NormedSpace &space, double lambda, Vector center);
  static Regularizer power_of_norm(const NormedSpace &space, double lambda);
  static Regularizer schatten_power(const NormedSpace &space, double lambda, Vector center);
  /// power_of_norm or schatten_power depending on the space.
  static Regularizer power(const NormedSpace &space, double lambda, Vector center);
  static Regularizer elastic_net(Eigen::Index dim, double lambda1, double lambda2);
  static Regularizer l1_only(Eigen::Index dim, double lambda1);

  /// Uniform-convexity exponent.
  double q() const;
  /// Modulus with which the uniform-convexity inequality provably holds:
  /// lambda for q = 2, lambda * 2^{2-p} for the p > 2 power.
  double modulus() const;

  bool is_power() const { return kind == Kind::PowerOfNorm || kind == Kind::SchattenPower; }
  bool differentiable() const { return is_power(); }

  double value(const Vector &x) const;
  /// Only for differentiable kinds.
  Vector gradient(const Vector &x) const;
};

/// The power functional P(w) of a power-kind regularizer and its gradient.
double power_functional(const NormedSpace &space, const Vector &w);
Vector power_functional_gradient(const NormedSpace &space, const Vector &w);

/// phi with phi(u) >= (1/q)||u - x0||^q.
///
/// PowerBregman: phi(u) = weight * D_P(u, anchor) where P is centered at
/// `center`; weight = 2^{p-2} for p > 2 (else 1) makes D_phi dominate
/// (1/q)||.||^q. With anchor == center this is weight * P(u - center).
/// Euclidean: phi(u) = (weight/2)||u - anchor||_2^2.
struct ScaffoldFunction {
  enum class Kind { PowerBregman, Euclidean };

  Kind kind = Kind::Euclidean;
  NormedSpace space;
  Vector anchor;
  Vector center;
  double weight = 1.0;
  double q = 2.0;

  double value(const Vector &u) const;
  Vector gradient(const Vector &u) const;
};

/// Scaffold anchored at the solver's starting point x0.
ScaffoldFunction make_scaffold(const Regularizer &reg, const Vector &x0);
/// Scaffold anchored at the regularizer's center.
ScaffoldFunction make_scaffold(const Regularizer &reg);

/// D_psi(u, v); throws Unsupported for kinds with an l1 term.
double bregman(const Regularizer &reg, const Vector &u, const Vector &v);

/// Exact argmin_u <z, u> + A psi(u) + m0 phi(u).
Vector composite_prox(const Regularizer &reg, const ScaffoldFunction &scaffold, const Vector &z,
                      double A, double m0);

/// The subproblem objective minimized by composite_prox.
double prox_objective(const Regularizer &reg, const ScaffoldFunction &scaffold, const Vector &z,
                      double A, double m0, const Vector &u);

} // namespace compcomp
