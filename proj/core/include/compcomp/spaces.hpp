#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace compcomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite-dimensional normed space. Matrix points are stored as
/// column-major flattened vectors so the solver sees one point type.
struct NormedSpace {
  enum class Kind { VectorLp, SchattenP };

  Kind kind = Kind::VectorLp;
  double p = 2.0;
  Eigen::Index rows = 0; ///< vector length, or matrix rows
  Eigen::Index cols = 1; ///< 1 for vectors

  static NormedSpace lp(Eigen::Index dim, double p);
  static NormedSpace schatten(Eigen::Index rows, Eigen::Index cols, double p);

  Eigen::Index dim() const { return rows * cols; }
  double dual_p() const;

  /// Same geometry with the dual exponent.
  NormedSpace dual() const;

  double norm(const Vector &x) const;
  double dual_norm(const Vector &g) const;

  /// Gradient of (1/q)||x||^q, an element of the dual space.
  Vector duality_map(const Vector &x, double q) const;

  /// Gradient of (1/q*)||g||_*^{q*}; inverts duality_map(., q).
  Vector inverse_duality_map(const Vector &g, double q) const;

  void check_point(const Vector &x) const;
};

double dual_exponent(double p);

double lp_norm(const Vector &x, double p);

/// Componentwise sign(x_i)|x_i|^{p-1}||x||_p^{q-p}; zero at x = 0.
Vector duality_map(const Vector &x, double p, double q);

/// p = ln d / (ln d - 1), the exponent standing in for l1 on dimension d.
double l1_surrogate_exponent(Eigen::Index d);

/// p = ln d, the exponent standing in for l-infinity on dimension d.
double linf_surrogate_exponent(Eigen::Index d);

struct Svd {
  Matrix U;     ///< rows x r
  Vector sigma; ///< r = min(rows, cols), descending
  Matrix V;     ///< cols x r
  int sweeps = 0;
};

/// One-sided Jacobi SVD (thin). Throws NumericalError when the sweep cap
/// is hit before the off-diagonal tolerance is met.
Svd jacobi_svd(const Matrix &X, double tol = 1e-12, int max_sweeps = -1);

double schatten_norm(const Matrix &X, double p);

/// U diag(duality_map(sigma, p, q)) V^T.
Matrix schatten_duality_map(const Matrix &X, double p, double q);

} // namespace compcomp
