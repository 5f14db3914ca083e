#pragma once

#include "compcomp/spaces.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace compcomp {

/// (L, kappa): ||grad f(x) - grad f(y)||_* <= L ||x - y||^{kappa - 1}.
struct Regularity {
  double L = 0.0;
  double kappa = 2.0;
};

/// First-order oracle. Values are free; every gradient call is counted.
class SmoothOracle {
public:
  SmoothOracle(NormedSpace space, std::string description);
  virtual ~SmoothOracle() = default;

  SmoothOracle(const SmoothOracle &) = delete;
  SmoothOracle &operator=(const SmoothOracle &) = delete;

  double value(const Vector &x) const;
  Vector gradient(const Vector &x) const;

  const NormedSpace &space() const { return space_; }
  const std::string &description() const { return description_; }
  const std::optional<Regularity> &regularity() const { return regularity_; }

  std::uint64_t queries() const { return queries_.load(std::memory_order_relaxed); }
  void reset_queries() { queries_.store(0, std::memory_order_relaxed); }

protected:
  virtual double do_value(const Vector &x) const = 0;
  virtual Vector do_gradient(const Vector &x) const = 0;

  void declare(Regularity r) { regularity_ = r; }

private:
  NormedSpace space_;
  std::string description_;
  std::optional<Regularity> regularity_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

using OraclePtr = std::shared_ptr<SmoothOracle>;

/// f(x) = 1/2 ||Ax - b||_2^2, regularity declared w.r.t. `space`.
OraclePtr make_least_squares(const Matrix &A, const Vector &b);
OraclePtr make_least_squares(const Matrix &A, const Vector &b, const NormedSpace &space);

/// f(x) = 1/2 ||A^T(Ax - b)||_{p*}^2 over l_p with p = p*/(p* - 1); needs p* >= 2.
OraclePtr make_correlated_ls(const Matrix &A, const Vector &b, double p_star);

/// f(x) = (1/q)||Ax - b||_p^q with q = min(2, p), over l_p.
OraclePtr make_lp_residual(const Matrix &A, const Vector &b, double p);

/// f(x) = sum_i log(1 + exp(-y_i <a_i, x>)), labels in {-1, +1}.
OraclePtr make_logistic(const Matrix &A, const Vector &labels);
OraclePtr make_logistic(const Matrix &A, const Vector &labels, const NormedSpace &space);

/// Wraps plain callables; mostly for tests and adapters.
OraclePtr make_function_oracle(NormedSpace space, std::function<double(const Vector &)> f,
                               std::function<Vector(const Vector &)> grad,
                               std::optional<Regularity> regularity = std::nullopt,
                               std::string description = "function");

/// Worst coordinate of |grad_i - central difference_i| / max(1, ||grad||_inf).
/// h <= 0 selects 1e-5 (1 + ||x||_inf).
double finite_diff_check(const SmoothOracle &oracle, const Vector &x, double h = 0.0);

/// Upper bound on ||B||_{p -> p*} for symmetric positive semidefinite B,
/// valid for the given geometry (vector l_p or Schatten-p on rows x cols).
double psd_operator_bound(const Matrix &B, const NormedSpace &space);

/// Upper bound on ||A||_{p -> p} (Riesz-Thorin; exact spectral norm at p = 2).
double lp_operator_bound(const Matrix &A, double p);

struct OperatorNormDiagnostics {
  double spectral_estimate = 0.0; ///< power iteration on A^T A, square-rooted
  int power_iterations = 0;
  double max_abs_entry = 0.0; ///< ||A||_{1 -> inf}
};

OperatorNormDiagnostics operator_norm_diagnostics(const Matrix &A, int max_iters = 50,
                                                  double tol = 1e-8);

} // namespace compcomp
