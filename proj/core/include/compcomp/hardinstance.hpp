#pragma once

#include "compcomp/oracles.hpp"

#include <memory>
#include <string>
#include <vector>

namespace compcomp {

struct HardInstanceParams {
  Eigen::Index d = 16;
  int M = 8;          ///< number of pieces, M <= d
  double p = 2.0;     ///< space exponent, >= 2
  double kappa = 2.0; ///< smoothness exponent in (1, 2]
  double L = 1.0;
  double lambda = 1.0;
  double eta = 0.01; ///< smoothing radius, in (0, 4]
};

/// Piecewise-linear max_i [s_i x_i - delta_i] over the revealed pieces,
/// with signs fixed adaptively against the querying algorithm and an
/// infimal-convolution smoothing with kernel (2/eta)||h||_r^2.
class HardInstance {
public:
  explicit HardInstance(const HardInstanceParams &params);

  const HardInstanceParams &params() const { return params_; }
  double r() const { return r_; }
  double mu_bar() const { return mu_bar_; }
  double Delta() const { return Delta_; }
  double scale() const { return params_.L / mu_bar_; }
  double lambda_bar() const { return 1.0; }

  struct Answer {
    double value = 0.0;  ///< scaled by L / mu_bar
    Vector subgradient;  ///< scaled by L / mu_bar
    int piece = 0;       ///< maximizing piece (0-based, lowest index on ties)
  };

  /// Query t reveals s_t = sign(x_t) (ties +1) and delta_t = (t-1) eta/4.
  /// Throws Exhausted after M queries.
  Answer resisting_query(const Vector &x);

  int revealed() const { return static_cast<int>(signs_.size()); }
  bool exhausted() const { return revealed() >= params_.M; }
  const std::vector<int> &signs() const { return signs_; }
  const std::vector<double> &offsets() const { return offsets_; }
  const std::vector<Vector> &queries() const { return queries_; }
  const std::vector<double> &answered_values() const { return values_; }

  /// Reveal the remaining pieces with sign +1 (used to freeze an instance).
  void complete();

  /// Unscaled max over revealed pieces.
  double piecewise_value(const Vector &x) const;

  struct Smoothed {
    double value = 0.0; ///< unscaled
    Vector gradient;    ///< unscaled
    bool converged = true;
  };
  /// inf_h [max_i(s_i (x + h)_i - delta_i) + (2/eta)||h||_r^2] over revealed pieces.
  Smoothed smoothed_eval(const Vector &x, double inner_tol = 1e-13) const;

  /// (L/mu_bar)(-eta - max_i delta_i) over revealed pieces.
  double guarantee_bound() const;
  /// min_t of the frozen nonsmooth function (scaled) at recorded queries.
  double replay_min_value() const;

  std::string transcript_json() const;
  static HardInstance from_transcript_json(const std::string &json);

private:
  HardInstanceParams params_;
  double r_ = 2.0;
  double mu_bar_ = 1.0;
  double Delta_ = 1.0;
  std::vector<int> signs_;
  std::vector<double> offsets_;
  std::vector<Vector> queries_;
  std::vector<double> values_;
};

/// Oracle view of (L/mu_bar) S(max) for use with agd_plus. Gradient calls
/// reveal pieces while the instance has budget; afterwards it is frozen.
OraclePtr make_resisting_oracle(std::shared_ptr<HardInstance> instance);

/// (1/(2 q*)) (L Delta / mu_bar)^{q*} (lambda_bar / lambda)^{1/(q-1)}.
double gap_lower_bound(double L, double Delta, double mu_bar, double lambda, double lambda_bar,
                       double q);

struct HardInstanceHypotheses {
  bool a = false; ///< 2 q L lambda_bar / (lambda mu_bar) <= R^{q-1}
  bool b = false; ///< (M + 3) eta <= 4R
  bool c = false; ///< (L / (4 mu_bar)) (M + 7) eta <= gap_lower_bound
  bool all() const { return a && b && c; }
};

HardInstanceHypotheses check_hypotheses(const HardInstanceParams &params, double R);

struct ComplexityBound {
  double count = 0.0;
  std::string regime = "none"; ///< "p=kappa=2", "kappa<p", or "none"
  bool valid = false;          ///< stated conditions, universal constant C = 1
  double lambda_tilde = 0.0;   ///< threshold for the kappa<p regime
};

ComplexityBound complexity_lower_bound(double p, double kappa, double L, double lambda,
                                       double epsilon, double d, double R);

/// C(p, kappa) of the general regime.
double complexity_constant(double p, double kappa);

/// f(x) - f(x*) <= epsilon_grad * R.
double reduction_gap_from_gradient(double epsilon_grad, double R);

} // namespace compcomp
