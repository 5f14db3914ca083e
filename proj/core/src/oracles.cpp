#include "compcomp/oracles.hpp"

#include "compcomp/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <utility>

namespace compcomp {

SmoothOracle::SmoothOracle(NormedSpace space, std::string description)
    : space_(space), description_(std::move(description)) {}

double SmoothOracle::value(const Vector &x) const {
  space_.check_point(x);
  return do_value(x);
}

Vector SmoothOracle::gradient(const Vector &x) const {
  space_.check_point(x);
  queries_.fetch_add(1, std::memory_order_relaxed);
  return do_gradient(x);
}

namespace {

void check_shapes(const Matrix &A, const Vector &b) {
  if (A.rows() != b.size())
    throw InvalidInput("dimension mismatch: A has " + std::to_string(A.rows()) +
                       " rows but b has " + std::to_string(b.size()) + " entries");
  if (A.cols() < 1)
    throw InvalidInput("A must have at least one column");
  if (!A.allFinite() || !b.allFinite())
    throw InvalidInput("non-finite entry in problem data");
}

double largest_eigenvalue(const Matrix &B) {
  if (B.size() == 0)
    return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

class LeastSquares final : public SmoothOracle {
public:
  LeastSquares(Matrix A, Vector b, const NormedSpace &space)
      : SmoothOracle(space, "least_squares"), A_(std::move(A)), b_(std::move(b)) {
    declare({psd_operator_bound(A_.transpose() * A_, space), 2.0});
  }

private:
  double do_value(const Vector &x) const override { return 0.5 * (A_ * x - b_).squaredNorm(); }
  Vector do_gradient(const Vector &x) const override { return A_.transpose() * (A_ * x - b_); }

  Matrix A_;
  Vector b_;
};

class CorrelatedLS final : public SmoothOracle {
public:
  CorrelatedLS(Matrix A, Vector b, double p_star)
      : SmoothOracle(NormedSpace::lp(A.cols(), dual_exponent(p_star)), "correlated_ls"),
        At_(A.transpose()), B_(At_ * A), Atb_(At_ * b), p_star_(p_star) {
    const double op = psd_operator_bound(B_, space());
    declare({(p_star_ - 1.0) * op * op, 2.0});
  }

private:
  Vector residual(const Vector &x) const { return B_ * x - Atb_; }
  double do_value(const Vector &x) const override {
    const double n = lp_norm(residual(x), p_star_);
    return 0.5 * n * n;
  }
  Vector do_gradient(const Vector &x) const override {
    return B_ * duality_map(residual(x), p_star_, 2.0);
  }

  Matrix At_;
  Matrix B_;
  Vector Atb_;
  double p_star_;
};

class LpResidual final : public SmoothOracle {
public:
  LpResidual(Matrix A, Vector b, double p)
      : SmoothOracle(NormedSpace::lp(A.cols(), p), "lp_residual"), A_(std::move(A)),
        b_(std::move(b)), p_(p), q_(std::min(2.0, p)) {
    const double a = lp_operator_bound(A_, p_);
    if (p_ >= 2.0)
      declare({(p_ - 1.0) * a * a, 2.0});
    else
      declare({std::pow(2.0, 2.0 - p_) * std::pow(a, p_), p_});
  }

private:
  double do_value(const Vector &x) const override {
    return std::pow(lp_norm(A_ * x - b_, p_), q_) / q_;
  }
  Vector do_gradient(const Vector &x) const override {
    return A_.transpose() * duality_map(A_ * x - b_, p_, q_);
  }

  Matrix A_;
  Vector b_;
  double p_;
  double q_;
};

// log(1 + exp(-t)) without overflow
double softplus_neg(double t) { return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// 1 / (1 + exp(t))
double sigmoid_neg(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

class Logistic final : public SmoothOracle {
public:
  Logistic(Matrix A, Vector y, const NormedSpace &space)
      : SmoothOracle(space, "logistic"), A_(std::move(A)), y_(std::move(y)) {
    declare({psd_operator_bound(0.25 * (A_.transpose() * A_), space), 2.0});
  }

private:
  double do_value(const Vector &x) const override {
    const Vector m = y_.cwiseProduct(A_ * x);
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      s += softplus_neg(m[i]);
    return s;
  }
  Vector do_gradient(const Vector &x) const override {
    const Vector m = y_.cwiseProduct(A_ * x);
    Vector w(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i)
      w[i] = -y_[i] * sigmoid_neg(m[i]);
    return A_.transpose() * w;
  }

  Matrix A_;
  Vector y_;
};

class FunctionOracle final : public SmoothOracle {
public:
  FunctionOracle(NormedSpace space, std::function<double(const Vector &)> f,
                 std::function<Vector(const Vector &)> g, std::optional<Regularity> r,
                 std::string description)
      : SmoothOracle(space, std::move(description)), f_(std::move(f)), g_(std::move(g)) {
    if (r)
      declare(*r);
  }

private:
  double do_value(const Vector &x) const override { return f_(x); }
  Vector do_gradient(const Vector &x) const override { return g_(x); }

  std::function<double(const Vector &)> f_;
  std::function<Vector(const Vector &)> g_;
};

} // namespace

double psd_operator_bound(const Matrix &B, const NormedSpace &space) {
  if (B.rows() != B.cols() || B.rows() != space.dim())
    throw InvalidInput("psd_operator_bound: shape mismatch");
  const double s = largest_eigenvalue(B);
  const double p = space.p;
  if (space.kind == NormedSpace::Kind::SchattenP) {
    const double r = static_cast<double>(std::min(space.rows, space.cols));
    return p <= 2.0 ? s : s * std::pow(r, 1.0 - 2.0 / p);
  }
  const double d = static_cast<double>(space.dim());
  const double spectral = p <= 2.0 ? s : s * std::pow(d, 1.0 - 2.0 / p);
  const double entrywise = B.cwiseAbs().maxCoeff() * std::pow(d, 2.0 - 2.0 / p);
  return std::min(spectral, entrywise);
}

double lp_operator_bound(const Matrix &A, double p) {
  if (p == 2.0)
    return std::sqrt(largest_eigenvalue(A.transpose() * A));
  const double col = A.cwiseAbs().colwise().sum().maxCoeff();
  const double row = A.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(col, 1.0 / p) * std::pow(row, 1.0 - 1.0 / p);
}

OraclePtr make_least_squares(const Matrix &A, const Vector &b) {
  check_shapes(A, b);
  return make_least_squares(A, b, NormedSpace::lp(A.cols(), 2.0));
}

OraclePtr make_least_squares(const Matrix &A, const Vector &b, const NormedSpace &space) {
  check_shapes(A, b);
  if (space.dim() != A.cols())
    throw InvalidInput("least squares: space dimension differs from A's column count");
  return std::make_shared<LeastSquares>(A, b, space);
}

OraclePtr make_correlated_ls(const Matrix &A, const Vector &b, double p_star) {
  check_shapes(A, b);
  if (!(p_star >= 2.0) || !std::isfinite(p_star))
    throw InvalidInput("correlated least squares needs p* >= 2");
  return std::make_shared<CorrelatedLS>(A, b, p_star);
}

OraclePtr make_lp_residual(const Matrix &A, const Vector &b, double p) {
  check_shapes(A, b);
  dual_exponent(p);
  return std::make_shared<LpResidual>(A, b, p);
}

OraclePtr make_logistic(const Matrix &A, const Vector &labels) {
  return make_logistic(A, labels, NormedSpace::lp(std::max<Eigen::Index>(A.cols(), 1), 2.0));
}

OraclePtr make_logistic(const Matrix &A, const Vector &labels, const NormedSpace &space) {
  check_shapes(A, labels);
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw InvalidInput("logistic: label " + std::to_string(i) + " is not +1 or -1");
  if (space.dim() != A.cols())
    throw InvalidInput("logistic: space dimension differs from A's column count");
  return std::make_shared<Logistic>(A, labels, space);
}

OraclePtr make_function_oracle(NormedSpace space, std::function<double(const Vector &)> f,
                               std::function<Vector(const Vector &)> grad,
                               std::optional<Regularity> regularity, std::string description) {
  return std::make_shared<FunctionOracle>(space, std::move(f), std::move(grad), regularity,
                                          std::move(description));
}

double finite_diff_check(const SmoothOracle &oracle, const Vector &x, double h) {
  if (h <= 0.0)
    h = 1e-5 * (1.0 + (x.size() ? x.cwiseAbs().maxCoeff() : 0.0));
  const Vector g = oracle.gradient(x);
  const double scale = std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fd = (oracle.value(xp) - oracle.value(xm)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
    worst = std::max(worst, std::abs(g[i] - fd) / scale);
  }
  return worst;
}

OperatorNormDiagnostics operator_norm_diagnostics(const Matrix &A, int max_iters, double tol) {
  OperatorNormDiagnostics out;
  if (A.size() == 0)
    return out;
  out.max_abs_entry = A.cwiseAbs().maxCoeff();
  Vector v = Vector::Ones(A.cols()) / std::sqrt(static_cast<double>(A.cols()));
  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    ++out.power_iterations;
    Vector w = A.transpose() * (A * v);
    const double n = w.norm();
    if (n == 0.0)
      break;
    const double next = std::sqrt(v.dot(w));
    v = w / n;
    const bool done = std::abs(next - est) <= tol * std::max(1.0, next);
    est = next;
    if (done)
      break;
  }
  out.spectral_estimate = est;
  return out;
}

} // namespace compcomp
