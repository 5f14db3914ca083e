#include "compcomp/apps.hpp"

#include "compcomp/errors.hpp"

#include <cmath>

namespace compcomp {

namespace {

void check_data(const Matrix &A, const Vector &b) {
  if (A.rows() != b.size())
    throw InvalidInput("dimension mismatch: A has " + std::to_string(A.rows()) + " rows, b has " +
                       std::to_string(b.size()) + " entries");
}

void check_penalty(double v, const char *name) {
  if (!std::isfinite(v) || v < 0.0)
    throw InvalidInput(std::string(name) + " must be finite and nonnegative");
}

double power_coefficient(double lambda, double p) { return p <= 2.0 ? lambda * (p - 1.0) : lambda; }

} // namespace

const char *to_string(ProblemSpec::Kind k) {
  switch (k) {
  case ProblemSpec::Kind::ElasticNet:
    return "elastic_net";
  case ProblemSpec::Kind::Bridge:
    return "bridge";
  case ProblemSpec::Kind::Dantzig:
    return "dantzig";
  case ProblemSpec::Kind::LpRegression:
    return "lp_regression";
  case ProblemSpec::Kind::Correlated:
    return "correlated";
  case ProblemSpec::Kind::Schatten:
    return "schatten";
  }
  return "unknown";
}

ProblemSpec build_elastic_net(const Matrix &A, const Vector &b, double lambda1, double lambda2) {
  check_data(A, b);
  check_penalty(lambda1, "lambda1");
  check_penalty(lambda2, "lambda2");
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::ElasticNet;
  s.name = lambda2 > 0.0 ? "elastic_net" : "lasso";
  s.space = NormedSpace::lp(A.cols(), 2.0);
  s.oracle = make_least_squares(A, b);
  s.reg = lambda2 > 0.0 ? Regularizer::elastic_net(A.cols(), lambda1, lambda2)
                        : Regularizer::l1_only(A.cols(), lambda1);
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = A;
  s.b = b;
  s.metadata = {{"lambda1", lambda1}, {"lambda2", lambda2}, {"p", 2.0}};
  return s;
}

ProblemSpec build_bridge(const Matrix &A, const Vector &b, double lambda, double p) {
  check_data(A, b);
  check_penalty(lambda, "lambda");
  const NormedSpace space = NormedSpace::lp(A.cols(), p);
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::Bridge;
  s.name = "bridge";
  s.space = space;
  s.oracle = make_least_squares(A, b, space);
  s.reg = Regularizer::power_of_norm(space, power_coefficient(lambda, p));
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = A;
  s.b = b;
  s.metadata = {{"lambda", lambda}, {"p", p}, {"modulus", s.reg.modulus()}};
  return s;
}

ProblemSpec build_dantzig(const Matrix &A, const Vector &b, double lambda, double approx_eps) {
  check_data(A, b);
  check_penalty(lambda, "lambda");
  const Eigen::Index d = A.cols();
  if (d < 3)
    throw InvalidInput("dantzig: needs d >= 3");
  if (!(approx_eps > 0.0) || !(approx_eps < 1.0))
    throw InvalidInput("dantzig: approx_eps must lie in (0, 1)");
  const double p_star = std::log(static_cast<double>(d)) / std::log1p(approx_eps);
  if (!(p_star > 2.0))
    throw InvalidInput("dantzig: p = dual(ln d / ln(1 + eps)) falls outside (1, 2)");
  const double p = dual_exponent(p_star);
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::Dantzig;
  s.name = "dantzig";
  s.space = NormedSpace::lp(d, p);
  s.oracle = make_correlated_ls(A, b, p_star);
  s.reg = Regularizer::power_of_norm(s.space, lambda * (p - 1.0));
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = A;
  s.b = b;
  s.metadata = {{"lambda", lambda},
                {"approx_eps", approx_eps},
                {"p", p},
                {"p_star", p_star},
                {"modulus", s.reg.modulus()}};
  return s;
}

ProblemSpec build_lp_regression(const Matrix &A, const Vector &b, double p) {
  check_data(A, b);
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::LpRegression;
  s.name = "lp_regression";
  s.space = NormedSpace::lp(A.cols(), p);
  s.oracle = make_lp_residual(A, b, p);
  s.reg = Regularizer::power_of_norm(s.space, 0.0);
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = A;
  s.b = b;
  s.metadata = {{"p", p}, {"q_bar", std::max(2.0, p)}};
  return s;
}

ProblemSpec build_correlated(const Matrix &A, const Vector &b, double p_star) {
  check_data(A, b);
  const NormedSpace space = NormedSpace::lp(A.cols(), p_star);
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::Correlated;
  s.name = "correlated";
  s.space = space;
  s.oracle = make_least_squares(A, b, space);
  s.reg = Regularizer::power_of_norm(space, 0.0);
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = A;
  s.b = b;
  s.gradnorm_task = true;
  s.metadata = {{"p_star", p_star}, {"p", dual_exponent(p_star)}};
  return s;
}

LinearMap LinearMap::from_sensing(const std::vector<Matrix> &sensing) {
  if (sensing.empty())
    throw InvalidInput("sensing operator needs at least one matrix");
  LinearMap m;
  m.rows = sensing.front().rows();
  m.cols = sensing.front().cols();
  m.lifted.resize(static_cast<Eigen::Index>(sensing.size()), m.rows * m.cols);
  for (std::size_t j = 0; j < sensing.size(); ++j) {
    const Matrix &S = sensing[j];
    if (S.rows() != m.rows || S.cols() != m.cols)
      throw InvalidInput("sensing matrix " + std::to_string(j) + " has a different shape");
    m.lifted.row(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(S.data(), S.size()).transpose();
  }
  return m;
}

LinearMap LinearMap::from_mask(const Matrix &mask) {
  LinearMap m;
  m.rows = mask.rows();
  m.cols = mask.cols();
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < mask.size(); ++i)
    k += mask.data()[i] != 0.0;
  if (k == 0)
    throw InvalidInput("mask selects no entries");
  m.lifted = Matrix::Zero(k, mask.size());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < mask.size(); ++i)
    if (mask.data()[i] != 0.0)
      m.lifted(r++, i) = 1.0;
  return m;
}

ProblemSpec build_schatten_problem(const LinearMap &op, const Vector &b, double lambda, double p) {
  check_data(op.lifted, b);
  check_penalty(lambda, "lambda");
  const NormedSpace space = NormedSpace::schatten(op.rows, op.cols, p);
  ProblemSpec s;
  s.kind = ProblemSpec::Kind::Schatten;
  s.name = "schatten";
  s.space = space;
  s.oracle = make_least_squares(op.lifted, b, space);
  s.reg = Regularizer::schatten_power(space, power_coefficient(lambda, p), Vector::Zero(space.dim()));
  s.scaffold = make_scaffold(s.reg, s.start());
  s.A = op.lifted;
  s.b = b;
  s.metadata = {{"lambda", lambda},
                {"p", p},
                {"rows", static_cast<double>(op.rows)},
                {"cols", static_cast<double>(op.cols)}};
  return s;
}

double tradeoff_check(const ProblemSpec &spec, const Vector &x) {
  spec.space.check_point(x);
  const Vector r = spec.A.transpose() * (spec.A * x - spec.b);
  if (spec.kind == ProblemSpec::Kind::Bridge) {
    const double lambda = spec.metadata.at("lambda");
    const double p = spec.space.p;
    const double fit = lp_norm(r, dual_exponent(p));
    const double nx = lp_norm(x, p);
    return std::abs(fit - lambda * (p <= 2.0 ? nx : std::pow(nx, p - 1.0)));
  }
  if (spec.kind == ProblemSpec::Kind::Dantzig) {
    const double lambda = spec.metadata.at("lambda");
    const double e = spec.metadata.at("approx_eps");
    const double a_max = (spec.A.transpose() * spec.A).cwiseAbs().maxCoeff();
    const double factor = ((1.0 + e) / (1.0 - e)) * ((1.0 + e) / (1.0 - e));
    return factor * a_max * r.cwiseAbs().maxCoeff() - lambda * x.lpNorm<1>();
  }
  throw Unsupported(std::string("tradeoff_check: not defined for ") + to_string(spec.kind));
}

} // namespace compcomp
