#include "compcomp/regularizers.hpp"

#include "compcomp/errors.hpp"

#include <cmath>
#include <string>

namespace compcomp {

namespace {

double power_q(double p) { return p <= 2.0 ? 2.0 : p; }
double power_scale(double p) { return p <= 2.0 ? 1.0 / (p - 1.0) : 1.0; }
double scaffold_weight(double p) { return p <= 2.0 ? 1.0 : std::pow(2.0, p - 2.0); }

void check_nonneg(double v, const char *name) {
  if (!std::isfinite(v) || v < 0.0)
    throw InvalidInput(std::string(name) + " must be finite and nonnegative");
}

double soft(double t, double tau) {
  const double m = std::abs(t) - tau;
  return m > 0.0 ? (t > 0.0 ? m : -m) : 0.0;
}

} // namespace

double power_functional(const NormedSpace &space, const Vector &w) {
  const double q = power_q(space.p);
  return power_scale(space.p) * std::pow(space.norm(w), q) / q;
}

Vector power_functional_gradient(const NormedSpace &space, const Vector &w) {
  return power_scale(space.p) * space.duality_map(w, power_q(space.p));
}

Regularizer Regularizer::power_of_norm(const NormedSpace &space, double lambda, Vector center) {
  check_nonneg(lambda, "lambda");
  if (space.kind != NormedSpace::Kind::VectorLp)
    throw InvalidInput("power_of_norm needs a vector l_p space; use schatten_power");
  space.check_point(center);
  Regularizer r;
  r.kind = Kind::PowerOfNorm;
  r.space = space;
  r.lambda = lambda;
  r.center = std::move(center);
  return r;
}

Regularizer Regularizer::power_of_norm(const NormedSpace &space, double lambda) {
  return power_of_norm(space, lambda, Vector::Zero(space.dim()));
}

Regularizer Regularizer::schatten_power(const NormedSpace &space, double lambda, Vector center) {
  check_nonneg(lambda, "lambda");
  if (space.kind != NormedSpace::Kind::SchattenP)
    throw InvalidInput("schatten_power needs a Schatten space");
  space.check_point(center);
  Regularizer r;
  r.kind = Kind::SchattenPower;
  r.space = space;
  r.lambda = lambda;
  r.center = std::move(center);
  return r;
}

Regularizer Regularizer::power(const NormedSpace &space, double lambda, Vector center) {
  if (space.kind == NormedSpace::Kind::SchattenP)
    return schatten_power(space, lambda, std::move(center));
  return power_of_norm(space, lambda, std::move(center));
}

Regularizer Regularizer::elastic_net(Eigen::Index dim, double lambda1, double lambda2) {
  check_nonneg(lambda1, "lambda1");
  check_nonneg(lambda2, "lambda2");
  Regularizer r;
  r.kind = Kind::ElasticNet;
  r.space = NormedSpace::lp(dim, 2.0);
  r.lambda = lambda2;
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.center = Vector::Zero(dim);
  return r;
}

Regularizer Regularizer::l1_only(Eigen::Index dim, double lambda1) {
  check_nonneg(lambda1, "lambda1");
  Regularizer r;
  r.kind = Kind::L1Only;
  r.space = NormedSpace::lp(dim, 2.0);
  r.lambda1 = lambda1;
  r.center = Vector::Zero(dim);
  return r;
}

double Regularizer::q() const { return is_power() ? power_q(space.p) : 2.0; }

double Regularizer::modulus() const {
  switch (kind) {
  case Kind::PowerOfNorm:
  case Kind::SchattenPower:
    return space.p <= 2.0 ? lambda : lambda * std::pow(2.0, 2.0 - space.p);
  case Kind::ElasticNet:
    return lambda2;
  case Kind::L1Only:
    return 0.0;
  }
  return 0.0;
}

double Regularizer::value(const Vector &x) const {
  space.check_point(x);
  switch (kind) {
  case Kind::PowerOfNorm:
  case Kind::SchattenPower:
    return lambda == 0.0 ? 0.0 : lambda * power_functional(space, x - center);
  case Kind::ElasticNet:
    return 0.5 * lambda2 * x.squaredNorm() + lambda1 * x.lpNorm<1>();
  case Kind::L1Only:
    return lambda1 * x.lpNorm<1>();
  }
  return 0.0;
}

Vector Regularizer::gradient(const Vector &x) const {
  if (!differentiable())
    throw Unsupported("regularizer with an l1 term has no gradient");
  space.check_point(x);
  if (lambda == 0.0)
    return Vector::Zero(x.size());
  return lambda * power_functional_gradient(space, x - center);
}

double ScaffoldFunction::value(const Vector &u) const {
  space.check_point(u);
  if (kind == Kind::Euclidean)
    return 0.5 * weight * (u - anchor).squaredNorm();
  const Vector a = anchor - center;
  const double d = power_functional(space, u - center) - power_functional(space, a) -
                   power_functional_gradient(space, a).dot(u - anchor);
  return weight * std::max(d, 0.0);
}

Vector ScaffoldFunction::gradient(const Vector &u) const {
  space.check_point(u);
  if (kind == Kind::Euclidean)
    return weight * (u - anchor);
  return weight * (power_functional_gradient(space, u - center) -
                   power_functional_gradient(space, anchor - center));
}

ScaffoldFunction make_scaffold(const Regularizer &reg, const Vector &x0) {
  reg.space.check_point(x0);
  ScaffoldFunction s;
  s.space = reg.space;
  s.anchor = x0;
  s.center = reg.center;
  s.q = reg.q();
  if (reg.is_power()) {
    s.kind = ScaffoldFunction::Kind::PowerBregman;
    s.weight = scaffold_weight(reg.space.p);
  } else {
    s.kind = ScaffoldFunction::Kind::Euclidean;
    s.weight = 1.0;
  }
  return s;
}

ScaffoldFunction make_scaffold(const Regularizer &reg) { return make_scaffold(reg, reg.center); }

double bregman(const Regularizer &reg, const Vector &u, const Vector &v) {
  if (!reg.differentiable())
    throw Unsupported("Bregman divergence requested for a regularizer with an l1 term");
  return reg.value(u) - reg.value(v) - reg.gradient(v).dot(u - v);
}

Vector composite_prox(const Regularizer &reg, const ScaffoldFunction &sc, const Vector &z,
                      double A, double m0) {
  if (!(A > 0.0) || !std::isfinite(A))
    throw InvalidInput("composite_prox: A must be positive");
  if (!(m0 >= 0.0) || !std::isfinite(m0))
    throw InvalidInput("composite_prox: m0 must be nonnegative");
  reg.space.check_point(z);

  if (reg.is_power()) {
    if (sc.kind != ScaffoldFunction::Kind::PowerBregman)
      throw Unsupported("power regularizer needs a Bregman scaffold");
    if (sc.center.size() != reg.center.size() || (sc.center - reg.center).cwiseAbs().maxCoeff() != 0.0)
      throw Unsupported("scaffold and regularizer must share the power functional's center");
    // <z, u> + A lambda P(u - c) + m0 w [P(u - c) - <grad P(a - c), u>] + const
    Vector zl = z;
    if (m0 > 0.0)
      zl -= m0 * sc.weight * power_functional_gradient(reg.space, sc.anchor - reg.center);
    const double coef = A * reg.lambda + m0 * sc.weight;
    if (coef == 0.0) {
      if (zl.cwiseAbs().maxCoeff() == 0.0)
        return reg.center;
      throw UnboundedSubproblem("composite_prox: zero curvature with nonzero linear term");
    }
    // P(w) = s (1/q)||w||^q, so the minimizer solves s coef J_q(w) = -zl
    const double s = reg.space.p <= 2.0 ? 1.0 / (reg.space.p - 1.0) : 1.0;
    return reg.center + reg.space.inverse_duality_map(-zl / (coef * s), reg.q());
  }

  if (sc.kind != ScaffoldFunction::Kind::Euclidean)
    throw Unsupported("l1-type regularizer needs a Euclidean scaffold");
  const double tau = A * reg.lambda1;
  const double denom = A * reg.lambda2 + m0 * sc.weight;
  Vector u(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double t = -(z[i] - m0 * sc.weight * sc.anchor[i]);
    if (denom == 0.0) {
      if (std::abs(t) > tau)
        throw UnboundedSubproblem("composite_prox: linear term exceeds the l1 weight");
      u[i] = 0.0;
    } else {
      u[i] = soft(t, tau) / denom;
    }
  }
  return u;
}

double prox_objective(const Regularizer &reg, const ScaffoldFunction &scaffold, const Vector &z,
                      double A, double m0, const Vector &u) {
  return z.dot(u) + A * reg.value(u) + (m0 == 0.0 ? 0.0 : m0 * scaffold.value(u));
}

} // namespace compcomp
