#include "compcomp/spaces.hpp"

#include "compcomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace compcomp {

namespace {

void check_exponent(double p, const char *what) {
  if (!std::isfinite(p) || p <= 1.0)
    throw InvalidInput(std::string(what) + ": exponent must lie in (1, inf), got " +
                       std::to_string(p));
}

void check_finite(const Vector &x) {
  if (!x.allFinite())
    throw InvalidInput("non-finite component in input vector");
}

double signum(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Eigen::Map<const Matrix> as_matrix(const Vector &x, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

Vector flatten(const Matrix &X) { return Eigen::Map<const Vector>(X.data(), X.size()); }

} // namespace

double dual_exponent(double p) {
  check_exponent(p, "dual_exponent");
  return p / (p - 1.0);
}

double lp_norm(const Vector &x, double p) {
  check_exponent(p, "lp_norm");
  check_finite(x);
  if (x.size() == 0)
    return 0.0;
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0)
    return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Vector duality_map(const Vector &x, double p, double q) {
  check_exponent(q, "duality_map");
  const double n = lp_norm(x, p);
  Vector g = Vector::Zero(x.size());
  if (n == 0.0)
    return g;
  // g_i = sign(x_i) (|x_i|/n)^{p-1} n^{q-1}, rescaled to avoid overflow
  const double scale = std::pow(n, q - 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0)
      g[i] = signum(x[i]) * std::pow(std::abs(x[i]) / n, p - 1.0) * scale;
  return g;
}

double l1_surrogate_exponent(Eigen::Index d) {
  if (d < 3)
    throw InvalidInput("l1 surrogate exponent needs d >= 3");
  const double l = std::log(static_cast<double>(d));
  return l / (l - 1.0);
}

double linf_surrogate_exponent(Eigen::Index d) {
  if (d < 3)
    throw InvalidInput("l-infinity surrogate exponent needs d >= 3");
  return std::log(static_cast<double>(d));
}

Svd jacobi_svd(const Matrix &X, double tol, int max_sweeps) {
  if (!X.allFinite())
    throw InvalidInput("non-finite entry in matrix");
  if (X.rows() < X.cols()) {
    Svd t = jacobi_svd(X.transpose(), tol, max_sweeps);
    std::swap(t.U, t.V);
    return t;
  }
  const Eigen::Index m = X.rows(), n = X.cols();
  if (max_sweeps < 0)
    max_sweeps = static_cast<int>(100 * std::max<Eigen::Index>(n, 1));

  Matrix W = X;
  Matrix V = Matrix::Identity(n, n);
  Svd out;
  // columns below this squared norm are rounding noise and never need rotating
  const double negligible = std::pow(std::numeric_limits<double>::epsilon() * X.norm(), 2);
  bool converged = (n < 2);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    ++out.sweeps;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = W.col(i).squaredNorm();
        const double beta = W.col(j).squaredNorm();
        const double gamma = W.col(i).dot(W.col(j));
        if (gamma == 0.0 || std::min(alpha, beta) <= negligible ||
            std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta))
          continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < m; ++r) {
          const double wi = W(r, i), wj = W(r, j);
          W(r, i) = c * wi - s * wj;
          W(r, j) = s * wi + c * wj;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vi = V(r, i), vj = V(r, j);
          V(r, i) = c * vi - s * vj;
          V(r, j) = s * vi + c * vj;
        }
      }
    }
  }
  if (!converged) {
    throw NumericalError("jacobi_svd: no convergence after " + std::to_string(out.sweeps) +
                         " sweeps on a " + std::to_string(m) + "x" + std::to_string(n) +
                         " matrix");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Vector norms(n);
  for (Eigen::Index j = 0; j < n; ++j)
    norms[j] = W.col(j).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms[a] > norms[b]; });

  out.U = Matrix::Zero(m, n);
  out.V = Matrix(n, n);
  out.sigma = Vector(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index j = order[static_cast<std::size_t>(k)];
    out.sigma[k] = norms[j];
    out.V.col(k) = V.col(j);
    if (norms[j] > 0.0)
      out.U.col(k) = W.col(j) / norms[j];
  }
  return out;
}

double schatten_norm(const Matrix &X, double p) {
  check_exponent(p, "schatten_norm");
  if (X.size() == 0)
    return 0.0;
  if (X.rows() == 1 || X.cols() == 1) {
    if (!X.allFinite())
      throw InvalidInput("non-finite entry in matrix");
    return X.norm(); // the only singular value
  }
  return lp_norm(jacobi_svd(X).sigma, p);
}

Matrix schatten_duality_map(const Matrix &X, double p, double q) {
  check_exponent(p, "schatten_duality_map");
  if (X.size() == 0 || X.cwiseAbs().maxCoeff() == 0.0)
    return Matrix::Zero(X.rows(), X.cols());
  if (X.rows() == 1 || X.cols() == 1) {
    if (!X.allFinite())
      throw InvalidInput("non-finite entry in matrix");
    // U sigma^{q-1} V^T with U V^T = X / sigma
    const double sigma = X.norm();
    return X * std::pow(sigma, q - 2.0);
  }
  const Svd s = jacobi_svd(X);
  const Vector g = duality_map(s.sigma, p, q);
  return s.U * g.asDiagonal() * s.V.transpose();
}

NormedSpace NormedSpace::lp(Eigen::Index dim, double p) {
  check_exponent(p, "NormedSpace::lp");
  if (dim < 1)
    throw InvalidInput("NormedSpace::lp: dimension must be positive");
  return NormedSpace{Kind::VectorLp, p, dim, 1};
}

NormedSpace NormedSpace::schatten(Eigen::Index rows, Eigen::Index cols, double p) {
  check_exponent(p, "NormedSpace::schatten");
  if (rows < 1 || cols < 1)
    throw InvalidInput("NormedSpace::schatten: shape must be positive");
  return NormedSpace{Kind::SchattenP, p, rows, cols};
}

double NormedSpace::dual_p() const { return dual_exponent(p); }

NormedSpace NormedSpace::dual() const {
  NormedSpace d = *this;
  d.p = dual_p();
  return d;
}

void NormedSpace::check_point(const Vector &x) const {
  if (x.size() != dim())
    throw InvalidInput("point has dimension " + std::to_string(x.size()) + ", space expects " +
                       std::to_string(dim()));
}

double NormedSpace::norm(const Vector &x) const {
  check_point(x);
  if (kind == Kind::VectorLp)
    return lp_norm(x, p);
  return schatten_norm(as_matrix(x, rows, cols), p);
}

double NormedSpace::dual_norm(const Vector &g) const { return dual().norm(g); }

Vector NormedSpace::duality_map(const Vector &x, double q) const {
  check_point(x);
  if (kind == Kind::VectorLp)
    return compcomp::duality_map(x, p, q);
  return flatten(schatten_duality_map(as_matrix(x, rows, cols), p, q));
}

Vector NormedSpace::inverse_duality_map(const Vector &g, double q) const {
  return dual().duality_map(g, dual_exponent(q));
}

} // namespace compcomp
