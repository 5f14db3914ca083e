#pragma once

#include <compcomp/spaces.hpp>

#include <cmath>
#include <functional>
#include <random>

namespace testutil {

using compcomp::Matrix;
using compcomp::Vector;

inline Vector randn(std::mt19937_64 &rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = N(rng);
  return v;
}

inline Matrix randm(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i)
    M.data()[i] = N(rng);
  return M;
}

inline Matrix random_orthogonal(std::mt19937_64 &rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(randm(rng, n, n));
  return qr.householderQ();
}

// Central differences of a scalar function; independent of the library's checker.
inline Vector numeric_gradient(const std::function<double(const Vector &)> &f, const Vector &x,
                               double h = 1e-6) {
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

// Plain-sum p-norm, no rescaling.
inline double naive_pnorm(const Vector &x, double p) {
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace testutil
