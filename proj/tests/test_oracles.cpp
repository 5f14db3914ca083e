#include "helpers.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/oracles.hpp>

#include <doctest.h>

using namespace compcomp;
using namespace testutil;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v)
    x[i++] = a;
  return x;
}

// Hölder gradient bound over random pairs; returns worst ratio lhs / (L r^{kappa-1}).
double holder_ratio(const SmoothOracle &f, std::mt19937_64 &rng, int pairs, double scale) {
  const Regularity reg = *f.regularity();
  const NormedSpace &s = f.space();
  double worst = 0;
  for (int t = 0; t < pairs; ++t) {
    const Vector x = randn(rng, s.dim(), scale), y = randn(rng, s.dim(), scale * (1 + t % 3));
    const double lhs = s.dual_norm(f.gradient(x) - f.gradient(y));
    const double rhs = reg.L * std::pow(s.norm(x - y), reg.kappa - 1);
    worst = std::max(worst, lhs / rhs);
  }
  return worst;
}

} // namespace

TEST_SUITE("oracles") {

TEST_CASE("least squares examples") {
  auto f = make_least_squares(Matrix::Identity(2, 2), Vector::Zero(2));
  CHECK(f->value(vec({1, 1})) == doctest::Approx(1.0));
  CHECK((f->gradient(vec({1, 1})) - vec({1, 1})).norm() == 0.0);

  auto g = make_least_squares(Matrix::Identity(2, 2), vec({1, 2}));
  CHECK(g->value(vec({1, 2})) == 0.0);
  CHECK(g->gradient(vec({1, 2})).norm() == 0.0);

  Matrix A(2, 2);
  A << 1, 2, 0, 1;
  auto h = make_least_squares(A, vec({1, 0}));
  CHECK(h->value(vec({1, 1})) == doctest::Approx(2.5));
  CHECK((h->gradient(vec({1, 1})) - vec({2, 5})).norm() <= 1e-15);
  CHECK(finite_diff_check(*h, vec({1, 1})) <= 1e-6);
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(make_least_squares(Matrix::Identity(3, 2), Vector::Zero(2)), InvalidInput);
  auto f = make_least_squares(Matrix::Identity(3, 2), Vector::Zero(3));
  CHECK_THROWS_AS(f->value(Vector::Zero(3)), InvalidInput);
}

TEST_CASE("correlated least squares") {
  std::mt19937_64 rng(21);
  auto f = make_correlated_ls(Matrix::Identity(3, 3), Vector::Zero(3), 2.0);
  const Vector x = randn(rng, 3);
  CHECK(f->value(x) == doctest::Approx(0.5 * x.squaredNorm()));
  CHECK((f->gradient(x) - x).norm() <= 1e-14);

  const Matrix A = randm(rng, 4, 3);
  const Vector xs = randn(rng, 3);
  auto g = make_correlated_ls(A, A * xs, 3.0);
  CHECK(g->value(xs) <= 1e-20);
  CHECK(g->gradient(xs).norm() <= 1e-10);

  auto h = make_correlated_ls(Matrix::Identity(2, 2), Vector::Zero(2), 4.0);
  const Vector one = Vector::Ones(2);
  CHECK(h->value(one) == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-14));
  // duality_map((1,1), 4, 2) = |x_i|^3 ||x||_4^{-2} = 2^{-1/2} each
  CHECK((h->gradient(one) - Vector::Constant(2, 1.0 / std::sqrt(2.0))).norm() <= 1e-14);
  CHECK(finite_diff_check(*h, one) <= 1e-5);
  CHECK(h->space().p == doctest::Approx(4.0 / 3.0));

  CHECK_THROWS_AS(make_correlated_ls(A, A * xs, 1.5), InvalidInput);
}

TEST_CASE("lp residual") {
  std::mt19937_64 rng(22);
  const Matrix A = randm(rng, 5, 3);
  const Vector b = randn(rng, 5), x = randn(rng, 3);
  auto f2 = make_lp_residual(A, b, 2.0);
  auto ls = make_least_squares(A, b);
  CHECK(f2->value(x) == doctest::Approx(ls->value(x)).epsilon(1e-14));
  CHECK((f2->gradient(x) - ls->gradient(x)).norm() <= 1e-12);

  auto f3 = make_lp_residual(Matrix::Identity(3, 3), Vector::Zero(3), 3.0);
  CHECK(f3->value(x) == doctest::Approx(0.5 * std::pow(naive_pnorm(x, 3), 2)));
  CHECK((f3->gradient(x) - duality_map(x, 3.0, 2.0)).norm() <= 1e-14);
  CHECK(finite_diff_check(*f3, x) <= 1e-5);
  CHECK(f3->regularity()->kappa == 2.0);

  auto f15 = make_lp_residual(A, b, 1.5);
  CHECK(f15->regularity()->kappa == 1.5);
  const Vector xs = randn(rng, 3);
  auto exact = make_lp_residual(A, A * xs, 1.5);
  CHECK(exact->value(xs) <= 1e-20);
}

TEST_CASE("logistic") {
  std::mt19937_64 rng(23);
  const Matrix A = randm(rng, 6, 3);
  Vector y(6);
  y << 1, -1, 1, 1, -1, -1;
  auto f = make_logistic(A, y);
  CHECK(f->value(Vector::Zero(3)) == doctest::Approx(6 * std::log(2.0)));
  CHECK((f->gradient(Vector::Zero(3)) + 0.5 * A.transpose() * y).norm() <= 1e-14);

  Matrix a(1, 2);
  a << 1, 0;
  auto g = make_logistic(a, Vector::Ones(1));
  CHECK(g->value(vec({30, 0})) < 1e-12);
  CHECK(g->value(vec({1, 0})) == doctest::Approx(0.31326168751822).epsilon(1e-12));
  CHECK(g->gradient(vec({1, 0}))[0] == doctest::Approx(-0.2689414213699951).epsilon(1e-12));
  CHECK(g->gradient(vec({1, 0}))[1] == 0.0);
  CHECK(finite_diff_check(*g, vec({1, 0})) <= 1e-5);
  // extreme margins stay finite
  CHECK(std::isfinite(g->value(vec({-800, 0}))));
  CHECK(g->value(vec({-800, 0})) == doctest::Approx(800.0));

  y[2] = 0.5;
  CHECK_THROWS_AS(make_logistic(A, y), InvalidInput);
}

TEST_CASE("finite_diff_check") {
  std::mt19937_64 rng(24);
  const Matrix A = randm(rng, 7, 4);
  auto ls = make_least_squares(A, randn(rng, 7));
  CHECK(finite_diff_check(*ls, randn(rng, 4), 1e-5) <= 1e-6);
  Vector y = Vector::Ones(7);
  y[0] = -1;
  auto lg = make_logistic(A, y);
  CHECK(finite_diff_check(*lg, randn(rng, 4), 1e-5) <= 1e-5);
  auto zero = make_function_oracle(
      NormedSpace::lp(3, 2.0), [](const Vector &) { return 0.0; },
      [](const Vector &x) { return Vector::Zero(x.size()); });
  CHECK(finite_diff_check(*zero, randn(rng, 3)) == 0.0);
}

TEST_CASE("query counter counts gradient calls only") {
  auto f = make_least_squares(Matrix::Identity(2, 2), Vector::Zero(2));
  CHECK(f->queries() == 0);
  f->value(Vector::Ones(2));
  CHECK(f->queries() == 0);
  for (int i = 0; i < 5; ++i)
    f->gradient(Vector::Ones(2));
  CHECK(f->queries() == 5);
  f->reset_queries();
  CHECK(f->queries() == 0);
}

TEST_CASE("gradients are consistent") {
  std::mt19937_64 rng(25);
  auto f = make_lp_residual(randm(rng, 5, 4), randn(rng, 5), 3.0);
  const Vector x = randn(rng, 4);
  CHECK((f->gradient(x) - f->gradient(x)).norm() == 0.0);
}

TEST_CASE("declared regularity holds on sampled pairs") {
  std::mt19937_64 rng(26);
  const Matrix A = randm(rng, 8, 5);
  const Vector b = randn(rng, 8);
  std::vector<OraclePtr> oracles = {
      make_least_squares(A, b),
      make_least_squares(A, b, NormedSpace::lp(5, 1.3)),
      make_least_squares(A, b, NormedSpace::lp(5, 3.0)),
      make_correlated_ls(A, b, 3.0),
      make_correlated_ls(A, b, 8.0),
      make_lp_residual(A, b, 1.5),
      make_lp_residual(A, b, 3.0),
  };
  Vector y = Vector::Ones(8);
  y.head(4) *= -1;
  oracles.push_back(make_logistic(A, y));
  for (const auto &f : oracles) {
    CAPTURE(f->description());
    CAPTURE(f->space().p);
    REQUIRE(f->regularity());
    CHECK(holder_ratio(*f, rng, 500, 1.0) <= 1.0 + 1e-9);
    CHECK(holder_ratio(*f, rng, 100, 1e-3) <= 1.0 + 1e-9);
  }
}

TEST_CASE("cocoercivity for kappa = 2 oracles") {
  std::mt19937_64 rng(27);
  const Matrix A = randm(rng, 8, 5);
  const Vector b = randn(rng, 8);
  for (const OraclePtr &f : {make_least_squares(A, b), make_least_squares(A, b, NormedSpace::lp(5, 1.5)),
                             make_correlated_ls(A, b, 4.0)}) {
    const double L = f->regularity()->L;
    const NormedSpace &s = f->space();
    for (int t = 0; t < 300; ++t) {
      const Vector x = randn(rng, 5), y = randn(rng, 5);
      const Vector gx = f->gradient(x);
      const double lhs = std::pow(s.dual_norm(f->gradient(y) - gx), 2) / (2 * L);
      const double rhs = f->value(y) - f->value(x) - gx.dot(y - x);
      CHECK(lhs <= rhs + 1e-10 * (1 + std::abs(f->value(y))));
    }
  }
}

TEST_CASE("operator norm diagnostics") {
  Matrix A = Matrix::Zero(3, 2);
  A(0, 0) = 3;
  A(1, 1) = -2;
  const auto d = operator_norm_diagnostics(A);
  CHECK(d.spectral_estimate == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(d.max_abs_entry == 3.0);
  CHECK(lp_operator_bound(A, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  // Riesz-Thorin bound dominates the true l_p -> l_p norm on samples
  std::mt19937_64 rng(28);
  const Matrix B = randm(rng, 4, 4);
  for (double p : {1.3, 3.0}) {
    const double bound = lp_operator_bound(B, p);
    for (int t = 0; t < 200; ++t) {
      const Vector x = randn(rng, 4);
      CHECK(lp_norm(B * x, p) <= bound * lp_norm(x, p) * (1 + 1e-12));
    }
  }
}

} // TEST_SUITE
