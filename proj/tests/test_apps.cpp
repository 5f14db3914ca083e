#include "helpers.hpp"

#include <compcomp/apps.hpp>
#include <compcomp/errors.hpp>
#include <compcomp/gradnorm.hpp>
#include <compcomp/solver.hpp>
#include <compcomp/verification.hpp>

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

SolverResult solve(const ProblemSpec &s, int iters, double eps = 1e-12) {
  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.max_iters = iters;
  return agd_plus(*s.oracle, s.reg, s.scaffold, s.start(), cfg);
}

// worst uniform-convexity slack of the regularizer over random triples
double def2_worst(const ProblemSpec &s, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> U(0, 1);
  const Regularizer &r = s.reg;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const Vector x = randn(rng, s.space.dim()), y = randn(rng, s.space.dim());
    const double a = U(rng);
    const double slack = (1 - a) * r.value(x) + a * r.value(y) -
                         r.modulus() / r.q() * a * (1 - a) * std::pow(s.space.norm(y - x), r.q()) -
                         r.value((1 - a) * x + a * y);
    worst = std::min(worst, slack / (1 + std::abs(r.value(x)) + std::abs(r.value(y))));
  }
  return worst;
}

} // namespace

TEST_SUITE("apps") {

TEST_CASE("elastic net examples") {
  const Vector b = vec({2, -4, 1});
  const ProblemSpec ridge = build_elastic_net(Matrix::Identity(3, 3), b, 0.0, 1.0);
  CHECK((solve(ridge, 200).y - b / 2).norm() <= 1e-8);

  std::mt19937_64 rng(71);
  const Matrix A = randm(rng, 8, 5);
  const Vector c = randn(rng, 8);
  const double big = (A.transpose() * c).cwiseAbs().maxCoeff() * 1.01;
  CHECK(solve(build_elastic_net(A, c, big, 1.0), 300).y.norm() <= 1e-10);
  CHECK(solve(build_elastic_net(A, Vector::Zero(8), 0.5, 1.0), 50).y.norm() == 0.0);
  CHECK_THROWS_AS(build_elastic_net(A, c, -1.0, 1.0), InvalidInput);
  CHECK(build_elastic_net(A, c, 1.0, 0.0).reg.kind == Regularizer::Kind::L1Only);
}

TEST_CASE("bridge") {
  std::mt19937_64 rng(72);
  const Matrix A = randm(rng, 7, 4);
  const Vector b = randn(rng, 7);
  const ProblemSpec br = build_bridge(A, b, 0.8, 2.0);
  const ProblemSpec en = build_elastic_net(A, b, 0.0, 0.8);
  for (int t = 0; t < 10; ++t) {
    const Vector x = randn(rng, 4);
    CHECK(br.objective(x) == doctest::Approx(en.objective(x)).epsilon(1e-14));
  }
  CHECK(solve(build_bridge(A, Vector::Zero(7), 0.5, 1.5), 50).y.norm() == 0.0);
  CHECK_THROWS_AS(build_bridge(A, b, 1.0, 1.0), InvalidInput);

  const ProblemSpec s = build_bridge(Matrix::Identity(2, 2), vec({2, 0}), 1.0, 1.5);
  const ReferenceSolution ref = reference_solve(s, 1e-10, ReferenceMethod::Grid);
  const SolverResult r = solve(s, 2000, 1e-14);
  CHECK((r.y - ref.x_ref).norm() <= 1e-6);
  // (lambda/2)||x||_p^2 with p <= 2, (lambda/p)||x||_p^p above
  CHECK(build_bridge(A, b, 2.0, 1.5).reg.value(vec({1, 0, 0, 0})) == doctest::Approx(1.0));
  CHECK(build_bridge(A, b, 2.0, 4.0).reg.value(vec({1, 0, 0, 0})) == doctest::Approx(0.5));
}

TEST_CASE("tradeoff identities") {
  const ProblemSpec s = build_bridge(Matrix::Identity(2, 2), vec({2, 0.5}), 1.0, 1.5);
  const ReferenceSolution ref = reference_solve(s);
  CHECK(tradeoff_check(s, ref.x_ref) <= 1e-6);
  CHECK(tradeoff_check(s, Vector::Zero(2)) == doctest::Approx(lp_norm(vec({2, 0.5}), 3.0)));
  const ProblemSpec z = build_bridge(Matrix::Identity(2, 2), vec({2, 0.5}), 0.0, 1.5);
  const Vector x = vec({0.3, -0.1});
  CHECK(tradeoff_check(z, x) == doctest::Approx(lp_norm(x - vec({2, 0.5}), 3.0)));
  CHECK_THROWS_AS(tradeoff_check(build_elastic_net(Matrix::Identity(2, 2), x, 1, 1), x), Unsupported);
}

TEST_CASE("dantzig") {
  std::mt19937_64 rng(73);
  const ProblemSpec big = build_dantzig(randm(rng, 4, 1024), randn(rng, 4), 1.0, 0.5);
  CHECK(big.metadata.at("p_star") == doctest::Approx(std::log(1024.0) / std::log(1.5)).epsilon(1e-14));
  CHECK(big.metadata.at("p_star") == doctest::Approx(17.09).epsilon(1e-3));
  CHECK(big.space.p == doctest::Approx(1.0622).epsilon(1e-4));
  CHECK(big.reg.modulus() == doctest::Approx(1.0 * (big.space.p - 1)).epsilon(1e-14));
  CHECK(big.metadata.at("modulus") == big.reg.modulus());

  const ProblemSpec zero = build_dantzig(Matrix::Identity(5, 5), Vector::Zero(5), 1.0, 0.3);
  CHECK(solve(zero, 20).y.norm() == 0.0);
  CHECK_THROWS_AS(build_dantzig(Matrix::Identity(2, 2), Vector::Zero(2), 1.0, 0.3), InvalidInput);
  CHECK_THROWS_AS(build_dantzig(Matrix::Identity(5, 5), Vector::Zero(5), 1.0, 1.5), InvalidInput);
  // ln 3 / ln 1.9 < 2 leaves p outside (1, 2)
  CHECK_THROWS_AS(build_dantzig(Matrix::Identity(3, 3), Vector::Zero(3), 1.0, 0.9), InvalidInput);

  const Matrix A = randm(rng, 6, 5);
  const ProblemSpec d = build_dantzig(A, randn(rng, 6), 0.5, 0.3);
  const ReferenceSolution ref = reference_solve(d);
  CHECK(tradeoff_check(d, ref.x_ref) >= 0.0);
}

TEST_CASE("lp regression") {
  const ProblemSpec s = build_lp_regression(Matrix::Identity(2, 2), vec({1, 1}), 4.0);
  CHECK(s.reg.lambda == 0.0);
  CHECK(s.scaffold.q == 4.0);
  // a quartic scaffold on a quadratic f needs a nonzero epsilon to keep M bounded
  const SolverResult r = solve(s, 3000, 1e-6);
  CHECK(s.oracle->value(r.y) <= 1e-6);

  std::mt19937_64 rng(74);
  const Matrix A = randm(rng, 10, 6);
  const Vector xs = randn(rng, 6);
  const ProblemSpec ls = build_lp_regression(A, A * xs, 2.0);
  const double L = ls.oracle->regularity()->L;
  const SolverResult q = solve(ls, 400);
  for (const auto &row : q.trace.rows)
    if (row.k >= 1)
      CHECK(row.obj <= 8 * L * xs.squaredNorm() / (row.k * row.k));
  CHECK(q.trace.rows.back().obj <= 1e-6);
}

TEST_CASE("correlated errors") {
  const ProblemSpec s = build_correlated(Matrix::Identity(3, 3), vec({1, -2, 0.5}), 1.5);
  CHECK(s.gradnorm_task);
  CHECK(s.oracle->gradient(Vector::Zero(3)) == -vec({1, -2, 0.5}));
  CHECK_THROWS_AS(reference_solve(s), Unsupported);

  std::mt19937_64 rng(75);
  const Matrix A = randm(rng, 10, 30);
  const ProblemSpec c = build_correlated(A, randn(rng, 10), 4.0 / 3.0);
  CHECK(c.metadata.at("p") == doctest::Approx(4.0));
  GradNormConfig cfg;
  cfg.epsilon = 1e-3;
  const GradNormResult r = minimize_grad_norm(*c.oracle, c.space, c.start(), cfg);
  CHECK(r.report.converged);
  CHECK(lp_norm(A.transpose() * (A * r.y - c.b), 4.0) <= 1e-3);
}

TEST_CASE("schatten problems") {
  std::mt19937_64 rng(76);
  const Matrix X = randm(rng, 3, 4);
  const LinearMap full = LinearMap::from_mask(Matrix::Ones(3, 4));
  const Vector obs = full.lifted * Eigen::Map<const Vector>(X.data(), 12);
  const ProblemSpec s = build_schatten_problem(full, obs, 1e-9, 1.5);
  const SolverResult r = solve(s, 3000);
  CHECK((r.y - Eigen::Map<const Vector>(X.data(), 12)).norm() <= 1e-6);

  // diagonal sensing reduces to a vector bridge problem on the diagonal
  std::vector<Matrix> sensing;
  const Matrix B = randm(rng, 5, 3);
  for (int j = 0; j < 5; ++j) {
    Matrix S = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      S(i, i) = B(j, i);
    sensing.push_back(S);
  }
  const Vector y = randn(rng, 5);
  const ProblemSpec sm = build_schatten_problem(LinearMap::from_sensing(sensing), y, 0.4, 1.5);
  const ProblemSpec vb = build_bridge(B, y, 0.4, 1.5);
  const Vector xm = solve(sm, 3000, 1e-14).y, xv = solve(vb, 3000, 1e-14).y;
  for (int i = 0; i < 3; ++i)
    CHECK(xm[i * 4] == doctest::Approx(xv[i]).epsilon(1e-6));
  CHECK(Eigen::Map<const Matrix>(xm.data(), 3, 3).diagonal().norm() == doctest::Approx(xm.norm()).epsilon(1e-6));

  // p = 2: Frobenius ridge
  const Matrix Op = randm(rng, 6, 4);
  std::vector<Matrix> rows;
  for (int j = 0; j < 6; ++j)
    rows.push_back(Eigen::Map<const Matrix>(Vector(Op.row(j).transpose()).data(), 2, 2));
  const Vector bb = randn(rng, 6);
  const ProblemSpec fr = build_schatten_problem(LinearMap::from_sensing(rows), bb, 0.3, 2.0);
  const Vector closed = (Op.transpose() * Op + 0.3 * Matrix::Identity(4, 4)).ldlt().solve(Op.transpose() * bb);
  CHECK((solve(fr, 2000).y - closed).norm() <= 1e-8);

  sensing.push_back(Matrix::Zero(2, 2));
  CHECK_THROWS_AS(LinearMap::from_sensing(sensing), InvalidInput);
  CHECK_THROWS_AS(LinearMap::from_mask(Matrix::Zero(2, 2)), InvalidInput);
}

TEST_CASE("every builder passes the sampling and finite-difference checks") {
  std::mt19937_64 rng(77);
  const Matrix A = randm(rng, 6, 4);
  const Vector b = randn(rng, 6);
  std::vector<ProblemSpec> specs = {
      build_elastic_net(A, b, 0.3, 0.2), build_elastic_net(A, b, 0.3, 0.0), build_bridge(A, b, 0.5, 1.4),
      build_bridge(A, b, 0.5, 3.0),      build_dantzig(A, b, 0.5, 0.3),     build_lp_regression(A, b, 1.7),
      build_lp_regression(A, b, 3.0),    build_correlated(A, b, 1.5),
      build_schatten_problem(LinearMap{2, 2, A}, b, 0.5, 1.5),
      build_schatten_problem(LinearMap{2, 2, A}, b, 0.5, 3.0)};
  for (const ProblemSpec &s : specs) {
    CAPTURE(s.name);
    CHECK(def2_worst(s, rng) >= -1e-10);
    CHECK(finite_diff_check(*s.oracle, randn(rng, 4)) <= 1e-5);
    CHECK(s.oracle->space().dim() == s.reg.space.dim());
  }
}

} // TEST_SUITE
