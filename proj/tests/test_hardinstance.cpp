#include "helpers.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/hardinstance.hpp>
#include <compcomp/solver.hpp>

#include <doctest.h>

using namespace compcomp;
using namespace testutil;

TEST_SUITE("hardinstance") {

TEST_CASE("derived quantities") {
  HardInstanceParams P;
  P.d = 16;
  P.M = 8;
  P.p = 2;
  P.kappa = 2;
  P.eta = 0.01;
  const HardInstance h(P);
  CHECK(h.r() == 2.0);
  CHECK(h.mu_bar() == doctest::Approx(2.0 / 0.01));
  CHECK(h.Delta() == doctest::Approx(1 / std::sqrt(8.0)));
  P.p = 4;
  P.kappa = 1.5;
  const HardInstance g(P);
  CHECK(g.r() == 4.0);
  CHECK(g.mu_bar() == doctest::Approx(std::sqrt(2.0) * std::sqrt(std::log(16.0) / 0.01)));
  CHECK(g.Delta() == doctest::Approx(std::pow(8.0, -0.25)));
  P.p = 20;
  CHECK(HardInstance(P).r() == doctest::Approx(3 * std::log(16.0)));
  P.M = 17;
  CHECK_THROWS_AS(HardInstance{P}, InvalidInput);
}

TEST_CASE("resisting query examples") {
  HardInstanceParams P;
  P.d = 6;
  P.M = 4;
  P.L = 3;
  HardInstance h(P);
  const auto a = h.resisting_query(Vector::Zero(6));
  CHECK(h.signs()[0] == 1);
  CHECK(h.offsets()[0] == 0.0);
  CHECK(a.value == 0.0);
  CHECK(a.piece == 0);
  CHECK(a.subgradient[0] == doctest::Approx(h.scale()));
  CHECK(a.subgradient.tail(5).norm() == 0.0);

  Vector x = Vector::Zero(6);
  x[1] = -0.5;
  h.resisting_query(x);
  // the revealed sign matches the query, so the new piece is |x_t| - delta_t
  CHECK(h.signs()[1] == -1);
  CHECK(h.offsets()[1] == doctest::Approx(P.eta / 4));
  CHECK(h.piecewise_value(x) == doctest::Approx(0.5 - P.eta / 4));

  h.resisting_query(x);
  h.resisting_query(x);
  CHECK(h.exhausted());
  CHECK_THROWS_AS(h.resisting_query(x), Exhausted);
}

TEST_CASE("guarantee on random query sequences") {
  std::mt19937_64 rng(61);
  for (int M : {4, 8, 16}) {
    for (int rep = 0; rep < 20; ++rep) {
      HardInstanceParams P;
      P.d = 16;
      P.M = M;
      P.L = 5;
      P.eta = 0.05;
      HardInstance h(P);
      for (int t = 0; t < M; ++t)
        h.resisting_query(randn(rng, 16, std::pow(10.0, rep % 5 - 3)));
      const double bound = h.scale() * (-P.eta - (M - 1) * P.eta / 4);
      CHECK(h.guarantee_bound() == doctest::Approx(bound));
      CHECK(h.replay_min_value() >= bound);
      for (const Vector &x : h.queries())
        CHECK(h.scale() * h.smoothed_eval(x).value >= bound);
    }
  }
}

TEST_CASE("smoothing of a single linear piece has the closed form") {
  HardInstanceParams P;
  P.d = 4;
  P.M = 1;
  P.eta = 0.2;
  HardInstance h(P);
  Vector x(4);
  x << 0.3, -1, 2, 0;
  h.resisting_query(x);
  // min_h <e1, h> + (2/eta)||h||_2^2 = -eta/8
  const auto s = h.smoothed_eval(x);
  CHECK(s.value == doctest::Approx(0.3 - P.eta / 8).epsilon(1e-12));
  CHECK(s.gradient[0] == doctest::Approx(1.0));

  HardInstance g(P);
  g.resisting_query(-x);
  CHECK(g.smoothed_eval(-x).value == doctest::Approx(s.value).epsilon(1e-13));
}

TEST_CASE("smoothed function stays within eta and has the right gradient") {
  std::mt19937_64 rng(62);
  for (double p : {2.0, 3.0}) {
    HardInstanceParams P;
    P.d = 8;
    P.M = 6;
    P.p = p;
    P.eta = 0.3;
    HardInstance h(P);
    for (int t = 0; t < 6; ++t)
      h.resisting_query(randn(rng, 8, 0.2));
    for (int t = 0; t < 100; ++t) {
      const Vector x = randn(rng, 8, 0.2);
      const auto s = h.smoothed_eval(x);
      const double f = h.piecewise_value(x);
      CHECK(s.converged);
      CHECK(s.value <= f + 1e-13);
      CHECK(s.value >= f - P.eta - 1e-13);
      const Vector fd = numeric_gradient([&](const Vector &u) { return h.smoothed_eval(u).value; }, x, 1e-7);
      CHECK((fd - s.gradient).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
}

TEST_CASE("smoothed gradient is Lipschitz with constant mu_bar") {
  std::mt19937_64 rng(63);
  HardInstanceParams P;
  P.d = 8;
  P.M = 8;
  P.eta = 0.1;
  HardInstance h(P);
  for (int t = 0; t < 8; ++t)
    h.resisting_query(randn(rng, 8, 0.1));
  for (int t = 0; t < 300; ++t) {
    const Vector x = randn(rng, 8, 0.1), y = randn(rng, 8, 0.1);
    const double lhs = (h.smoothed_eval(x).gradient - h.smoothed_eval(y).gradient).norm();
    CHECK(lhs <= h.mu_bar() * (x - y).norm() * (1 + 1e-9));
  }
}

TEST_CASE("transcript round trip") {
  std::mt19937_64 rng(64);
  HardInstanceParams P;
  P.d = 5;
  P.M = 3;
  P.p = 3;
  HardInstance h(P);
  for (int t = 0; t < 3; ++t)
    h.resisting_query(randn(rng, 5));
  const HardInstance g = HardInstance::from_transcript_json(h.transcript_json());
  CHECK(g.signs() == h.signs());
  CHECK(g.offsets() == h.offsets());
  CHECK(g.queries().size() == 3);
  CHECK(g.replay_min_value() == h.replay_min_value());
  CHECK_THROWS_AS(HardInstance::from_transcript_json("{"), InvalidInput);
  CHECK_THROWS_AS(HardInstance::from_transcript_json("{\"params\": {}}"), InvalidInput);
}

TEST_CASE("resisting oracle drives agd_plus and keeps the guarantee") {
  for (int M : {4, 8, 16}) {
    HardInstanceParams P;
    P.d = 16;
    P.M = M;
    P.L = 50;
    P.eta = 0.01;
    auto h = std::make_shared<HardInstance>(P);
    auto f = make_resisting_oracle(h);
    const Regularizer reg = Regularizer::power_of_norm(NormedSpace::lp(16, 2.0), 1.0);
    SolverConfig cfg;
    cfg.max_iters = 3 * M;
    Vector x0 = Vector::Zero(16);
    x0[0] = 0.1;
    agd_plus(*f, reg, x0, cfg);
    CHECK(h->exhausted());
    CHECK(h->replay_min_value() >= h->scale() * (-P.eta - (M - 1) * P.eta / 4));
  }
}

TEST_CASE("gap_lower_bound") {
  CHECK(gap_lower_bound(2, 1, 2, 1, 1, 2) == doctest::Approx(0.25));
  CHECK(gap_lower_bound(2, 1, 1, 1, 4, 2) == doctest::Approx(4.0));
  for (double q : {2.0, 3.0, 5.0})
    CHECK(gap_lower_bound(1.3, 0.7, 2, 0.5, 1, q) / gap_lower_bound(1.3, 0.7, 2, 1.0, 1, q) ==
          doctest::Approx(std::pow(2.0, 1 / (q - 1))));
  CHECK_THROWS_AS(gap_lower_bound(1, 1, 1, 1, 1, 1.0), InvalidInput);
}

TEST_CASE("hypotheses are monotone in eta") {
  HardInstanceParams P;
  P.d = 16;
  P.M = 8;
  P.L = 300;
  P.lambda = 1;
  bool seen_false_after_true[3] = {false, false, false};
  bool was_true[3] = {false, false, false};
  // shrinking eta can only help (a), (b), and (c)
  for (double eta = 0.5; eta > 1e-5; eta *= 0.7) {
    P.eta = eta;
    const HardInstanceHypotheses H = check_hypotheses(P, 1.0);
    const bool v[3] = {H.a, H.b, H.c};
    for (int i = 0; i < 3; ++i) {
      if (was_true[i] && !v[i])
        seen_false_after_true[i] = true;
      was_true[i] = was_true[i] || v[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(was_true[i]);
    CHECK_FALSE(seen_false_after_true[i]);
  }
  P.eta = 1e-3;
  CHECK(check_hypotheses(P, 1.0).all());
  P.L = 100; // (c) needs L >= 240 lambda at this M
  CHECK_FALSE(check_hypotheses(P, 1.0).c);
}

TEST_CASE("complexity bound calculator") {
  const ComplexityBound b = complexity_lower_bound(2, 2, 200, 1, 1e-3, 100, 1);
  CHECK(b.regime == "p=kappa=2");
  CHECK(b.count == 3.0);
  CHECK(b.valid);
  const ComplexityBound v = complexity_lower_bound(2, 2, 2, 1, 1e-3, 100, 1);
  CHECK(v.count == 0.0);
  CHECK(complexity_lower_bound(2, 2, 200, 1, 10, 100, 1).valid == false);

  const double d = std::exp(10.0);
  const ComplexityBound g = complexity_lower_bound(4, 2, 1, 1, 0.1, d, 1);
  CHECK(g.regime == "kappa<p");
  // C(4,2) = ((3/4)^6 2^{(2(-7) + 4*5)/3})^{1/6} = ((3/4)^6 2^2)^{1/6}
  const double C = std::pow(std::pow(0.75, 6) * 4.0, 1.0 / 6);
  CHECK(complexity_constant(4, 2) == doctest::Approx(C).epsilon(1e-14));
  CHECK(g.count == doctest::Approx(C / 16.0 * std::pow(100.0, 1.0 / 6)).epsilon(1e-13));

  CHECK(complexity_lower_bound(1.5, 2, 1, 1, 0.1, 10, 1).regime == "none");
  CHECK(complexity_lower_bound(3, 3, 1, 1, 0.1, 10, 1).regime == "none");
}

TEST_CASE("first branch is invariant under joint scaling") {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int t = 0; t < 50; ++t) {
    const double L = std::pow(10.0, U(rng) + 3), lambda = std::pow(10.0, U(rng)), c = std::pow(10.0, U(rng));
    CHECK(complexity_lower_bound(2, 2, L, lambda, 1e-9, 10, 1).count ==
          complexity_lower_bound(2, 2, c * L, c * lambda, 1e-9, 10, 1).count);
  }
}

TEST_CASE("reduction") {
  CHECK(reduction_gap_from_gradient(0.1, 2) == doctest::Approx(0.2));
  CHECK(reduction_gap_from_gradient(0, 3) == 0.0);
  CHECK(reduction_gap_from_gradient(0.37, 1) == 0.37);
}

} // TEST_SUITE
