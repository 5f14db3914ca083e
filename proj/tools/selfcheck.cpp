#include "commands.hpp"
#include "spec_file.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/gradnorm.hpp>
#include <compcomp/io.hpp>
#include <compcomp/verification.hpp>

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <utility>

namespace compcomp::cli {

namespace {

using DualityFn = std::function<Vector(const Vector &, double, double)>;

struct SuiteResult {
  explicit SuiteResult(std::string n = {}) : name(std::move(n)) {}
  std::string name;
  bool passed = true;
  std::string detail;
  double ms = 0.0;
};

struct Context {
  std::mt19937_64 rng;
  DualityFn duality;
};

Vector randn(std::mt19937_64 &rng, Eigen::Index n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = N(rng);
  return v;
}

Matrix randm(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> N(0.0, 1.0);
  Matrix M(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      M(i, j) = N(rng);
  return M;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// duality map identities and agreement with the gradient of (1/q)||x||^q
SuiteResult suite_spaces(Context &c) {
  SuiteResult r("spaces");
  std::uniform_real_distribution<double> U(1.1, 6.0);
  double worst = 0.0, worst_fd = 0.0;
  for (int t = 0; t < 300; ++t) {
    const double p = U(c.rng), q = U(c.rng);
    const Vector x = randn(c.rng, 5);
    const Vector J = c.duality(x, p, q);
    const double n = lp_norm(x, p);
    worst = std::max(worst, rel(J.dot(x), std::pow(n, q)));
    worst = std::max(worst, rel(lp_norm(J, dual_exponent(p)), std::pow(n, q - 1.0)));
    if (t % 10 == 0) {
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (std::pow(lp_norm(xp, p), q) - std::pow(lp_norm(xm, p), q)) / (2 * h * q);
        worst_fd = std::max(worst_fd, std::abs(fd - J[i]) / std::max(1.0, std::abs(J[i])));
      }
    }
  }
  r.passed = worst <= 1e-10 && worst_fd <= 1e-5;
  r.detail = "identity " + fmt_num(worst) + ", fd " + fmt_num(worst_fd);
  return r;
}

SuiteResult suite_oracles(Context &c) {
  SuiteResult r("oracles");
  const Matrix A = randm(c.rng, 8, 5);
  const Vector b = randn(c.rng, 8);
  Vector labels(8);
  for (Eigen::Index i = 0; i < 8; ++i)
    labels[i] = b[i] >= 0 ? 1.0 : -1.0;
  double worst = 0.0;
  for (const OraclePtr &f : {make_least_squares(A, b), make_lp_residual(A, b, 3.0),
                             make_lp_residual(A, b, 1.5), make_logistic(A, labels)})
    worst = std::max(worst, finite_diff_check(*f, randn(c.rng, 5)));
  r.passed = worst <= 1e-5;
  r.detail = "worst fd " + fmt_num(worst);
  return r;
}

// uniform convexity on random triples and prox optimality against perturbations
SuiteResult suite_regularizers(Context &c) {
  SuiteResult r("regularizers");
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_slack = 0.0;
  for (double p : {1.3, 2.0, 3.0, 4.5}) {
    const NormedSpace s = NormedSpace::lp(4, p);
    const Regularizer reg = Regularizer::power_of_norm(s, 0.7);
    for (int t = 0; t < 200; ++t) {
      const Vector x = randn(c.rng, 4), y = randn(c.rng, 4);
      const double a = U(c.rng);
      const double slack = (1 - a) * reg.value(x) + a * reg.value(y) -
                           reg.modulus() / reg.q() * a * (1 - a) * std::pow(s.norm(y - x), reg.q()) -
                           reg.value((1 - a) * x + a * y);
      worst_slack = std::min(worst_slack, slack);
    }
  }
  double worst_prox = 0.0;
  const std::vector<Regularizer> regs = {
      Regularizer::power_of_norm(NormedSpace::lp(3, 1.5), 0.5),
      Regularizer::power_of_norm(NormedSpace::lp(3, 3.0), 0.5),
      Regularizer::elastic_net(3, 0.3, 0.2),
      Regularizer::l1_only(3, 0.3),
  };
  for (const Regularizer &reg : regs) {
    const ScaffoldFunction phi = make_scaffold(reg, Vector::Zero(3));
    for (int t = 0; t < 20; ++t) {
      const Vector z = randn(c.rng, 3);
      const Vector u = composite_prox(reg, phi, z, 2.0, 1.0);
      const double fu = prox_objective(reg, phi, z, 2.0, 1.0, u);
      for (int k = 0; k < 20; ++k) {
        const Vector w = u + 1e-4 * randn(c.rng, 3);
        worst_prox = std::max(worst_prox, fu - prox_objective(reg, phi, z, 2.0, 1.0, w));
      }
    }
  }
  r.passed = worst_slack >= -1e-10 && worst_prox <= 1e-12;
  r.detail = "convexity slack " + fmt_num(worst_slack) + ", prox excess " + fmt_num(worst_prox);
  return r;
}

SuiteResult suite_solver(Context &c) {
  SuiteResult r("solver");
  const Matrix A = randm(c.rng, 20, 6);
  const ProblemSpec s = build_bridge(A, randn(c.rng, 20), 0.5, 1.5);
  SolverConfig cfg;
  cfg.epsilon = 1e-10;
  cfg.max_iters = 300;
  const SolverResult res = agd_plus(*s.oracle, s.reg, s.scaffold, s.start(), cfg);
  bool monotone = true;
  double sum = 0.0;
  for (const IterationRecord &row : res.trace.rows) {
    sum += row.a;
    monotone = monotone && std::abs(row.A - sum) <= 1e-10 * sum;
  }
  const ReferenceSolution ref = reference_solve(s, 1e-12);
  const double gap = res.trace.rows.back().obj - ref.f_ref;
  r.passed = monotone && gap <= 1e-8;
  r.detail = "final gap " + fmt_num(gap);
  return r;
}

SuiteResult suite_gradnorm(Context &c) {
  SuiteResult r("gradnorm");
  const Matrix A = randm(c.rng, 15, 10);
  const NormedSpace s = NormedSpace::lp(10, 1.5);
  auto f = make_least_squares(A, randn(c.rng, 15), s);
  GradNormConfig cfg;
  cfg.epsilon = 1e-3;
  const GradNormResult g = minimize_grad_norm(*f, s, Vector::Zero(10), cfg);
  const double measured = s.dual_norm(f->gradient(g.y));
  r.passed = g.report.converged && measured <= 1e-3;
  r.detail = "grad norm " + fmt_num(measured) + ", restarts " + std::to_string(g.report.restarts);
  return r;
}

SuiteResult suite_hardinstance(Context &c) {
  SuiteResult r("hardinstance");
  bool ok = true;
  for (int M : {4, 8, 16}) {
    HardInstanceParams P;
    P.d = 16;
    P.M = M;
    P.L = 50;
    P.eta = 0.01;
    HardInstance h(P);
    for (int t = 0; t < M; ++t)
      h.resisting_query(randn(c.rng, 16));
    ok = ok && h.replay_min_value() >= P.L / h.mu_bar() * (-P.eta - (M - 1) * P.eta / 4);
  }
  const ComplexityBound b = complexity_lower_bound(2, 2, 200, 1, 1e-3, 100, 1);
  ok = ok && b.count == 3.0;
  r.passed = ok;
  r.detail = "guarantee on M = 4, 8, 16; calculator " + std::to_string(static_cast<int>(b.count));
  return r;
}

SuiteResult suite_apps(Context &c) {
  SuiteResult r("apps");
  const Matrix A = randm(c.rng, 8, 4);
  const Vector b = randn(c.rng, 8);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const ProblemSpec s = build_bridge(A, b, 0.4, p);
    worst = std::max(worst, tradeoff_check(s, reference_solve(s, 1e-12).x_ref));
  }
  const ProblemSpec d = build_dantzig(randm(c.rng, 6, 5), randn(c.rng, 6), 0.5, 0.3);
  const double slack = tradeoff_check(d, reference_solve(d).x_ref);
  r.passed = worst <= 1e-5 && slack >= 0.0;
  r.detail = "bridge residual " + fmt_num(worst) + ", dantzig slack " + fmt_num(slack);
  return r;
}

SuiteResult suite_verification(Context &c) {
  SuiteResult r("verification");
  const Matrix A = randm(c.rng, 12, 5);
  const ProblemSpec s = build_bridge(A, randn(c.rng, 12), 1.0, 2.0);
  SolverConfig cfg;
  cfg.epsilon = 1e-10;
  cfg.max_iters = 100;
  const SolverResult res = agd_plus(*s.oracle, s.reg, s.scaffold, s.start(), cfg);
  const ReferenceSolution ref = reference_solve(s);
  const CertificateReport good = replay_certificate(res.trace, s, ref);
  Trace bad = res.trace;
  for (auto &row : bad.rows)
    row.A *= 0.5;
  const CertificateReport corrupted = replay_certificate(bad, s, ref);
  r.passed = good.ok && !corrupted.ok;
  r.detail = std::string("replay ") + (good.ok ? "ok" : good.failure) + ", negative control " +
             (corrupted.ok ? "missed" : "fired");
  return r;
}

SuiteResult suite_io(Context &c) {
  SuiteResult r("io");
  Trace t;
  t.header.q = 2.0;
  for (int k = 0; k < 5; ++k) {
    IterationRecord row;
    row.k = k;
    row.a = std::exp(randn(c.rng, 1)[0]);
    row.A = row.a + (k ? t.rows.back().A : 0.0);
    row.obj = randn(c.rng, 1)[0];
    t.rows.push_back(row);
  }
  std::stringstream ss;
  write_trace_csv(ss, t);
  const Trace back = read_trace_csv(ss);
  bool ok = back.rows.size() == t.rows.size();
  for (std::size_t i = 0; ok && i < t.rows.size(); ++i)
    ok = back.rows[i].A == t.rows[i].A && back.rows[i].obj == t.rows[i].obj;

  SpecFile spec;
  spec.builder = "bridge";
  spec.params = {{"lambda", 0.1 + randn(c.rng, 1)[0] * 1e-3}, {"p", 1.5}};
  spec.A = randm(c.rng, 4, 3);
  spec.b = randn(c.rng, 4);
  const auto dir = std::filesystem::temp_directory_path() /
                   ("compcomp-selfcheck-" + std::to_string(c.rng()));
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "spec.json").string();
  save_spec_file(path, spec);
  const bool round_trip = spec_hash(load_spec_file(path)) == spec_hash(spec);
  std::filesystem::remove_all(dir);
  r.passed = ok && round_trip;
  r.detail = std::string("trace ") + (ok ? "exact" : "lossy") + ", spec " +
             (round_trip ? "exact" : "lossy");
  return r;
}

} // namespace

int cmd_selfcheck(const RunConfig &rc) {
  Context c{std::mt19937_64(rc.seed),
            [](const Vector &x, double p, double q) { return duality_map(x, p, q); }};
  if (rc.fault == "duality-sign") {
    c.duality = [](const Vector &x, double p, double q) { return Vector(-duality_map(x, p, q)); };
  } else if (!rc.fault.empty()) {
    throw InvalidInput("--inject-fault: unknown fault '" + rc.fault + "'");
  }

  const std::vector<std::function<SuiteResult(Context &)>> suites = {
      suite_spaces, suite_oracles, suite_regularizers, suite_solver, suite_gradnorm,
      suite_hardinstance, suite_apps, suite_verification, suite_io};
  bool all = true;
  std::printf("%-14s %-6s %10s  %s\n", "suite", "result", "ms", "detail");
  for (const auto &suite : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    try {
      r = suite(c);
    } catch (const std::exception &e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (r.name.empty())
      r.name = "?";
    all = all && r.passed;
    std::printf("%-14s %-6s %10.1f  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.ms,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "selfcheck passed" : "selfcheck FAILED");
  return all ? kOk : kInputError;
}

} // namespace compcomp::cli
