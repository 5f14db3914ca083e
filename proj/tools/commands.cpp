#include "commands.hpp"

#include "spec_file.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/gradnorm.hpp>
#include <compcomp/io.hpp>
#include <compcomp/verification.hpp>

#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace compcomp::cli {

using nlohmann::json;

void init_logging() {
  auto logger = spdlog::stderr_color_mt("compcomp");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::err);
  const char *env = std::getenv("COMPCOMP_LOG");
  if (!env)
    return;
  const std::string v = env;
  if (v == "error")
    spdlog::set_level(spdlog::level::err);
  else if (v == "info")
    spdlog::set_level(spdlog::level::info);
  else if (v == "debug")
    spdlog::set_level(spdlog::level::debug);
  else
    spdlog::warn("COMPCOMP_LOG={} not one of error, info, debug; using error", v);
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void write_report(const std::string &path, const json &j) {
  if (path.empty())
    return;
  std::ofstream out(path);
  if (!out)
    throw InvalidInput(path + ": cannot write report");
  out << j.dump(2) << '\n';
  spdlog::info("report written to {}", path);
}

json vector_json(const Vector &v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

SpecFile load(const RunConfig &rc) {
  if (rc.spec.empty())
    throw InvalidInput("--spec is required");
  SpecFile s = load_spec_file(rc.spec, rc.A_path, rc.b_path);
  apply_overrides(s, rc.p, rc.lambda);
  if (!rc.emit_spec.empty()) {
    save_spec_file(rc.emit_spec, s);
    spdlog::info("spec written to {}", rc.emit_spec);
  }
  spdlog::info("spec {} builder {} hash {}", rc.spec, s.builder, spec_hash(s));
  return s;
}

SolverConfig solve_config(const RunConfig &rc) {
  if (!(rc.epsilon > 0.0))
    throw InvalidInput("--epsilon must be positive");
  if (rc.max_iters < 1)
    throw InvalidInput("--max-iters must be at least 1");
  SolverConfig cfg;
  cfg.epsilon = rc.epsilon;
  cfg.max_iters = rc.max_iters;
  cfg.seed = rc.seed;
  cfg.stall_window = 50;
  cfg.stall_tol = rc.epsilon;
  return cfg;
}

json solver_report(const SolverResult &r, double elapsed) {
  const IterationRecord &last = r.trace.rows.back();
  json j;
  j["final_objective"] = last.obj;
  j["iterations"] = r.state.k;
  j["doublings"] = last.doublings;
  j["elapsed_ms"] = elapsed;
  j["grad_queries"] = r.grad_queries;
  j["status"] = to_string(r.status);
  j["converged"] = r.converged();
  return j;
}

struct HardRun {
  std::shared_ptr<HardInstance> instance;
  SolverResult result;
  bool guarantee_holds = false;
};

HardRun run_hard_instance(const HardInstanceParams &P, const SolverConfig &cfg) {
  HardRun h;
  h.instance = std::make_shared<HardInstance>(P);
  auto f = make_resisting_oracle(h.instance);
  const NormedSpace space = NormedSpace::lp(P.d, P.p);
  const Regularizer reg = Regularizer::power_of_norm(space, P.lambda);
  h.result = agd_plus(*f, reg, Vector::Zero(P.d), cfg);
  h.guarantee_holds = h.instance->replay_min_value() >= h.instance->guarantee_bound();
  return h;
}

HardInstanceParams hard_params_from_flags(const RunConfig &rc) {
  HardInstanceParams P;
  P.d = static_cast<Eigen::Index>(rc.d);
  P.M = rc.M;
  P.p = rc.p.value_or(2.0);
  P.kappa = rc.kappa;
  P.L = rc.L;
  P.lambda = rc.lambda.value_or(1.0);
  P.eta = rc.eta;
  return P;
}

json hard_report(const HardRun &h) {
  const HardInstance &I = *h.instance;
  json j;
  j["pieces_revealed"] = I.revealed();
  j["predicted_queries"] = I.params().M;
  j["replay_min_value"] = I.replay_min_value();
  j["guarantee_bound"] = I.guarantee_bound();
  j["guarantee_holds"] = h.guarantee_holds;
  j["mu_bar"] = I.mu_bar();
  j["r"] = I.r();
  return j;
}

int finish_hard(const RunConfig &rc, const HardRun &h, double elapsed) {
  if (!rc.trace.empty())
    write_trace(rc.trace, h.result.trace);
  if (!rc.transcript.empty()) {
    std::ofstream out(rc.transcript);
    if (!out)
      throw InvalidInput(rc.transcript + ": cannot write transcript");
    out << h.instance->transcript_json() << '\n';
  }
  json j = solver_report(h.result, elapsed);
  j["command"] = "hard-run";
  j["hard_instance"] = hard_report(h);
  write_report(rc.report, j);
  std::cout << "pieces revealed   " << h.instance->revealed() << " of " << h.instance->params().M
            << "\nreplay min        " << h.instance->replay_min_value()
            << "\nguarantee bound   " << h.instance->guarantee_bound()
            << "\nguarantee holds   " << (h.guarantee_holds ? "true" : "false")
            << "\nstatus            " << to_string(h.result.status) << '\n';
  if (!h.guarantee_holds)
    return kNotConverged;
  return h.result.converged() ? kOk : kNotConverged;
}

} // namespace

int cmd_solve(const RunConfig &rc) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpecFile s = load(rc);
  const SolverConfig cfg = solve_config(rc);
  if (is_hard_instance(s))
    return finish_hard(rc, run_hard_instance(hard_params(s), cfg), ms_since(t0));
  if (is_least_squares(s) || s.builder == "correlated")
    throw InvalidInput("builder '" + s.builder + "' is a gradient-norm task; use the gradnorm command");

  const ProblemSpec ps = build_problem(s);
  spdlog::info("solving {} in dimension {}", ps.name, ps.space.dim());
  const SolverResult r = agd_plus(*ps.oracle, ps.reg, ps.scaffold, ps.start(), cfg,
                                  [](const SolverState &, const IterationRecord &rec) {
                                    spdlog::debug("k={} obj={:.17g} M={}", rec.k, rec.obj, rec.M);
                                    return false;
                                  });
  if (!rc.trace.empty())
    write_trace(rc.trace, r.trace);
  json j = solver_report(r, ms_since(t0));
  j["command"] = "solve";
  j["builder"] = s.builder;
  j["spec_hash"] = spec_hash(s);
  j["problem_fingerprint"] = spec_fingerprint(ps);
  j["y"] = vector_json(r.y);
  write_report(rc.report, j);
  std::cout << "objective   " << r.trace.rows.back().obj << "\niterations  " << r.state.k
            << "\nstatus      " << to_string(r.status) << '\n';
  return r.converged() ? kOk : kNotConverged;
}

int cmd_gradnorm(const RunConfig &rc) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpecFile s = load(rc);
  if (is_hard_instance(s))
    throw InvalidInput("gradnorm: hard instances are not smooth problems");
  OraclePtr oracle;
  NormedSpace space;
  if (is_least_squares(s)) {
    space = NormedSpace::lp(s.A.cols(), s.params.at("p"));
    oracle = make_least_squares(s.A, s.b, space);
  } else {
    const ProblemSpec ps = build_problem(s);
    oracle = ps.oracle;
    space = ps.space;
  }
  if (!(rc.epsilon > 0.0))
    throw InvalidInput("--epsilon must be positive");
  if (rc.max_iters < 1)
    throw InvalidInput("--max-iters must be at least 1");
  GradNormConfig cfg;
  cfg.epsilon = rc.epsilon;
  cfg.R_init = rc.R_init;
  cfg.max_restarts = rc.max_restarts;
  cfg.inner.max_iters = rc.max_iters;
  const GradNormResult r = minimize_grad_norm(*oracle, space, Vector::Zero(space.dim()), cfg);
  const GradNormReport &g = r.report;

  json j;
  j["command"] = "gradnorm";
  j["builder"] = s.builder;
  j["spec_hash"] = spec_hash(s);
  j["converged"] = g.converged;
  j["restarts"] = g.restarts;
  j["final_f_grad_norm"] = g.final_f_grad_norm;
  j["final_composite_grad_norm"] = g.final_composite_grad_norm;
  j["lambda_init"] = g.lambda_init;
  j["lambda_final"] = g.lambda_final;
  j["grad_queries"] = g.grad_queries;
  j["inner_iterations"] = g.inner_iterations;
  j["elapsed_ms"] = ms_since(t0);
  j["y"] = vector_json(r.y);
  write_report(rc.report, j);
  std::cout << "grad norm   " << g.final_f_grad_norm << "\nrestarts    " << g.restarts
            << "\nqueries     " << g.grad_queries << "\nconverged   "
            << (g.converged ? "true" : "false") << '\n';
  return g.converged ? kOk : kNotConverged;
}

int cmd_lb(const RunConfig &rc) {
  const double p = rc.p.value_or(2.0);
  const double lambda = rc.lambda.value_or(1.0);
  const ComplexityBound b =
      complexity_lower_bound(p, rc.kappa, rc.L, lambda, rc.epsilon, rc.d, rc.R);
  std::cout << "regime       " << b.regime << "\nlower_bound  " << b.count << "\nvalid        "
            << (b.valid ? "true" : "false") << '\n';
  json j;
  j["command"] = "lb";
  j["regime"] = b.regime;
  j["lower_bound"] = b.count;
  j["valid"] = b.valid;
  if (b.regime == "kappa<p")
    j["lambda_tilde"] = b.lambda_tilde;

  if (rc.adversarial) {
    const HardInstanceParams P = hard_params_from_flags(rc);
    SolverConfig cfg;
    cfg.epsilon = rc.epsilon;
    cfg.max_iters = rc.max_iters;
    const HardRun h = run_hard_instance(P, cfg);
    const HardInstanceHypotheses hyp = check_hypotheses(P, rc.R);
    j["adversarial"] = hard_report(h);
    j["adversarial"]["hypotheses"] = {{"a", hyp.a}, {"b", hyp.b}, {"c", hyp.c}};
    j["adversarial"]["measured_queries"] = h.result.grad_queries;
    const std::string path = rc.transcript.empty() ? "transcript.json" : rc.transcript;
    std::ofstream out(path);
    if (!out)
      throw InvalidInput(path + ": cannot write transcript");
    out << h.instance->transcript_json() << '\n';
    std::cout << "queries      " << h.result.grad_queries << " (pieces " << h.instance->revealed()
              << " of " << P.M << ")\nguarantee    " << (h.guarantee_holds ? "holds" : "violated")
              << "\ntranscript   " << path << '\n';
  }
  write_report(rc.report, j);
  return kOk;
}

int cmd_hard_run(const RunConfig &rc) {
  const auto t0 = std::chrono::steady_clock::now();
  HardInstanceParams P;
  if (!rc.spec.empty()) {
    const SpecFile s = load(rc);
    if (!is_hard_instance(s))
      throw InvalidInput("hard-run: spec builder must be 'hard_instance'");
    P = hard_params(s);
  } else {
    P = hard_params_from_flags(rc);
  }
  return finish_hard(rc, run_hard_instance(P, solve_config(rc)), ms_since(t0));
}

int cmd_reference(const RunConfig &rc) {
  const SpecFile s = load(rc);
  if (is_hard_instance(s) || is_least_squares(s))
    throw InvalidInput("reference: builder '" + s.builder + "' has no composite reference");
  const ProblemSpec ps = build_problem(s);
  const ReferenceSolution ref =
      rc.cache.empty() ? reference_solve(ps, rc.tol) : ReferenceCache(rc.cache).solve(ps, rc.tol);
  json j;
  j["command"] = "reference";
  j["fingerprint"] = spec_fingerprint(ps);
  j["method"] = ref.method;
  j["f_ref"] = ref.f_ref;
  j["residual"] = ref.residual;
  j["certified_tol"] = ref.certified_tol;
  j["x_ref"] = vector_json(ref.x_ref);
  write_report(rc.report, j);
  std::cout << "method      " << ref.method << "\nf_ref       " << ref.f_ref << "\nresidual    "
            << ref.residual << '\n';
  return kOk;
}

} // namespace compcomp::cli
