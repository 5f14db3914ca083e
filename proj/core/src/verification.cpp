#include "compcomp/verification.hpp"

#include "compcomp/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace compcomp {

namespace {

double signum(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Hessian of (1/q)||w||_s^q for a vector l_s norm. Coordinates near zero are
// clamped so s < 2 stays finite.
Matrix power_hessian(const Vector &w, double s, double q) {
  const Eigen::Index n = w.size();
  const double N = lp_norm(w, s);
  if (N == 0.0)
    return Matrix::Identity(n, n);
  Vector u(n), diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::max(std::abs(w[i]), 1e-10 * N);
    u[i] = signum(w[i]) * std::pow(std::abs(w[i]) / N, s - 1.0);
    diag[i] = (s - 1.0) * std::pow(a / N, s - 2.0);
  }
  // scaled by N^{q-2}: diag part (s-1) N^{q-s}|w|^{s-2}, rank-one (q-s) N^{q-2s} u u^T
  Matrix H = diag.asDiagonal();
  H += (q - s) * u * u.transpose();
  return std::pow(N, q - 2.0) * H;
}

Matrix fd_jacobian(const std::function<Vector(const Vector &)> &g, const Vector &x) {
  const Eigen::Index n = x.size();
  Matrix J(n, n);
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
  Vector xp = x, xm = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    J.col(j) = (g(xp) - g(xm)) / (2.0 * h);
    xp[j] = xm[j] = x[j];
  }
  return 0.5 * (J + J.transpose());
}

Vector ridge_solve(const Matrix &A, const Vector &b, double mu) {
  const Matrix H = A.transpose() * A + mu * Matrix::Identity(A.cols(), A.cols());
  const Vector rhs = A.transpose() * b;
  if (mu > 0.0)
    return H.ldlt().solve(rhs);
  return H.completeOrthogonalDecomposition().solve(rhs);
}

double power_scale(double p) { return p <= 2.0 ? 1.0 / (p - 1.0) : 1.0; }

Matrix objective_hessian(const ProblemSpec &spec, const Vector &x) {
  const Matrix &A = spec.A;
  Matrix Hf;
  switch (spec.kind) {
  case ProblemSpec::Kind::Dantzig: {
    const double ps = spec.metadata.at("p_star");
    const Matrix B = A.transpose() * A;
    const Vector r = B * x - A.transpose() * spec.b;
    Hf = B * power_hessian(r, ps, 2.0) * B;
    break;
  }
  case ProblemSpec::Kind::LpRegression: {
    const double p = spec.metadata.at("p");
    Hf = A.transpose() * power_hessian(A * x - spec.b, p, std::min(2.0, p)) * A;
    break;
  }
  default:
    Hf = A.transpose() * A;
  }
  const Regularizer &reg = spec.reg;
  if (!reg.differentiable() || reg.lambda == 0.0)
    return Hf;
  if (reg.kind == Regularizer::Kind::SchattenPower && reg.space.p != 2.0)
    return Hf + fd_jacobian([&](const Vector &u) { return reg.gradient(u); }, x);
  const double p = reg.space.p;
  return Hf + reg.lambda * power_scale(p) * power_hessian(x - reg.center, p, reg.q());
}

ReferenceSolution newton_solve(const ProblemSpec &spec, double tol) {
  const SmoothOracle &f = *spec.oracle;
  const Regularizer &reg = spec.reg;
  auto F = [&](const Vector &x) { return f.value(x) + reg.value(x); };
  auto G = [&](const Vector &x) {
    Vector g = f.gradient(x);
    if (reg.lambda != 0.0)
      g += reg.gradient(x);
    return g;
  };
  const double mu = std::max(reg.lambda, 1e-8);
  Vector x = spec.kind == ProblemSpec::Kind::Dantzig || spec.kind == ProblemSpec::Kind::LpRegression
                 ? Vector(ridge_solve(spec.A, spec.b, 1e-8))
                 : Vector(ridge_solve(spec.A, spec.b, mu));
  if (!x.allFinite())
    x.setZero();
  double Fx = F(x);
  Vector g = G(x);
  double res = spec.space.dual_norm(g);
  for (int it = 0; it < 500 && res > tol; ++it) {
    Matrix H = objective_hessian(spec, x);
    const double shift = 1e-14 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    H.diagonal().array() += shift;
    Vector step = H.ldlt().solve(-g);
    if (!step.allFinite() || step.dot(g) >= 0.0)
      step = -g;
    double t = 1.0;
    Vector xn;
    double Fn = 0.0;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      xn = x + t * step;
      Fn = F(xn);
      if (Fn <= Fx + 1e-4 * t * g.dot(step)) {
        moved = true;
        break;
      }
    }
    if (!moved) {
      // at the rounding floor the line search can only fail; accept the
      // full step once if it lowers the gradient
      xn = x + step;
      const Vector gn = G(xn);
      if (spec.space.dual_norm(gn) < res) {
        x = xn;
        Fx = F(x);
        g = gn;
        res = spec.space.dual_norm(g);
        continue;
      }
      break;
    }
    x = xn;
    Fx = Fn;
    g = G(x);
    res = spec.space.dual_norm(g);
  }
  ReferenceSolution out;
  out.x_ref = x;
  out.f_ref = Fx;
  out.method = "newton";
  out.residual = res;
  out.certified_tol = std::max(tol, res);
  return out;
}

ReferenceSolution coordinate_descent(const ProblemSpec &spec, double tol) {
  const Matrix &A = spec.A;
  const double l1 = spec.metadata.at("lambda1");
  const double l2 = spec.metadata.at("lambda2");
  const Eigen::Index d = A.cols();
  const Vector col_sq = A.colwise().squaredNorm();
  Vector x = Vector::Zero(d);
  Vector r = spec.b; // b - A x
  auto kkt = [&]() {
    const Vector g = -A.transpose() * r + l2 * x;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = x[j] != 0.0 ? std::abs(g[j] + l1 * signum(x[j])) : std::max(0.0, std::abs(g[j]) - l1);
      worst = std::max(worst, v);
    }
    return worst;
  };
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double change = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double denom = col_sq[j] + l2;
      if (denom == 0.0)
        continue;
      const double rho = A.col(j).dot(r) + col_sq[j] * x[j];
      const double m = std::abs(rho) - l1;
      const double nx = m > 0.0 ? signum(rho) * m / denom : 0.0;
      if (nx != x[j]) {
        r -= (nx - x[j]) * A.col(j);
        change = std::max(change, std::abs(nx - x[j]));
        x[j] = nx;
      }
    }
    if (change <= 1e-15 * (1.0 + x.cwiseAbs().maxCoeff()) || (sweep % 50 == 49 && kkt() <= std::min(tol, 1e-12))) {
      break;
    }
    // refresh the residual occasionally against drift
    if (sweep % 1000 == 999)
      r = spec.b - A * x;
  }
  ReferenceSolution out;
  out.x_ref = x;
  out.f_ref = spec.objective(x);
  out.method = "coordinate-descent";
  out.residual = kkt();
  out.certified_tol = std::max(tol, out.residual);
  return out;
}

ReferenceSolution linear_solve(const ProblemSpec &spec, double mu) {
  ReferenceSolution out;
  out.x_ref = ridge_solve(spec.A, spec.b, mu);
  out.f_ref = spec.objective(out.x_ref);
  out.method = "linear-solve";
  const Vector g = spec.A.transpose() * (spec.A * out.x_ref - spec.b) + mu * out.x_ref;
  out.residual = g.cwiseAbs().maxCoeff();
  out.certified_tol = out.residual;
  return out;
}

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

nlohmann::json to_json(const ReferenceSolution &r) {
  return {{"x_ref", std::vector<double>(r.x_ref.data(), r.x_ref.data() + r.x_ref.size())},
          {"f_ref", r.f_ref},
          {"method", r.method},
          {"certified_tol", r.certified_tol},
          {"residual", r.residual}};
}

} // namespace

double golden_section(const std::function<double(double)> &f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

Vector brute_force_minimize(const std::function<double(const Vector &)> &F, const Vector &center,
                            double radius, double tol) {
  const Eigen::Index d = center.size();
  Vector best = center;
  double fbest = F(best);
  int per_dim = d <= 2 ? 41 : d == 3 ? 21 : d == 4 ? 11 : 0;
  double half = radius;
  if (per_dim > 0) {
    for (int round = 0; round < 3; ++round) {
      const Vector c = best;
      const double h = 2.0 * half / (per_dim - 1);
      std::vector<int> idx(static_cast<std::size_t>(d), 0);
      Vector x(d);
      for (;;) {
        for (Eigen::Index i = 0; i < d; ++i)
          x[i] = c[i] - half + h * idx[static_cast<std::size_t>(i)];
        const double fx = F(x);
        if (fx < fbest) {
          fbest = fx;
          best = x;
        }
        Eigen::Index k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == per_dim)
          idx[static_cast<std::size_t>(k++)] = 0;
        if (k == d)
          break;
      }
      half = h;
    }
  }
  double span = std::max(half * 10.0, 1e-3);
  for (int cycle = 0; cycle < 20000; ++cycle) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      Vector x = best;
      auto line = [&](double t) {
        x[i] = t;
        return F(x);
      };
      double lo = best[i] - span, hi = best[i] + span;
      double t = golden_section(line, lo, hi, tol);
      for (int grow = 0; grow < 60 && (hi - t < 1e-3 * (hi - lo) || t - lo < 1e-3 * (hi - lo)); ++grow) {
        lo = t - 2.0 * (hi - lo);
        hi = t + 2.0 * (hi - lo);
        t = golden_section(line, lo, hi, tol);
      }
      const double ft = line(t);
      if (ft <= fbest) {
        change = std::max(change, std::abs(t - best[i]));
        best[i] = t;
        fbest = ft;
      }
    }
    if (change <= tol * (1.0 + best.cwiseAbs().maxCoeff()))
      break;
    span = std::max(change * 4.0, 1e-9);
  }
  return best;
}

ReferenceSolution reference_solve(const ProblemSpec &spec, double tol, ReferenceMethod method) {
  if (spec.gradnorm_task)
    throw Unsupported("reference_solve: gradient-norm tasks have no composite optimum");
  if (method == ReferenceMethod::Grid) {
    if (spec.space.dim() > 10)
      throw Unsupported("reference_solve: grid path limited to d <= 10");
    ReferenceSolution out;
    out.x_ref = brute_force_minimize([&](const Vector &x) { return spec.objective(x); },
                                     Vector::Zero(spec.space.dim()), 4.0, 1e-13);
    out.f_ref = spec.objective(out.x_ref);
    out.method = "grid";
    if (spec.reg.differentiable()) {
      Vector g = spec.oracle->gradient(out.x_ref);
      if (spec.reg.lambda != 0.0)
        g += spec.reg.gradient(out.x_ref);
      out.residual = spec.space.dual_norm(g);
    }
    out.certified_tol = std::max(tol, out.residual);
    return out;
  }

  switch (spec.kind) {
  case ProblemSpec::Kind::ElasticNet:
    if (spec.metadata.at("lambda1") == 0.0)
      return linear_solve(spec, spec.metadata.at("lambda2"));
    return coordinate_descent(spec, tol);
  case ProblemSpec::Kind::Bridge:
  case ProblemSpec::Kind::Schatten:
    if (spec.space.p == 2.0)
      return linear_solve(spec, spec.metadata.at("lambda"));
    return newton_solve(spec, tol);
  case ProblemSpec::Kind::Dantzig:
  case ProblemSpec::Kind::LpRegression:
    return newton_solve(spec, tol);
  case ProblemSpec::Kind::Correlated:
    break;
  }
  throw Unsupported("reference_solve: unsupported problem kind");
}

CertificateReport replay_certificate(const Trace &trace, const ScaffoldFunction &scaffold,
                                     const ReferenceSolution &ref) {
  CertificateReport rep;
  auto fail = [&](const std::string &msg) {
    if (rep.ok)
      rep.failure = msg;
    rep.ok = false;
  };
  if (trace.rows.empty()) {
    fail("empty trace");
    return rep;
  }
  const TraceHeader &h = trace.header;
  const auto &r0 = trace.rows.front();
  if (r0.k != 0 || r0.a != 1.0 || r0.A != 1.0)
    fail("iteration 0 must have k = 0 and a_0 = A_0 = 1");
  if (std::abs(h.m0 - r0.A * r0.M) > 1e-12 * std::max(1.0, h.m0))
    fail("m0 differs from A_0 M_0");
  const double phi_ref = scaffold.value(ref.x_ref);
  double sum_a = 0.0, sum_Ad = 0.0, prev_A = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const IterationRecord &r = trace.rows[i];
    CertificateRow row;
    row.k = r.k;
    if (r.k != static_cast<int>(i))
      fail("k not contiguous at row " + std::to_string(i));
    sum_a += r.a;
    if (!(r.a > 0.0))
      fail("a_k not positive at k = " + std::to_string(r.k));
    if (std::abs(r.A - sum_a) > 1e-10 * sum_a)
      fail("A_k differs from the sum of a_i at k = " + std::to_string(r.k));
    if (i > 0 && !(r.A > prev_A))
      fail("A_k not increasing at k = " + std::to_string(r.k));
    prev_A = r.A;
    const double delta = (r.a / r.A) * h.epsilon;
    sum_Ad += r.A * delta;
    row.gap = r.obj - ref.f_ref;
    row.envelope = (2.0 * h.m0 * phi_ref + sum_Ad) / (2.0 * r.A);
    row.ok = row.gap <= row.envelope + 1e-9;
    if (!row.ok)
      fail("gap " + std::to_string(row.gap) + " exceeds envelope " + std::to_string(row.envelope) +
           " at k = " + std::to_string(r.k));
    rep.rows.push_back(row);
  }
  return rep;
}

CertificateReport replay_certificate(const Trace &trace, const ProblemSpec &spec,
                                     const ReferenceSolution &ref) {
  return replay_certificate(trace, spec.scaffold, ref);
}

std::string spec_fingerprint(const ProblemSpec &spec) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(spec.kind) << '|' << spec.space.rows << 'x' << spec.space.cols << '|';
  for (const auto &[k, v] : spec.metadata)
    os << k << '=' << v << ';';
  os << "|A" << spec.A.rows() << 'x' << spec.A.cols() << ':';
  for (Eigen::Index i = 0; i < spec.A.size(); ++i)
    os << spec.A.data()[i] << ',';
  os << "|b:";
  for (Eigen::Index i = 0; i < spec.b.size(); ++i)
    os << spec.b[i] << ',';
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

ReferenceCache::ReferenceCache(std::string directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
}

std::optional<ReferenceSolution> ReferenceCache::load(const std::string &key) const {
  std::ifstream in(std::filesystem::path(dir_) / (key + ".json"));
  if (!in)
    return std::nullopt;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    ReferenceSolution r;
    const auto x = j.at("x_ref").get<std::vector<double>>();
    r.x_ref = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
    r.f_ref = j.at("f_ref").get<double>();
    r.method = j.at("method").get<std::string>();
    r.certified_tol = j.at("certified_tol").get<double>();
    r.residual = j.at("residual").get<double>();
    return r;
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  }
}

void ReferenceCache::store(const std::string &key, const ReferenceSolution &ref) const {
  std::ofstream out(std::filesystem::path(dir_) / (key + ".json"));
  out << std::setprecision(17) << to_json(ref).dump(2) << '\n';
}

ReferenceSolution ReferenceCache::solve(const ProblemSpec &spec, double tol) const {
  const std::string key = spec_fingerprint(spec);
  if (auto hit = load(key))
    return *hit;
  ReferenceSolution r = reference_solve(spec, tol);
  store(key, r);
  return r;
}

} // namespace compcomp
