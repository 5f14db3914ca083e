#include "compcomp/hardinstance.hpp"

#include "compcomp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace compcomp {

namespace {

double min_p_lnd(double p, double d) { return std::min(p, std::log(d)); }

} // namespace

HardInstance::HardInstance(const HardInstanceParams &params) : params_(params) {
  const auto &P = params_;
  if (P.d < 2 || P.M < 1 || P.M > P.d)
    throw InvalidInput("HardInstance: need d >= 2 and 1 <= M <= d");
  if (!(P.p >= 2.0) || !std::isfinite(P.p))
    throw InvalidInput("HardInstance: p must be finite and >= 2");
  if (!(P.kappa > 1.0) || P.kappa > 2.0)
    throw InvalidInput("HardInstance: kappa must lie in (1, 2]");
  if (!(P.L > 0.0) || !(P.lambda > 0.0))
    throw InvalidInput("HardInstance: L and lambda must be positive");
  if (!(P.eta > 0.0) || P.eta > 4.0)
    throw InvalidInput("HardInstance: eta must lie in (0, 4]");
  const double d = static_cast<double>(P.d);
  r_ = std::min(P.p, 3.0 * std::log(d));
  if (r_ < 2.0)
    r_ = 2.0;
  mu_bar_ = std::pow(2.0, 2.0 - P.kappa) * std::pow(min_p_lnd(P.p, d) / P.eta, P.kappa - 1.0);
  Delta_ = std::pow(static_cast<double>(P.M), -1.0 / P.p);
}

HardInstance::Answer HardInstance::resisting_query(const Vector &x) {
  if (x.size() != params_.d)
    throw InvalidInput("resisting_query: point has wrong dimension");
  if (exhausted())
    throw Exhausted("resisting_query: all " + std::to_string(params_.M) + " queries used");
  const auto t = static_cast<std::size_t>(revealed());
  const double xt = x[static_cast<Eigen::Index>(t)];
  signs_.push_back(xt < 0.0 ? -1 : 1);
  offsets_.push_back(static_cast<double>(t) * params_.eta / 4.0);
  queries_.push_back(x);

  Answer a;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    const double v = signs_[i] * x[static_cast<Eigen::Index>(i)] - offsets_[i];
    if (v > best) {
      best = v;
      a.piece = static_cast<int>(i);
    }
  }
  a.value = scale() * best;
  a.subgradient = Vector::Zero(params_.d);
  a.subgradient[a.piece] = scale() * signs_[static_cast<std::size_t>(a.piece)];
  values_.push_back(a.value);
  return a;
}

void HardInstance::complete() {
  while (!exhausted()) {
    signs_.push_back(1);
    offsets_.push_back(static_cast<double>(signs_.size() - 1) * params_.eta / 4.0);
  }
}

double HardInstance::piecewise_value(const Vector &x) const {
  if (signs_.empty())
    throw InvalidInput("piecewise_value: no piece revealed yet");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < signs_.size(); ++i)
    best = std::max(best, signs_[i] * x[static_cast<Eigen::Index>(i)] - offsets_[i]);
  return best;
}

// Only coordinates above the level t need moving, so the inner problem
// collapses to min_t t + (2/eta)(sum_i (c_i - t)_+^r)^{2/r}, convex in t,
// with minimizer in [max c - eta/4, max c].
HardInstance::Smoothed HardInstance::smoothed_eval(const Vector &x, double inner_tol) const {
  if (signs_.empty())
    throw InvalidInput("smoothed_eval: no piece revealed yet");
  if (x.size() != params_.d)
    throw InvalidInput("smoothed_eval: point has wrong dimension");
  const std::size_t n = signs_.size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = signs_[i] * x[static_cast<Eigen::Index>(i)] - offsets_[i];
  const double cmax = *std::max_element(c.begin(), c.end());
  const double eta = params_.eta;
  const double r = r_;

  auto wnorm = [&](double t) {
    double m = 0.0;
    for (double ci : c)
      m = std::max(m, ci - t);
    if (m <= 0.0)
      return 0.0;
    double s = 0.0;
    for (double ci : c)
      if (ci > t)
        s += std::pow((ci - t) / m, r);
    return m * std::pow(s, 1.0 / r);
  };
  // weights alpha_i = (4/eta) ||w||_r (w_i/||w||_r)^{r-1}; derivative is 1 - sum alpha
  auto alpha = [&](double t, std::vector<double> &out) {
    const double nw = wnorm(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = (nw > 0.0 && c[i] > t) ? (4.0 / eta) * nw * std::pow((c[i] - t) / nw, r - 1.0) : 0.0;
      sum += out[i];
    }
    return sum;
  };
  auto objective = [&](double t) {
    const double nw = wnorm(t);
    return t + (2.0 / eta) * nw * nw;
  };

  std::vector<double> al(n);
  double lo = cmax - eta / 4.0, hi = cmax;
  Smoothed out;
  int it = 0;
  for (; it < 300 && hi - lo > inner_tol * std::max(1.0, std::abs(cmax)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (alpha(mid, al) > 1.0 ? lo : hi) = mid;
  }
  out.converged = hi - lo <= inner_tol * std::max(1.0, std::abs(cmax)) * 2.0;
  const double t = 0.5 * (lo + hi);
  out.value = std::min(objective(t), cmax);
  const double total = alpha(t, al);
  out.gradient = Vector::Zero(params_.d);
  if (total > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      out.gradient[static_cast<Eigen::Index>(i)] = signs_[i] * al[i] / total;
  } else {
    // no curvature active: a single piece dominates
    const auto i = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    out.gradient[static_cast<Eigen::Index>(i)] = signs_[i];
  }
  return out;
}

double HardInstance::guarantee_bound() const {
  const double dmax = offsets_.empty() ? 0.0 : *std::max_element(offsets_.begin(), offsets_.end());
  return scale() * (-params_.eta - dmax);
}

double HardInstance::replay_min_value() const {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector &x : queries_)
    best = std::min(best, scale() * piecewise_value(x));
  return best;
}

std::string HardInstance::transcript_json() const {
  nlohmann::json j;
  j["params"] = {{"d", params_.d},         {"M", params_.M}, {"p", params_.p},
                 {"kappa", params_.kappa}, {"L", params_.L}, {"lambda", params_.lambda},
                 {"eta", params_.eta}};
  j["derived"] = {{"r", r_}, {"mu_bar", mu_bar_}, {"Delta", Delta_}};
  j["signs"] = signs_;
  j["offsets"] = offsets_;
  j["values"] = values_;
  nlohmann::json qs = nlohmann::json::array();
  for (const Vector &x : queries_)
    qs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  j["queries"] = qs;
  return j.dump(2);
}

HardInstance HardInstance::from_transcript_json(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw InvalidInput(std::string("transcript: ") + e.what());
  }
  try {
    const auto &P = j.at("params");
    HardInstanceParams hp;
    hp.d = P.at("d").get<Eigen::Index>();
    hp.M = P.at("M").get<int>();
    hp.p = P.at("p").get<double>();
    hp.kappa = P.at("kappa").get<double>();
    hp.L = P.at("L").get<double>();
    hp.lambda = P.at("lambda").get<double>();
    hp.eta = P.at("eta").get<double>();
    HardInstance h(hp);
    h.signs_ = j.at("signs").get<std::vector<int>>();
    h.offsets_ = j.at("offsets").get<std::vector<double>>();
    h.values_ = j.value("values", std::vector<double>{});
    for (const auto &q : j.at("queries")) {
      const auto v = q.get<std::vector<double>>();
      h.queries_.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (h.signs_.size() != h.offsets_.size() || static_cast<int>(h.signs_.size()) > hp.M)
      throw InvalidInput("transcript: inconsistent signs/offsets");
    return h;
  } catch (const nlohmann::json::exception &e) {
    throw InvalidInput(std::string("transcript: ") + e.what());
  }
}

namespace {

class ResistingOracle final : public SmoothOracle {
public:
  explicit ResistingOracle(std::shared_ptr<HardInstance> h)
      : SmoothOracle(NormedSpace::lp(h->params().d, h->params().p), "resisting_oracle"),
        h_(std::move(h)) {}

private:
  double do_value(const Vector &x) const override {
    if (h_->revealed() == 0)
      return 0.0;
    return h_->scale() * h_->smoothed_eval(x).value;
  }
  Vector do_gradient(const Vector &x) const override {
    if (!h_->exhausted())
      h_->resisting_query(x);
    return h_->scale() * h_->smoothed_eval(x).gradient;
  }

  std::shared_ptr<HardInstance> h_;
};

} // namespace

OraclePtr make_resisting_oracle(std::shared_ptr<HardInstance> instance) {
  return std::make_shared<ResistingOracle>(std::move(instance));
}

double gap_lower_bound(double L, double Delta, double mu_bar, double lambda, double lambda_bar,
                       double q) {
  if (!(L > 0.0) || !(Delta > 0.0) || !(mu_bar > 0.0) || !(lambda > 0.0) || !(lambda_bar > 0.0))
    throw InvalidInput("gap_lower_bound: parameters must be positive");
  if (!(q > 1.0) || !std::isfinite(q))
    throw InvalidInput("gap_lower_bound: q must lie in (1, inf)");
  const double qs = q / (q - 1.0);
  return (1.0 / (2.0 * qs)) * std::pow(L * Delta / mu_bar, qs) *
         std::pow(lambda_bar / lambda, 1.0 / (q - 1.0));
}

HardInstanceHypotheses check_hypotheses(const HardInstanceParams &params, double R) {
  const HardInstance h(params);
  const double q = std::max(2.0, params.p);
  const double M = params.M;
  HardInstanceHypotheses out;
  out.a = 2.0 * q * params.L * h.lambda_bar() / (params.lambda * h.mu_bar()) <= std::pow(R, q - 1.0);
  out.b = (M + 3.0) * params.eta <= 4.0 * R;
  out.c = (params.L / (4.0 * h.mu_bar())) * (M + 7.0) * params.eta <=
          gap_lower_bound(params.L, h.Delta(), h.mu_bar(), params.lambda, h.lambda_bar(), q);
  return out;
}

double complexity_constant(double p, double kappa) {
  const double e = 1.0 / (kappa * p + kappa - p);
  const double two = ((p - kappa) * (1.0 - 2.0 * p) + (kappa - 1.0) * p * (2.0 * p - 3.0)) / (p - 1.0);
  return std::pow(std::pow((p - 1.0) / p, kappa * (p - 1.0)) * std::pow(2.0, two), e);
}

ComplexityBound complexity_lower_bound(double p, double kappa, double L, double lambda,
                                       double epsilon, double d, double R) {
  if (!(L > 0.0) || !(lambda > 0.0) || !(epsilon > 0.0) || !(R > 0.0) || !(d >= 1.0))
    throw InvalidInput("complexity_lower_bound: parameters must be positive");
  ComplexityBound out;
  if (p == 2.0 && kappa == 2.0) {
    out.regime = "p=kappa=2";
    out.count = std::max(0.0, std::floor(std::sqrt(L / (2.0 * lambda)) - 7.0));
    out.valid = epsilon < 2.0 * std::sqrt(2.0 * lambda * L) * R * R * std::min(2.0 * lambda / L, 1.0);
    return out;
  }
  if (p >= 2.0 && std::isfinite(p) && kappa >= 1.0 && kappa <= 2.0 && kappa < p) {
    out.regime = "kappa<p";
    const double m = min_p_lnd(p, d);
    const double e = 1.0 / (kappa * p + kappa - p);
    out.count = complexity_constant(p, kappa) / std::pow(m, 2.0 * (kappa - 1.0)) *
                std::pow(std::pow(L, p) / (std::pow(lambda, kappa) * std::pow(epsilon, p - kappa)), e);
    if (kappa > 1.0) {
      const double t1 = std::pow(m, 3.0) * std::pow(std::pow(epsilon, kappa) / (L * R), 1.0 / (kappa - 1.0));
      const double rexp = (p - 1.0) * (kappa * p + kappa - p) / (kappa - 1.0);
      const double t2 = std::pow(m, 5.0) *
                        std::pow(std::pow(epsilon, p) / (std::pow(L, p + 1.0) * std::pow(R, rexp)),
                                 (kappa - 1.0) / (kappa * p + 1.0 - p));
      out.lambda_tilde = std::max(t1, t2);
      out.valid = lambda >= out.lambda_tilde;
    } else {
      out.lambda_tilde = std::numeric_limits<double>::infinity();
    }
    return out;
  }
  return out;
}

double reduction_gap_from_gradient(double epsilon_grad, double R) {
  if (epsilon_grad < 0.0 || R < 0.0)
    throw InvalidInput("reduction_gap_from_gradient: arguments must be nonnegative");
  return epsilon_grad * R;
}

} // namespace compcomp
