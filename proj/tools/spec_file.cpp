#include "spec_file.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/io.hpp>

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace compcomp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const std::map<std::string, std::vector<std::string>> &builder_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"elastic_net", {"lambda1", "lambda2"}},
      {"bridge", {"lambda", "p"}},
      {"dantzig", {"lambda", "approx_eps"}},
      {"lp_regression", {"p"}},
      {"correlated", {"p_star"}},
      {"schatten", {"lambda", "p"}},
      {"least_squares", {"p"}},
      {"hard_instance", {"d", "M", "p", "kappa", "L", "lambda", "eta"}},
  };
  return table;
}

namespace {

Matrix matrix_from_json(const json &j, const std::string &what) {
  if (!j.is_array() || j.empty())
    throw InvalidInput(what + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json &row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidInput(what + ": row " + std::to_string(r + 1) + " has a different length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json &v = row.at(static_cast<std::size_t>(c));
      if (!v.is_number())
        throw InvalidInput(what + ": row " + std::to_string(r + 1) + ", column " +
                           std::to_string(c + 1) + " is not a number");
      M(r, c) = v.get<double>();
    }
  }
  return M;
}

Vector vector_from_json(const json &j, const std::string &what) {
  if (!j.is_array())
    throw InvalidInput(what + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw InvalidInput(what + ": entry " + std::to_string(i + 1) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::string resolve(const std::string &path, const std::string &base_dir) {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty())
    return p.string();
  return (fs::path(base_dir) / p).string();
}

Matrix load_matrix(const std::string &path) {
  if (!fs::exists(path))
    throw InvalidInput(path + ": no such file");
  return read_matrix(path);
}

Vector load_vector(const std::string &path) {
  if (!fs::exists(path))
    throw InvalidInput(path + ": no such file");
  return read_vector(path);
}

void check_dims(const SpecFile &s) {
  if (s.A.rows() != s.b.size())
    throw InvalidInput("dimension mismatch: A (" + s.A_source + ") has " +
                       std::to_string(s.A.rows()) + " rows but b (" + s.b_source + ") has " +
                       std::to_string(s.b.size()) + " entries");
}

void write_vector_csv(std::ostream &out, const Vector &v) {
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << buf << '\n';
  }
}

void fnv(std::uint64_t &h, const std::string &s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void fnv_matrix(std::uint64_t &h, const std::string &tag, const Matrix &M) {
  fnv(h, tag + ":" + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + "|");
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      fnv(h, num(M(r, c)) + ",");
}

double param(const SpecFile &s, const std::string &key) {
  const auto it = s.params.find(key);
  if (it == s.params.end())
    throw InvalidInput("spec: builder '" + s.builder + "' needs parameter '" + key + "'");
  return it->second;
}

} // namespace

SpecFile parse_spec_text(const std::string &text, const std::string &base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInput(std::string("spec: ") + e.what());
  }
  if (!j.is_object())
    throw InvalidInput("spec: top level must be an object");

  SpecFile s;
  if (!j.contains("builder") || !j["builder"].is_string())
    throw InvalidInput("spec: missing string field 'builder'");
  s.builder = j["builder"].get<std::string>();
  const auto entry = builder_table().find(s.builder);
  if (entry == builder_table().end()) {
    std::string names;
    for (const auto &kv : builder_table())
      names += (names.empty() ? "" : ", ") + kv.first;
    throw InvalidInput("spec: unknown builder '" + s.builder + "' (known: " + names + ")");
  }
  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw InvalidInput("spec: 'params' must be an object");
    for (const auto &[k, v] : j["params"].items()) {
      if (!v.is_number())
        throw InvalidInput("spec: parameter '" + k + "' is not a number");
      s.params[k] = v.get<double>();
    }
  }
  for (const std::string &k : entry->second)
    param(s, k);

  if (s.builder == "hard_instance")
    return s;

  const bool schatten = s.builder == "schatten";
  if ((!schatten && !j.contains("A")) || !j.contains("b"))
    throw InvalidInput("spec: builder '" + s.builder + "' needs data fields " +
                       (schatten ? "'mask' and 'b'" : "'A' and 'b'"));
  if (schatten) {
    s.A_source = "<mask>";
  } else if (j["A"].is_string()) {
    s.A_source = resolve(j["A"].get<std::string>(), base_dir);
    s.A = load_matrix(s.A_source);
  } else {
    s.A = matrix_from_json(j["A"], "spec field A");
  }
  if (j["b"].is_string()) {
    s.b_source = resolve(j["b"].get<std::string>(), base_dir);
    s.b = load_vector(s.b_source);
  } else {
    s.b = vector_from_json(j["b"], "spec field b");
  }
  if (schatten) {
    // b holds the observed entries in column-major mask order
    if (!j.contains("mask"))
      throw InvalidInput("spec: builder 'schatten' needs a 'mask' field");
    s.mask = j["mask"].is_string() ? load_matrix(resolve(j["mask"].get<std::string>(), base_dir))
                                   : matrix_from_json(j["mask"], "spec field mask");
  } else {
    check_dims(s);
  }
  return s;
}

SpecFile load_spec_file(const std::string &path, const std::string &A_override,
                        const std::string &b_override) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput(path + ": cannot open spec file");
  std::stringstream ss;
  ss << in.rdbuf();
  SpecFile s;
  try {
    s = parse_spec_text(ss.str(), fs::path(path).parent_path().string());
  } catch (const InvalidInput &e) {
    throw InvalidInput(path + ": " + e.what());
  }
  if (!A_override.empty()) {
    s.A = load_matrix(A_override);
    s.A_source = A_override;
  }
  if (!b_override.empty()) {
    s.b = load_vector(b_override);
    s.b_source = b_override;
  }
  if ((!A_override.empty() || !b_override.empty()) && s.builder != "schatten")
    check_dims(s);
  return s;
}

void save_spec_file(const std::string &path, const SpecFile &spec) {
  const fs::path p(path);
  if (p.has_parent_path())
    fs::create_directories(p.parent_path());
  const std::string stem = p.stem().string();
  json j;
  j["builder"] = spec.builder;
  j["params"] = json::object();
  for (const auto &[k, v] : spec.params)
    j["params"][k] = v;
  auto sibling = [&](const std::string &suffix) { return (p.parent_path() / (stem + suffix)).string(); };
  auto name = [&](const std::string &suffix) { return stem + suffix; };
  if (spec.builder != "hard_instance") {
    if (spec.builder == "schatten") {
      std::ofstream m(sibling(".mask.csv"));
      write_matrix_csv(m, spec.mask);
      j["mask"] = name(".mask.csv");
    } else {
      std::ofstream a(sibling(".A.csv"));
      write_matrix_csv(a, spec.A);
      j["A"] = name(".A.csv");
    }
    std::ofstream b(sibling(".b.csv"));
    write_vector_csv(b, spec.b);
    j["b"] = name(".b.csv");
  }
  std::ofstream out(path);
  if (!out)
    throw InvalidInput(path + ": cannot write spec file");
  out << j.dump(2) << '\n';
}

std::string spec_hash(const SpecFile &spec) {
  std::uint64_t h = 1469598103934665603ULL;
  fnv(h, spec.builder + "|");
  for (const auto &[k, v] : spec.params)
    fnv(h, k + "=" + num(v) + "|");
  fnv_matrix(h, "A", spec.A);
  fnv_matrix(h, "b", spec.b);
  fnv_matrix(h, "mask", spec.mask);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void apply_overrides(SpecFile &spec, std::optional<double> p, std::optional<double> lambda) {
  if (p) {
    if (spec.builder == "correlated")
      spec.params["p_star"] = dual_exponent(*p);
    else if (spec.builder == "elastic_net" || spec.builder == "dantzig")
      throw InvalidInput("--p does not apply to builder '" + spec.builder + "'");
    else
      spec.params["p"] = *p;
  }
  if (lambda) {
    if (spec.builder == "elastic_net")
      spec.params["lambda1"] = *lambda;
    else if (spec.params.count("lambda"))
      spec.params["lambda"] = *lambda;
    else
      throw InvalidInput("--lambda does not apply to builder '" + spec.builder + "'");
  }
}

bool is_hard_instance(const SpecFile &spec) { return spec.builder == "hard_instance"; }
bool is_least_squares(const SpecFile &spec) { return spec.builder == "least_squares"; }

ProblemSpec build_problem(const SpecFile &s) {
  if (s.builder == "elastic_net")
    return build_elastic_net(s.A, s.b, param(s, "lambda1"), param(s, "lambda2"));
  if (s.builder == "bridge")
    return build_bridge(s.A, s.b, param(s, "lambda"), param(s, "p"));
  if (s.builder == "dantzig")
    return build_dantzig(s.A, s.b, param(s, "lambda"), param(s, "approx_eps"));
  if (s.builder == "lp_regression")
    return build_lp_regression(s.A, s.b, param(s, "p"));
  if (s.builder == "correlated")
    return build_correlated(s.A, s.b, param(s, "p_star"));
  if (s.builder == "schatten")
    return build_schatten_problem(LinearMap::from_mask(s.mask), s.b, param(s, "lambda"),
                                  param(s, "p"));
  throw InvalidInput("spec: builder '" + s.builder + "' does not describe a composite problem");
}

HardInstanceParams hard_params(const SpecFile &s) {
  HardInstanceParams P;
  P.d = static_cast<Eigen::Index>(param(s, "d"));
  P.M = static_cast<int>(param(s, "M"));
  P.p = param(s, "p");
  P.kappa = param(s, "kappa");
  P.L = param(s, "L");
  P.lambda = param(s, "lambda");
  P.eta = param(s, "eta");
  return P;
}

} // namespace compcomp::cli
