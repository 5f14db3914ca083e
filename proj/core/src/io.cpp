#include "compcomp/io.hpp"

#include "compcomp/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace compcomp {

namespace {

std::string fmt(double v) {
  if (std::isnan(v))
    return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

nlohmann::json num(double v) {
  // JSON has no NaN
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep))
    out.push_back(cell);
  if (!line.empty() && line.back() == sep)
    out.emplace_back();
  return out;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string &cell, std::size_t line, std::size_t col) {
  const std::string t = trim(cell);
  if (t == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(col) +
                       ": not a number: '" + t + "'");
  return v;
}

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ifstream open(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("cannot open " + path);
  return in;
}

} // namespace

void write_trace_csv(std::ostream &out, const Trace &trace) {
  out << kTraceCsvHeader << '\n';
  for (const IterationRecord &r : trace.rows) {
    out << r.k << ',' << fmt(r.a) << ',' << fmt(r.A) << ',' << fmt(r.M) << ',' << fmt(r.f) << ','
        << fmt(r.psi) << ',' << fmt(r.obj) << ',' << fmt(r.grad_dual_norm) << ',' << r.doublings << ','
        << fmt(r.elapsed_ms) << '\n';
  }
}

void write_trace_jsonl(std::ostream &out, const Trace &trace) {
  const TraceHeader &h = trace.header;
  nlohmann::json head = {{"oracle", h.oracle},   {"epsilon", h.epsilon}, {"M_init", h.M_init},
                         {"m0", h.m0},           {"q", h.q},             {"lambda", h.lambda},
                         {"max_iters", h.max_iters}, {"adaptive", h.adaptive}};
  out << std::setprecision(17) << head.dump() << '\n';
  for (const IterationRecord &r : trace.rows) {
    nlohmann::json j = {{"k", r.k},          {"a_k", num(r.a)},   {"A_k", num(r.A)},
                        {"M_k", num(r.M)},   {"f", num(r.f)},     {"psi", num(r.psi)},
                        {"obj", num(r.obj)}, {"grad_dual_norm", num(r.grad_dual_norm)},
                        {"doublings", r.doublings}, {"elapsed_ms", num(r.elapsed_ms)}};
    out << j.dump() << '\n';
  }
}

void write_trace(const std::string &path, const Trace &trace) {
  std::ofstream out(path);
  if (!out)
    throw InvalidInput("cannot write " + path);
  if (ends_with(path, ".jsonl"))
    write_trace_jsonl(out, trace);
  else
    write_trace_csv(out, trace);
}

Trace read_trace_csv(std::istream &in) {
  Trace t;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || trim(line) != kTraceCsvHeader)
    throw InvalidInput("trace: header row differs from the expected schema");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    const auto cells = split(line, ',');
    if (cells.size() != 10)
      throw InvalidInput("trace: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                         " fields, expected 10");
    std::vector<double> v;
    for (std::size_t c = 0; c < cells.size(); ++c)
      v.push_back(parse_number(cells[c], lineno, c + 1));
    IterationRecord r;
    r.k = static_cast<int>(v[0]);
    r.a = v[1];
    r.A = v[2];
    r.M = v[3];
    r.f = v[4];
    r.psi = v[5];
    r.obj = v[6];
    r.grad_dual_norm = v[7];
    r.doublings = static_cast<int>(v[8]);
    r.elapsed_ms = v[9];
    t.rows.push_back(r);
  }
  return t;
}

Matrix read_matrix_market(std::istream &in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw InvalidInput("line 1: missing %%MatrixMarket banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || (format != "coordinate" && format != "array"))
    throw InvalidInput("line 1: only 'matrix coordinate' and 'matrix array' are supported");
  if (field != "real" && field != "integer" && field != "double")
    throw InvalidInput("line 1: unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw InvalidInput("line 1: unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  auto next = [&](std::string &out) {
    while (std::getline(in, out)) {
      ++lineno;
      const std::string t = trim(out);
      if (!t.empty() && t[0] != '%')
        return true;
    }
    return false;
  };
  if (!next(line))
    throw InvalidInput("line " + std::to_string(lineno) + ": missing size line");
  std::istringstream sz(line);
  long rows = -1, cols = -1, nnz = -1;
  sz >> rows >> cols;
  if (format == "coordinate")
    sz >> nnz;
  if (!sz || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
    throw InvalidInput("line " + std::to_string(lineno) + ": malformed size line");

  Matrix M = Matrix::Zero(rows, cols);
  if (format == "array") {
    for (long j = 0; j < cols; ++j)
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next(line))
          throw InvalidInput("line " + std::to_string(lineno) + ": too few entries");
        M(i, j) = parse_number(line, lineno, 1);
        if (symmetric)
          M(j, i) = M(i, j);
      }
    return M;
  }
  for (long e = 0; e < nnz; ++e) {
    if (!next(line))
      throw InvalidInput("line " + std::to_string(lineno) + ": expected " + std::to_string(nnz) + " entries");
    std::istringstream es(line);
    long i = 0, j = 0;
    std::string val;
    es >> i >> j >> val;
    if (!es && !es.eof())
      throw InvalidInput("line " + std::to_string(lineno) + ": malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw InvalidInput("line " + std::to_string(lineno) + ": index out of range");
    M(i - 1, j - 1) = parse_number(val, lineno, 3);
    if (symmetric)
      M(j - 1, i - 1) = M(i - 1, j - 1);
  }
  return M;
}

Matrix read_matrix_csv(std::istream &in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.resize(hash);
    if (trim(line).empty())
      continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c)
      row.push_back(parse_number(cells[c], lineno, c + 1));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InvalidInput("line " + std::to_string(lineno) + ": " + std::to_string(row.size()) +
                         " columns, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw InvalidInput("csv: no data rows");
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return M;
}

Matrix read_matrix(const std::string &path) {
  auto in = open(path);
  try {
    return ends_with(path, ".mtx") ? read_matrix_market(in) : read_matrix_csv(in);
  } catch (const InvalidInput &e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

Vector read_vector(const std::string &path) {
  const Matrix M = read_matrix(path);
  if (M.cols() == 1)
    return M.col(0);
  if (M.rows() == 1)
    return M.row(0).transpose();
  throw InvalidInput(path + ": expected a single row or column, got " + std::to_string(M.rows()) + "x" +
                     std::to_string(M.cols()));
}

void write_matrix_csv(std::ostream &out, const Matrix &M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      out << (j ? "," : "") << fmt(M(i, j));
    out << '\n';
  }
}

} // namespace compcomp
