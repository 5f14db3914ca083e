#pragma once

#include <compcomp/apps.hpp>
#include <compcomp/hardinstance.hpp>

#include <map>
#include <optional>
#include <string>

namespace compcomp::cli {

/// A parsed problem-spec file: a builder name, its scalar parameters and data.
struct SpecFile {
  std::string builder;
  std::map<std::string, double> params;
  Matrix A;
  Vector b;
  Matrix mask; ///< schatten only
  std::string A_source = "<inline>";
  std::string b_source = "<inline>";
};

/// Builders accepted in spec files, with their required parameters.
const std::map<std::string, std::vector<std::string>> &builder_table();

/// Relative data paths resolve against the spec file's directory. Non-empty
/// overrides replace the file's "A" and "b" entries.
SpecFile load_spec_file(const std::string &path, const std::string &A_override = {},
                        const std::string &b_override = {});
SpecFile parse_spec_text(const std::string &text, const std::string &base_dir);

/// Writes `path` plus sibling CSV files for the data, 17 significant digits.
void save_spec_file(const std::string &path, const SpecFile &spec);

/// 64-bit FNV-1a over the builder, sorted parameters and data, as 16 hex digits.
std::string spec_hash(const SpecFile &spec);

/// --p and --lambda overrides, mapped onto each builder's own parameter names.
void apply_overrides(SpecFile &spec, std::optional<double> p, std::optional<double> lambda);

bool is_hard_instance(const SpecFile &spec);
bool is_least_squares(const SpecFile &spec);

ProblemSpec build_problem(const SpecFile &spec);
HardInstanceParams hard_params(const SpecFile &spec);

} // namespace compcomp::cli
