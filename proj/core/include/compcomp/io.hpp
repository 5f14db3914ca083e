#pragma once

#include "compcomp/solver.hpp"
#include "compcomp/spaces.hpp"

#include <iosfwd>
#include <string>

namespace compcomp {

/// Column header of the CSV trace format.
inline constexpr const char *kTraceCsvHeader =
    "k,a_k,A_k,M_k,f,psi,obj,grad_dual_norm,doublings,elapsed_ms";

/// One row per iteration, 17 significant digits.
void write_trace_csv(std::ostream &out, const Trace &trace);
/// A header object on the first line, then one object per iteration.
void write_trace_jsonl(std::ostream &out, const Trace &trace);
void write_trace(const std::string &path, const Trace &trace); ///< .jsonl selects JSONL

Trace read_trace_csv(std::istream &in);

/// Coordinate or array Matrix Market, real general. Errors carry the line number.
Matrix read_matrix_market(std::istream &in);
/// Comma-separated numbers, one matrix row per line; '#' starts a comment.
Matrix read_matrix_csv(std::istream &in);
/// Dispatches on extension: .mtx is Matrix Market, anything else CSV.
Matrix read_matrix(const std::string &path);
/// A vector file is a single column or a single row.
Vector read_vector(const std::string &path);

void write_matrix_csv(std::ostream &out, const Matrix &M);

} // namespace compcomp
