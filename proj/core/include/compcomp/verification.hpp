#pragma once

#include "compcomp/apps.hpp"
#include "compcomp/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace compcomp {

struct ReferenceSolution {
  Vector x_ref;
  double f_ref = 0.0;
  std::string method; ///< grid | golden-1d | newton | coordinate-descent | linear-solve
  double certified_tol = 0.0;
  double residual = 0.0; ///< first-order residual in the dual norm (or KKT violation)
};

enum class ReferenceMethod { Auto, Grid };

/// High-accuracy solution by a route independent of agd_plus.
ReferenceSolution reference_solve(const ProblemSpec &spec, double tol = 1e-10,
                                  ReferenceMethod method = ReferenceMethod::Auto);

/// Derivative-free minimization of a convex function on a small box:
/// grid with 3 refinement rounds (factor 10), then cyclic golden-section
/// coordinate polishing.
Vector brute_force_minimize(const std::function<double(const Vector &)> &F, const Vector &center,
                            double radius, double tol = 1e-12);

/// Minimize a 1-D convex function on [lo, hi] by golden-section search.
double golden_section(const std::function<double(double)> &f, double lo, double hi,
                      double tol = 1e-12);

struct CertificateRow {
  int k = 0;
  double gap = 0.0;
  double envelope = 0.0;
  bool ok = true;
};

struct CertificateReport {
  std::vector<CertificateRow> rows;
  bool ok = true;
  std::string failure; ///< first violated check
};

/// Checks the trace's bookkeeping (contiguous k, A_k = sum a_i, increasing A_k)
/// and that obj_k - f_ref <= (2 m0 phi(x_ref) + sum_i A_i delta_i) / (2 A_k) + 1e-9.
CertificateReport replay_certificate(const Trace &trace, const ScaffoldFunction &scaffold,
                                     const ReferenceSolution &ref);
CertificateReport replay_certificate(const Trace &trace, const ProblemSpec &spec,
                                     const ReferenceSolution &ref);

/// 64-bit FNV-1a over a canonical rendering of the spec's kind, parameters and data.
std::string spec_fingerprint(const ProblemSpec &spec);

/// JSON file cache of reference solutions keyed by spec_fingerprint.
class ReferenceCache {
public:
  explicit ReferenceCache(std::string directory);
  std::optional<ReferenceSolution> load(const std::string &key) const;
  void store(const std::string &key, const ReferenceSolution &ref) const;
  ReferenceSolution solve(const ProblemSpec &spec, double tol = 1e-10) const;

private:
  std::string dir_;
};

} // namespace compcomp
