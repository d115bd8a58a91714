#pragma once

#include "locreg/delaunay.hpp"
#include "locreg/geometry.hpp"
#include "locreg/lp.hpp"
#include "locreg/qp.hpp"
#include "locreg/report.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace locreg {

inline constexpr double kDefaultThreshold = 1e-6;
// Fallback rho for the relaxed method when no bound can be computed.
inline constexpr double kFallbackRho = 1e-7;

/// Indices with w_i > threshold. threshold must lie in (0, 1).
VertexSet support(const Vector& w, double threshold = kDefaultThreshold);
VertexSet support(const SimplexWeights& w, double threshold = kDefaultThreshold);

/// |a n b| / |a u b|, and 1 when both are empty.
double jaccard(const VertexSet& a, const VertexSet& b);

/// Sufficient regularization level for exact simplex recovery:
/// rho_star = d_Sy / C, with d_Sy the squared distance from y to the
/// boundary of its Delaunay simplex and C the locality gap constant.
struct RhoBound {
  double rho_star = 0.0;
  VertexSet simplex;
  double C = 0.0;
  double d_Sy = 0.0;
};

/// Locates y with the enumerated oracle complex. Throws NotApplicable if the
/// complex is not unique, or y is on a face or outside the hull.
RhoBound rho_bound(const Dictionary& X, const Vector& y, const DelaunayComplex& complex);
RhoBound rho_bound(const Dictionary& X, const Vector& y, const EnumerationLimits& limits = {});

/// Same bound with a caller-supplied candidate simplex (e.g. the support of
/// the exact solution). The candidate is accepted only if it passes the
/// empty-sphere test and contains y strictly; otherwise NotApplicable.
RhoBound rho_bound_certified(const Dictionary& X, const Vector& y, const VertexSet& candidate);

/// Perturbation bound on |w_rho - w~_rho| for two queries in the same
/// Delaunay simplex S:
///   (sqrt(rho) (sqrt(C_y) + sqrt(C_yt)) + eps) / sigma_min([X_S; 1^T]).
/// The caller certifies the shared-simplex hypothesis.
double stability_bound(const Dictionary& X, const VertexSet& S, double rho, double eps, double C_y,
                       double C_yt);

struct PathEntry {
  double rho = 0.0;
  SolveReport report;
  VertexSet support;
  double residual_norm = 0.0;  // |Xw - y|
  std::optional<std::string> error;
};

/// Relaxed solutions over a strictly decreasing rho grid, each solved
/// independently.
struct SolutionPath {
  std::vector<PathEntry> entries;
};

struct PathOptions {
  double threshold = kDefaultThreshold;
  IpmOptions ipm;
};

SolutionPath solution_path(const Dictionary& X, const Vector& y, const std::vector<double>& rho_grid,
                           const PathOptions& opts = {});

enum class Method { relaxed, exact, chlp, oracle };
const char* to_string(Method method);
Method parse_method(const std::string& name);

enum class IdentifyStatus { ok, outside_hull, degenerate, solver_failure };
const char* to_string(IdentifyStatus status);

struct IdentifyOptions {
  std::optional<double> rho;  // relaxed only; default 0.5 rho_star or kFallbackRho
  double threshold = kDefaultThreshold;
  bool verify = false;
  IpmOptions ipm;
  LpOptions lp;
  EnumerationLimits limits;
  // Reused oracle complex; enumerated on demand when null.
  const DelaunayComplex* complex = nullptr;
};

struct IdentificationResult {
  Method method = Method::relaxed;
  IdentifyStatus status = IdentifyStatus::ok;
  VertexSet support;
  std::optional<SimplexWeights> weights;
  std::optional<bool> agrees_with_oracle;
  std::optional<double> rho;
  std::string detail;
};

/// Finds the Delaunay simplex containing y with the chosen method. Never
/// switches methods; cross-checking happens only through opts.verify. For y
/// outside the hull the relaxed method reports the support of its projection
/// regime; exact and chlp report outside_hull.
IdentificationResult identify(const Dictionary& X, const Vector& y, Method method,
                              const IdentifyOptions& opts = {});

nlohmann::json to_json(const IdentificationResult& result);
nlohmann::json to_json(const SolutionPath& path);

}  // namespace locreg
