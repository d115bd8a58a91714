#include "locreg/locality.hpp"

#include "locreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace locreg {

VertexSet support(const Vector& w, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("support threshold must lie in (0, 1)");
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] > threshold) idx.push_back(static_cast<int>(i));
  return VertexSet(std::move(idx));
}

VertexSet support(const SimplexWeights& w, double threshold) { return support(w.values(), threshold); }

double jaccard(const VertexSet& a, const VertexSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const double inter = static_cast<double>(common.size());
  return inter / (static_cast<double>(a.size() + b.size()) - inter);
}

namespace {

RhoBound bound_for(const Dictionary& X, const Vector& y, const VertexSet& S) {
  RhoBound out;
  out.simplex = S;
  out.d_Sy = boundary_distance(X, S, y);
  out.C = locality_gap_constant(X, y);
  if (out.C <= 0.0) throw NotApplicable("locality gap constant is zero");
  out.rho_star = out.d_Sy / out.C;
  return out;
}

}  // namespace

RhoBound rho_bound(const Dictionary& X, const Vector& y, const DelaunayComplex& complex) {
  if (!complex.unique) throw NotApplicable("atoms are not in general position");
  const auto located = locate_simplex(complex, X, y);
  if (located.empty()) throw NotApplicable("query lies outside the convex hull");
  if (located.size() > 1)
    throw NotApplicable("query lies on a face shared by " + std::to_string(located.size()) + " simplices");
  if (barycentric(X, located.front(), y).minCoeff() <= kTolLoc)
    throw NotApplicable("query lies on the boundary of its simplex");
  return bound_for(X, y, located.front());
}

RhoBound rho_bound(const Dictionary& X, const Vector& y, const EnumerationLimits& limits) {
  return rho_bound(X, y, enumerate_delaunay(X, limits));
}

RhoBound rho_bound_certified(const Dictionary& X, const Vector& y, const VertexSet& candidate) {
  X.check_query(y);
  if (static_cast<Eigen::Index>(candidate.size()) != X.dim() + 1)
    throw NotApplicable("candidate is not a d-simplex");
  try {
    if (!is_delaunay_simplex(X, candidate)) throw NotApplicable("candidate fails the empty-sphere test");
    if (barycentric(X, candidate, y).minCoeff() <= kTolLoc)
      throw NotApplicable("query is not interior to the candidate simplex");
  } catch (const DegenerateSimplex&) {
    throw NotApplicable("candidate simplex is degenerate");
  }
  return bound_for(X, y, candidate);
}

double stability_bound(const Dictionary& X, const VertexSet& S, double rho, double eps, double C_y,
                       double C_yt) {
  if (rho < 0.0 || eps < 0.0 || C_y < 0.0 || C_yt < 0.0)
    throw InvalidInput("stability bound arguments must be nonnegative");
  const BarycentricSystem sys = BarycentricSystem::build(X, S);
  if (sys.degenerate()) throw DegenerateSimplex("local dictionary is affinely dependent");
  return (std::sqrt(rho) * (std::sqrt(C_y) + std::sqrt(C_yt)) + eps) / sys.sigma_min;
}

SolutionPath solution_path(const Dictionary& X, const Vector& y, const std::vector<double>& rho_grid,
                           const PathOptions& opts) {
  X.check_query(y);
  if (rho_grid.empty()) throw InvalidInput("rho grid is empty");
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    if (!(rho_grid[k] > 0.0) || !std::isfinite(rho_grid[k])) throw InvalidInput("rho grid must be positive");
    if (k > 0 && !(rho_grid[k] < rho_grid[k - 1])) throw InvalidInput("rho grid must be strictly decreasing");
  }
  SolutionPath path;
  path.entries.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    PathEntry entry;
    entry.rho = rho;
    try {
      entry.report = solve_relaxed(X, y, rho, opts.ipm);
      entry.support = support(entry.report.w, opts.threshold);
      entry.residual_norm = (X.points() * entry.report.w - y).norm();
      if (!entry.report.ok()) entry.error = std::string("status ") + to_string(entry.report.status);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    path.entries.push_back(std::move(entry));
  }
  return path;
}

const char* to_string(Method method) {
  switch (method) {
    case Method::relaxed: return "relaxed";
    case Method::exact: return "exact";
    case Method::chlp: return "chlp";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "relaxed") return Method::relaxed;
  if (name == "exact") return Method::exact;
  if (name == "chlp") return Method::chlp;
  if (name == "oracle") return Method::oracle;
  throw InvalidInput("unknown method '" + name + "' (expected relaxed, exact, chlp or oracle)");
}

const char* to_string(IdentifyStatus status) {
  switch (status) {
    case IdentifyStatus::ok: return "ok";
    case IdentifyStatus::outside_hull: return "outside-hull";
    case IdentifyStatus::degenerate: return "degenerate";
    case IdentifyStatus::solver_failure: return "solver-failure";
  }
  return "unknown";
}

IdentificationResult identify(const Dictionary& X, const Vector& y, Method method, const IdentifyOptions& opts) {
  X.check_query(y);
  IdentificationResult result;
  result.method = method;

  std::optional<DelaunayComplex> owned;
  auto oracle = [&]() -> const DelaunayComplex& {
    if (opts.complex) return *opts.complex;
    if (!owned) owned = enumerate_delaunay(X, opts.limits);
    return *owned;
  };

  switch (method) {
    case Method::relaxed: {
      double rho = kFallbackRho;
      if (opts.rho) {
        rho = *opts.rho;
      } else {
        try {
          rho = 0.5 * rho_bound(X, y, oracle()).rho_star;
          result.detail = "rho = 0.5 rho_star";
        } catch (const Error& e) {
          result.detail = std::string("rho fallback: ") + e.what();
        }
      }
      result.rho = rho;
      const SolveReport report = solve_relaxed(X, y, rho, opts.ipm);
      if (!report.ok()) {
        result.status = IdentifyStatus::solver_failure;
        result.detail = std::string("relaxed solver: ") + to_string(report.status);
      }
      result.support = support(report.w, opts.threshold);
      result.weights = SimplexWeights(report.w, 1e-8);
      break;
    }
    case Method::exact: {
      const SolveReport report = solve_exact(X, y, opts.lp);
      if (report.status == SolveStatus::infeasible) {
        result.status = IdentifyStatus::outside_hull;
      } else if (!report.ok()) {
        result.status = IdentifyStatus::solver_failure;
        result.detail = std::string("exact solver: ") + to_string(report.status);
      } else {
        result.support = support(report.w, opts.threshold);
        result.weights = SimplexWeights(report.w, 1e-8);
      }
      break;
    }
    case Method::chlp: {
      const ChlpResult r = chlp_locate(X, y, opts.lp);
      result.support = r.vertex_set;
      if (r.status == ChlpStatus::outside_hull) result.status = IdentifyStatus::outside_hull;
      if (r.status == ChlpStatus::degenerate) result.status = IdentifyStatus::degenerate;
      if (r.status == ChlpStatus::iteration_limit) result.status = IdentifyStatus::solver_failure;
      break;
    }
    case Method::oracle: {
      const auto located = locate_simplex(oracle(), X, y);
      if (located.empty()) {
        result.status = IdentifyStatus::outside_hull;
      } else {
        result.support = located.front();
        if (located.size() > 1 || !oracle().unique) {
          result.status = IdentifyStatus::degenerate;
          result.detail = std::to_string(located.size()) + " incident simplices";
        }
      }
      break;
    }
  }

  if (opts.verify && method != Method::oracle) {
    auto located = locate_simplex(oracle(), X, y);
    if (located.empty() && method == Method::relaxed) {
      // The projection sits on the hull boundary; the support must cover the
      // face carrying it and stay within the simplex containing it.
      const Vector target = X.points() * project_onto_hull(X, y, opts.ipm).w;
      located = locate_simplex(oracle(), X, target);
      bool agrees = false;
      for (const auto& S : located) {
        const Vector alpha = barycentric(X, S, target);
        bool covers = true;
        for (std::size_t k = 0; k < S.size(); ++k)
          if (alpha[static_cast<Eigen::Index>(k)] > kTolLoc && !result.support.contains(S[k])) covers = false;
        bool within = true;
        for (int i : result.support) within = within && S.contains(i);
        agrees = agrees || (covers && within);
      }
      result.agrees_with_oracle = agrees;
      return result;
    }
    if (result.status == IdentifyStatus::outside_hull)
      result.agrees_with_oracle = located.empty();
    else
      result.agrees_with_oracle = std::find(located.begin(), located.end(), result.support) != located.end();
  }
  return result;
}

nlohmann::json to_json(const IdentificationResult& result) {
  nlohmann::json j = {
      {"schema", "v1"},
      {"method", to_string(result.method)},
      {"status", to_string(result.status)},
      {"support", result.support.indices()},
  };
  if (result.weights) {
    const Vector& w = result.weights->values();
    j["weights"] = std::vector<double>(w.data(), w.data() + w.size());
  }
  if (result.agrees_with_oracle) j["agrees_with_oracle"] = *result.agrees_with_oracle;
  if (result.rho) j["rho"] = *result.rho;
  if (!result.detail.empty()) j["detail"] = result.detail;
  return j;
}

nlohmann::json to_json(const SolutionPath& path) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : path.entries) {
    nlohmann::json j = {
        {"rho", e.rho},
        {"support", e.support.indices()},
        {"residual_norm", e.residual_norm},
        {"report", to_json(e.report)},
    };
    if (e.error) j["error"] = *e.error;
    entries.push_back(std::move(j));
  }
  return {{"schema", "v1"}, {"entries", std::move(entries)}};
}

}  // namespace locreg
