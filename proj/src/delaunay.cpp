#include "locreg/delaunay.hpp"

#include "locreg/combinations.hpp"
#include "locreg/error.hpp"

#include <string>

namespace locreg {

DelaunayComplex enumerate_delaunay(const Dictionary& X, const EnumerationLimits& limits) {
  const Eigen::Index d = X.dim();
  const Eigen::Index n = X.size();
  if (n < d + 1) throw DegenerateInput("need at least d+1 atoms to triangulate");
  const auto subsets = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d + 1));
  if (subsets > limits.max_subsets)
    throw ResourceLimit("Delaunay enumeration needs " + std::to_string(subsets) +
                        " subsets, budget is " + std::to_string(limits.max_subsets));

  const Matrix centered = X.points().colwise() - X.points().rowwise().mean();
  const Vector sv = Eigen::JacobiSVD<Matrix>(centered).singularValues();
  if (sv.size() < d || sv[d - 1] <= limits.tol_geom * std::max(sv[0], X.scale()))
    throw DegenerateInput("atoms do not span a d-dimensional affine hull");

  const double tol = limits.tol_geom * X.scale();
  DelaunayComplex out;
  for_each_combination(static_cast<int>(n), static_cast<int>(d + 1), [&](const std::vector<int>& idx) {
    const VertexSet S(idx);
    Circumsphere sphere;
    try {
      sphere = circumsphere(X, S, limits.tol_geom);
    } catch (const DegenerateSimplex&) {
      return true;
    }
    bool empty = true;
    bool cocircular = false;
    for (Eigen::Index j = 0; j < n && empty; ++j) {
      if (S.contains(static_cast<int>(j))) continue;
      const double dist = (X.atom(j) - sphere.center).norm();
      if (dist < sphere.radius - tol)
        empty = false;
      else if (dist <= sphere.radius + tol)
        cocircular = true;
    }
    if (empty) {
      if (cocircular) out.unique = false;
      out.simplices.push_back(S);
      out.spheres.push_back(std::move(sphere));
    }
    return true;
  });
  return out;
}

std::vector<VertexSet> locate_simplex(const DelaunayComplex& complex, const Dictionary& X,
                                      const Vector& y, double tol_loc) {
  X.check_query(y);
  std::vector<VertexSet> found;
  for (const auto& S : complex.simplices) {
    if (barycentric(X, S, y).minCoeff() >= -tol_loc) found.push_back(S);
  }
  return found;
}

bool is_delaunay_simplex(const Dictionary& X, const VertexSet& S, double tol_geom) {
  if (static_cast<Eigen::Index>(S.size()) != X.dim() + 1)
    throw InvalidInput("a d-simplex needs d+1 vertices");
  const Circumsphere sphere = circumsphere(X, S, tol_geom);
  const double tol = tol_geom * X.scale();
  for (Eigen::Index j = 0; j < X.size(); ++j) {
    if (S.contains(static_cast<int>(j))) continue;
    if ((X.atom(j) - sphere.center).norm() < sphere.radius + tol) return false;
  }
  return true;
}

nlohmann::json to_json(const VertexSet& S) { return nlohmann::json(S.indices()); }

nlohmann::json to_json(const DelaunayComplex& complex) {
  nlohmann::json simplices = nlohmann::json::array();
  for (const auto& S : complex.simplices) simplices.push_back(to_json(S));
  return {{"unique", complex.unique}, {"simplices", std::move(simplices)}};
}

}  // namespace locreg
