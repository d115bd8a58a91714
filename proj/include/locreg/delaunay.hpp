#pragma once

#include "locreg/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace locreg {

// Barycentric slack for simplex membership. Points on shared faces are
// reported in every incident simplex.
inline constexpr double kTolLoc = 1e-9;

/// Every (d+1)-subset of the atoms whose circumsphere has no atom strictly
/// inside. When the atoms are not in general position the list is
/// overcomplete (all empty-sphere simplices) and `unique` is false.
struct DelaunayComplex {
  std::vector<VertexSet> simplices;  // lexicographic order
  std::vector<Circumsphere> spheres;
  bool unique = true;
};

struct EnumerationLimits {
  // C(n, d+1) must not exceed this. The default admits n = 40 up to d = 4.
  std::uint64_t max_subsets = 1'000'000;
  double tol_geom = kTolGeom;
};

/// Brute-force Delaunay triangulation by the empty-circumsphere test.
/// Throws ResourceLimit above the subset budget and DegenerateInput when the
/// atoms do not span R^d.
DelaunayComplex enumerate_delaunay(const Dictionary& X, const EnumerationLimits& limits = {});

/// Simplices of the complex containing y (all barycentric coordinates
/// >= -tol_loc). Empty iff y is outside the hull.
std::vector<VertexSet> locate_simplex(const DelaunayComplex& complex, const Dictionary& X,
                                      const Vector& y, double tol_loc = kTolLoc);

/// True iff every atom outside S lies strictly outside the circumsphere of S,
/// by at least tol_geom relative to the dictionary scale.
bool is_delaunay_simplex(const Dictionary& X, const VertexSet& S, double tol_geom = kTolGeom);

nlohmann::json to_json(const DelaunayComplex& complex);
nlohmann::json to_json(const VertexSet& S);

}  // namespace locreg
