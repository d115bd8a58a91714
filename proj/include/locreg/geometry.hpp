#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

namespace locreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Cocircularity / affine-degeneracy tolerance, relative to the scale of the
// points involved.
inline constexpr double kTolGeom = 1e-9;
// Feasibility slack allowed on simplex weights.
inline constexpr double kTolFeas = 1e-9;

/// A fixed set of n atoms in R^d, stored column-wise (column i is atom x_i).
///
/// Columns must be finite and pairwise distinct. Squared norms are cached so
/// squared distances can be formed as |x|^2 - 2 x.y + |y|^2.
class Dictionary {
 public:
  explicit Dictionary(Matrix points);

  /// Builds a dictionary from an n x d matrix whose rows are atoms.
  static Dictionary from_rows(const Matrix& rows);
  static Dictionary from_points(std::initializer_list<std::initializer_list<double>> atoms);

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }

  const Matrix& points() const { return points_; }
  auto atom(Eigen::Index i) const { return points_.col(i); }
  const Vector& sq_norms() const { return sq_norms_; }

  /// Length of the bounding-box diagonal; the reference length for
  /// relative geometric tolerances. Never smaller than 1e-300.
  double scale() const { return scale_; }

  /// |x_i - y|^2 for every atom.
  Vector sq_distances(const Vector& y) const;

  void check_query(const Vector& y) const;

 private:
  Matrix points_;
  Vector sq_norms_;
  double scale_ = 0.0;
};

/// A point of the probability simplex, up to a stored feasibility slack.
class SimplexWeights {
 public:
  explicit SimplexWeights(Vector w, double tol_feas = kTolFeas);

  /// Uniform weights 1/n.
  static SimplexWeights uniform(Eigen::Index n);

  const Vector& values() const { return w_; }
  Eigen::Index size() const { return w_.size(); }
  double tol_feas() const { return tol_feas_; }
  double operator[](Eigen::Index i) const { return w_[i]; }

  /// Negative entries clamped to zero and the result renormalized; lies
  /// exactly on the simplex.
  Vector projected() const;

 private:
  Vector w_;
  double tol_feas_;
};

/// Sorted, duplicate-free set of atom indices identifying a simplex or a
/// support.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<int> indices);
  VertexSet(std::initializer_list<int> indices)
      : VertexSet(std::vector<int>(indices)) {}

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int i) const;
  int operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Throws InvalidInput unless every index lies in [0, n).
  void check_bounds(Eigen::Index n) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<int> indices_;
};

struct Circumsphere {
  Vector center;
  double radius = 0.0;
};

/// The (d+1) x (d+1) matrix [X_S; 1^T] of a local dictionary together with
/// its smallest singular value.
struct BarycentricSystem {
  Matrix B;
  double sigma_min = 0.0;
  double sigma_max = 0.0;

  static BarycentricSystem build(const Dictionary& X, const VertexSet& S);
  bool degenerate(double tol = kTolGeom) const { return sigma_min <= tol * std::max(1.0, sigma_max); }
};

struct GeneralPositionReport {
  bool in_general_position = true;
  bool affine_hull_deficient = false;
  // d+2 indices sharing a common hypersphere, when one was found.
  std::optional<VertexSet> witness;
};

/// Columns of X selected by S, as a d x |S| matrix.
Matrix gather(const Dictionary& X, const VertexSet& S);

/// Sum_i w_i |x_i - y|^2, evaluated on the projected weights.
double locality(const Dictionary& X, const SimplexWeights& w, const Vector& y);

/// max_i |x_i - y|^2 - min_i |x_i - y|^2.
double locality_gap_constant(const Dictionary& X, const Vector& y);

/// Circumscribing sphere of d+1 points given as the columns of a d x (d+1)
/// matrix. Throws DegenerateSimplex if the points are affinely dependent.
Circumsphere circumsphere(const Matrix& vertices, double tol_geom = kTolGeom);
Circumsphere circumsphere(const Dictionary& X, const VertexSet& S, double tol_geom = kTolGeom);

/// Barycentric coordinates of y with respect to the d+1 atoms in S. Entries
/// may be negative when y is outside the simplex.
Vector barycentric(const Dictionary& X, const VertexSet& S, const Vector& y);

/// Exhaustive check over all (d+1)-subsets. Desk scale only.
GeneralPositionReport general_position_check(const Dictionary& X, double tol_geom = kTolGeom);

/// Closest point of conv(F) to y, F holding at most d+1 affinely
/// independent points as columns. Exact: every face is tried.
struct HullProjection {
  Vector alpha;
  double sq_dist = 0.0;
};
HullProjection project_onto_simplex(const Matrix& F, const Vector& y);

/// Squared distance from y to the boundary of conv(S). Throws NotInterior if
/// some barycentric coordinate of y is not positive.
double boundary_distance(const Dictionary& X, const VertexSet& S, const Vector& y);

/// Uniform sample from the probability simplex via normalized exponentials.
SimplexWeights sample_simplex_weights(Eigen::Index n, std::mt19937_64& rng);

}  // namespace locreg
