#include "locreg/geometry.hpp"

#include "locreg/combinations.hpp"
#include "locreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace locreg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::degenerate_simplex: return "degenerate-simplex";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::not_interior: return "not-interior";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::singular_kkt: return "singular-kkt";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Dictionary

Dictionary::Dictionary(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0)
    throw InvalidInput("dictionary must have at least one atom and one dimension");
  if (!points_.allFinite()) throw InvalidInput("dictionary contains non-finite coordinates");

  const Eigen::Index n = points_.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < points_.rows(); ++r) {
      if (points_(r, a) != points_(r, b)) return points_(r, a) < points_(r, b);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_.col(order[k]) == points_.col(order[k - 1])) {
      throw InvalidInput("duplicate atoms " + std::to_string(std::min(order[k], order[k - 1])) +
                         " and " + std::to_string(std::max(order[k], order[k - 1])));
    }
  }

  sq_norms_ = points_.colwise().squaredNorm().transpose();
  const Vector extent = points_.rowwise().maxCoeff() - points_.rowwise().minCoeff();
  scale_ = extent.norm();
  if (scale_ == 0.0) scale_ = std::max(1.0, points_.cwiseAbs().maxCoeff());
}

Dictionary Dictionary::from_rows(const Matrix& rows) { return Dictionary(rows.transpose()); }

Dictionary Dictionary::from_points(std::initializer_list<std::initializer_list<double>> atoms) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  const auto d = n == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(atoms.begin()->size());
  Matrix m(d, n);
  Eigen::Index j = 0;
  for (const auto& a : atoms) {
    if (static_cast<Eigen::Index>(a.size()) != d) throw InvalidInput("ragged atom list");
    Eigen::Index i = 0;
    for (double v : a) m(i++, j) = v;
    ++j;
  }
  return Dictionary(std::move(m));
}

Vector Dictionary::sq_distances(const Vector& y) const {
  check_query(y);
  Vector out = sq_norms_ - 2.0 * (points_.transpose() * y);
  out.array() += y.squaredNorm();
  return out.cwiseMax(0.0);
}

void Dictionary::check_query(const Vector& y) const {
  if (y.size() != dim())
    throw InvalidInput("query has dimension " + std::to_string(y.size()) + ", dictionary has " +
                       std::to_string(dim()));
  if (!y.allFinite()) throw InvalidInput("query contains non-finite coordinates");
}

// ---------------------------------------------------------------------------
// SimplexWeights

SimplexWeights::SimplexWeights(Vector w, double tol_feas) : w_(std::move(w)), tol_feas_(tol_feas) {
  if (w_.size() == 0) throw InvalidInput("empty weight vector");
  if (!w_.allFinite()) throw InvalidInput("non-finite weights");
  if (w_.minCoeff() < -tol_feas_) throw InvalidInput("weight below -tol_feas");
  if (std::abs(w_.sum() - 1.0) > tol_feas_) throw InvalidInput("weights do not sum to one");
}

SimplexWeights SimplexWeights::uniform(Eigen::Index n) {
  if (n < 1) throw InvalidInput("uniform weights need n >= 1");
  return SimplexWeights(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

Vector SimplexWeights::projected() const {
  Vector p = w_.cwiseMax(0.0);
  return p / p.sum();
}

// ---------------------------------------------------------------------------
// VertexSet

VertexSet::VertexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw InvalidInput("vertex set contains duplicate indices");
  if (!indices_.empty() && indices_.front() < 0) throw InvalidInput("negative vertex index");
}

bool VertexSet::contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

void VertexSet::check_bounds(Eigen::Index n) const {
  if (!indices_.empty() && indices_.back() >= n)
    throw InvalidInput("vertex index " + std::to_string(indices_.back()) + " out of range");
}

Matrix gather(const Dictionary& X, const VertexSet& S) {
  S.check_bounds(X.size());
  Matrix out(X.dim(), static_cast<Eigen::Index>(S.size()));
  for (std::size_t k = 0; k < S.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X.atom(S[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form quantities

double locality(const Dictionary& X, const SimplexWeights& w, const Vector& y) {
  if (w.size() != X.size()) throw InvalidInput("weight length does not match atom count");
  return w.projected().dot(X.sq_distances(y));
}

double locality_gap_constant(const Dictionary& X, const Vector& y) {
  const Vector dist = X.sq_distances(y);
  return dist.maxCoeff() - dist.minCoeff();
}

Circumsphere circumsphere(const Matrix& vertices, double tol_geom) {
  const Eigen::Index d = vertices.rows();
  if (vertices.cols() != d + 1)
    throw InvalidInput("circumsphere needs exactly d+1 points");
  // Centre relative to the first vertex: 2 (x_i - x_0)^T c' = |x_i - x_0|^2.
  Matrix A(d, d);
  Vector rhs(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Vector diff = vertices.col(i + 1) - vertices.col(0);
    A.row(i) = 2.0 * diff.transpose();
    rhs[i] = diff.squaredNorm();
  }
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= tol_geom * sv[0])
    throw DegenerateSimplex("affinely dependent vertices");
  Circumsphere sphere;
  sphere.center = vertices.col(0) + svd.solve(rhs);
  sphere.radius = (vertices.col(0) - sphere.center).norm();
  return sphere;
}

Circumsphere circumsphere(const Dictionary& X, const VertexSet& S, double tol_geom) {
  return circumsphere(gather(X, S), tol_geom);
}

BarycentricSystem BarycentricSystem::build(const Dictionary& X, const VertexSet& S) {
  const Eigen::Index d = X.dim();
  if (static_cast<Eigen::Index>(S.size()) != d + 1)
    throw InvalidInput("local dictionary needs d+1 vertices");
  BarycentricSystem sys;
  sys.B.resize(d + 1, d + 1);
  sys.B.topRows(d) = gather(X, S);
  sys.B.row(d).setOnes();
  const Vector sv = Eigen::JacobiSVD<Matrix>(sys.B).singularValues();
  sys.sigma_max = sv[0];
  sys.sigma_min = sv[sv.size() - 1];
  return sys;
}

Vector barycentric(const Dictionary& X, const VertexSet& S, const Vector& y) {
  X.check_query(y);
  const BarycentricSystem sys = BarycentricSystem::build(X, S);
  if (sys.degenerate()) throw DegenerateSimplex("barycentric system is singular");
  Vector z(X.dim() + 1);
  z << y, 1.0;
  return sys.B.fullPivLu().solve(z);
}

GeneralPositionReport general_position_check(const Dictionary& X, double tol_geom) {
  GeneralPositionReport report;
  const Eigen::Index d = X.dim();
  const Eigen::Index n = X.size();
  const Matrix centered = X.points().colwise() - X.points().rowwise().mean();
  const Vector sv = Eigen::JacobiSVD<Matrix>(centered).singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol_geom * std::max(sv[0], X.scale())) ++rank;
  if (n < d + 1 || rank < d) {
    report.in_general_position = false;
    report.affine_hull_deficient = true;
    return report;
  }

  const double tol = tol_geom * X.scale();
  for_each_combination(static_cast<int>(n), static_cast<int>(d + 1), [&](const std::vector<int>& idx) {
    const VertexSet S(idx);
    Circumsphere sphere;
    try {
      sphere = circumsphere(X, S, tol_geom);
    } catch (const DegenerateSimplex&) {
      return true;
    }
    for (int j = 0; j < n; ++j) {
      if (S.contains(j)) continue;
      if (std::abs((X.atom(j) - sphere.center).norm() - sphere.radius) <= tol) {
        std::vector<int> w = idx;
        w.push_back(j);
        report.in_general_position = false;
        report.witness = VertexSet(std::move(w));
        return false;
      }
    }
    return true;
  });
  return report;
}

HullProjection project_onto_simplex(const Matrix& F, const Vector& y) {
  const Eigen::Index m = F.cols();
  if (m == 0 || m > 30) throw InvalidInput("projection needs between 1 and 30 points");
  if (y.size() != F.rows()) throw InvalidInput("dimension mismatch in projection");

  HullProjection best;
  best.sq_dist = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> face;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    face.clear();
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) face.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(face.size()) - 1;
    const Vector p0 = F.col(face[0]);
    Vector alpha = Vector::Zero(m);
    Vector point = p0;
    if (k > 0) {
      Matrix A(F.rows(), k);
      for (Eigen::Index j = 0; j < k; ++j) A.col(j) = F.col(face[j + 1]) - p0;
      const auto qr = A.colPivHouseholderQr();
      if (qr.rank() < k) continue;
      const Vector beta = qr.solve(y - p0);
      if (beta.minCoeff() < -1e-13 || beta.sum() > 1.0 + 1e-13) continue;
      alpha[face[0]] = 1.0 - beta.sum();
      for (Eigen::Index j = 0; j < k; ++j) alpha[face[j + 1]] = beta[j];
      point = p0 + A * beta;
    } else {
      alpha[face[0]] = 1.0;
    }
    const double dist = (point - y).squaredNorm();
    if (dist < best.sq_dist) {
      best.sq_dist = dist;
      best.alpha = alpha.cwiseMax(0.0);
    }
  }
  return best;
}

double boundary_distance(const Dictionary& X, const VertexSet& S, const Vector& y) {
  const Vector alpha = barycentric(X, S, y);
  if (alpha.minCoeff() <= 0.0) throw NotInterior("query is not interior to the simplex");
  const Matrix V = gather(X, S);
  const Eigen::Index m = V.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index drop = 0; drop < m; ++drop) {
    Matrix facet(V.rows(), m - 1);
    for (Eigen::Index j = 0, c = 0; j < m; ++j)
      if (j != drop) facet.col(c++) = V.col(j);
    best = std::min(best, project_onto_simplex(facet, y).sq_dist);
  }
  return best;
}

SimplexWeights sample_simplex_weights(Eigen::Index n, std::mt19937_64& rng) {
  if (n < 1) throw InvalidInput("cannot sample from an empty simplex");
  std::exponential_distribution<double> expo(1.0);
  Vector e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = expo(rng);
  return SimplexWeights(e / e.sum());
}

}  // namespace locreg
