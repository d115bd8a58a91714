#include "locreg/kkt.hpp"

#include "locreg/error.hpp"

#include <cmath>

namespace locreg {

namespace {

void check_inputs(const Dictionary& X, const Vector& D, const KktRhs& rhs) {
  const Eigen::Index n = X.size();
  if (D.size() != n || rhs.b_w.size() != n || rhs.b_z.size() != n)
    throw InvalidInput("KKT block sizes do not match the atom count");
  if (!(D.array() > 0.0).all() || !D.allFinite()) throw InvalidInput("KKT scaling D must be positive and finite");
  if (!rhs.b_w.allFinite() || !rhs.b_z.allFinite() || !std::isfinite(rhs.b_y))
    throw InvalidInput("KKT right-hand side is not finite");
}

struct Residual {
  Vector r_w;
  double r_y = 0.0;
  Vector r_z;
  double norm() const { return std::sqrt(r_w.squaredNorm() + r_y * r_y + r_z.squaredNorm()); }
};

Residual residual_of(const Dictionary& X, const Vector& D, const KktRhs& rhs, const KktSolution& s) {
  Residual r;
  r.r_w = rhs.b_w - (X.points().transpose() * (X.points() * s.u_w)) - Vector::Constant(s.u_w.size(), s.u_y) + s.u_z;
  r.r_y = rhs.b_y - s.u_w.sum();
  r.r_z = rhs.b_z + s.u_w + D.cwiseProduct(s.u_z);
  return r;
}

// Factorization of the reduced system for one (X, D) pair.
class ReducedFactor {
 public:
  ReducedFactor(const Dictionary& X, const Vector& D) : D_(D) {
    trace_ = D.sum();
    mean_ = X.points() * D / trace_;
    centered_ = X.points().colwise() - mean_;
    Matrix M = (centered_.array().rowwise() * D.transpose().array()).matrix() * centered_.transpose();
    M.diagonal().array() += 1.0;
    lu_.compute(M);
  }

  bool usable() const { return std::isfinite(lu_.rcond()) && lu_.rcond() > 1e-15; }

  KktSolution solve(const KktRhs& rhs) const {
    const Vector r = rhs.b_w - rhs.b_z.cwiseQuotient(D_);
    const Vector Dr = D_.cwiseProduct(r);
    const double gamma = (Dr.sum() - rhs.b_y) / trace_;
    const Vector v = lu_.solve(centered_ * Dr + mean_ * rhs.b_y);
    KktSolution s;
    s.u_y = gamma - mean_.dot(v);
    s.u_w = D_.cwiseProduct((r.array() - gamma).matrix() - centered_.transpose() * v);
    s.u_z = -(s.u_w + rhs.b_z).cwiseQuotient(D_);
    return s;
  }

 private:
  const Vector& D_;
  double trace_ = 0.0;
  Vector mean_;
  Matrix centered_;
  Eigen::PartialPivLU<Matrix> lu_;
};

}  // namespace

Matrix assemble_kkt(const Dictionary& X, const Vector& D) {
  const Eigen::Index n = X.size();
  Matrix K = Matrix::Zero(2 * n + 1, 2 * n + 1);
  K.topLeftCorner(n, n) = X.points().transpose() * X.points();
  K.block(0, n, n, 1).setOnes();
  K.block(n, 0, 1, n).setOnes();
  K.block(0, n + 1, n, n) = -Matrix::Identity(n, n);
  K.block(n + 1, 0, n, n) = -Matrix::Identity(n, n);
  K.bottomRightCorner(n, n) = -D.asDiagonal().toDenseMatrix();
  return K;
}

double kkt_rhs_norm(const KktRhs& rhs) {
  return std::sqrt(rhs.b_w.squaredNorm() + rhs.b_y * rhs.b_y + rhs.b_z.squaredNorm());
}

double kkt_residual(const Dictionary& X, const Vector& D, const KktRhs& rhs, const KktSolution& sol) {
  return residual_of(X, D, rhs, sol).norm();
}

KktSolution kkt_direct_solve(const Dictionary& X, const Vector& D, const KktRhs& rhs) {
  check_inputs(X, D, rhs);
  const Eigen::Index n = X.size();
  const Matrix K = assemble_kkt(X, D);
  Eigen::PartialPivLU<Matrix> lu(K);
  if (!std::isfinite(lu.rcond()) || lu.rcond() < 1e-15) throw SingularKkt("assembled KKT system is singular");
  Vector b(2 * n + 1);
  b << rhs.b_w, rhs.b_y, rhs.b_z;
  Vector u = lu.solve(b);
  // One step of iterative refinement on the assembled system.
  u += lu.solve(b - K * u);
  if (!u.allFinite()) throw SingularKkt("assembled KKT solve produced non-finite values");
  KktSolution s;
  s.u_w = u.head(n);
  s.u_y = u[n];
  s.u_z = u.tail(n);
  return s;
}

KktSolution kkt_reduced_solve(const Dictionary& X, const Vector& D, const KktRhs& rhs) {
  check_inputs(X, D, rhs);
  const double bnorm = kkt_rhs_norm(rhs);
  if (bnorm == 0.0) {
    const Eigen::Index n = X.size();
    return KktSolution{Vector::Zero(n), 0.0, Vector::Zero(n), false};
  }

  const ReducedFactor factor(X, D);
  if (factor.usable()) {
    KktSolution s = factor.solve(rhs);
    // Iterative refinement against the full structured residual.
    for (int step = 0; step < 2 && s.u_w.allFinite(); ++step) {
      const Residual r = residual_of(X, D, rhs, s);
      if (r.norm() <= 1e-14 * bnorm) break;
      const KktSolution c = factor.solve(KktRhs{r.r_w, r.r_y, r.r_z});
      s.u_w += c.u_w;
      s.u_y += c.u_y;
      s.u_z += c.u_z;
    }
    if (s.u_w.allFinite() && std::isfinite(s.u_y) && s.u_z.allFinite()) {
      const double knorm = X.points().squaredNorm() + std::sqrt(static_cast<double>(X.size())) + 1.0 + D.maxCoeff();
      const double unorm = std::sqrt(s.u_w.squaredNorm() + s.u_y * s.u_y + s.u_z.squaredNorm());
      if (residual_of(X, D, rhs, s).norm() <= 1e-8 * (knorm * unorm + bnorm)) return s;
    }
  }
  KktSolution s = kkt_direct_solve(X, D, rhs);
  s.used_fallback = true;
  return s;
}

}  // namespace locreg
