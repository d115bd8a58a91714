#pragma once

#include "locreg/geometry.hpp"

namespace locreg {

/// Right-hand side and solution of the structured Newton system
///
///   [ X^T X   1   -I ] [u_w]   [b_w]
///   [ 1^T     0    0 ] [u_y] = [b_y]
///   [ -I      0   -D ] [u_z]   [b_z]
///
/// with D a positive diagonal. This is the sign convention that arises in the
/// interior-point iteration for min 0.5 w^T X^T X w + q^T w over the simplex
/// (D = w / z); the lower-right block is negative so the system is
/// nonsingular for every positive D.
struct KktRhs {
  Vector b_w;
  double b_y = 0.0;
  Vector b_z;
};

struct KktSolution {
  Vector u_w;
  double u_y = 0.0;
  Vector u_z;
  bool used_fallback = false;
};

/// The assembled (2n+1) x (2n+1) matrix. Forms X^T X explicitly.
Matrix assemble_kkt(const Dictionary& X, const Vector& D);

/// |K u - b| (Euclidean), evaluated without forming X^T X.
double kkt_residual(const Dictionary& X, const Vector& D, const KktRhs& rhs, const KktSolution& sol);
double kkt_rhs_norm(const KktRhs& rhs);

/// Dense LU with partial pivoting on the assembled system. Oracle use only.
/// Throws SingularKkt when the factorization is numerically singular.
KktSolution kkt_direct_solve(const Dictionary& X, const Vector& D, const KktRhs& rhs);

/// Block elimination down to a d x d system in v = X u_w:
///   u_z = -D^-1 (u_w + b_z),  u_y from the trace of D,  then
///   (I + X_c D X_c^T) v = X_c D r + m b_y
/// where m = X D 1 / tr(D), X_c = X - m 1^T and r = b_w - D^-1 b_z.
/// O(n d^2 + d^3) per call. Falls back to kkt_direct_solve (and flags it)
/// if the normwise backward error |K u - b| / (|K| |u| + |b|) exceeds 1e-8,
/// with |K| bounded by |X|_F^2 + sqrt(n) + 1 + max(D).
KktSolution kkt_reduced_solve(const Dictionary& X, const Vector& D, const KktRhs& rhs);

}  // namespace locreg
