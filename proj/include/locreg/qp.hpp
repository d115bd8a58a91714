#pragma once

#include "locreg/geometry.hpp"
#include "locreg/kkt.hpp"
#include "locreg/report.hpp"

namespace locreg {

/// min 0.5 w^T X^T X w + q^T w  s.t.  1^T w = 1, w >= 0,
/// with q = rho c - X^T y and c_i = |x_i - y|^2. Same minimizers as
/// 0.5 |Xw - y|^2 + rho sum_i w_i |x_i - y|^2 over the simplex.
struct QpProblem {
  const Dictionary* X = nullptr;
  Vector q;
  double rho = 0.0;
  Vector y;

  static QpProblem build(const Dictionary& X, const Vector& y, double rho);
};

/// Interior-point iterate. The inequality -w <= 0 has w itself as its
/// slack, so the primal variable doubles as the slack and stays strictly
/// positive.
struct IpmState {
  Vector w;
  double lambda = 0.0;
  Vector z;
  double mu = 0.0;
  int iterate = 0;
};

struct IpmOptions {
  double tol = 1e-9;
  int max_iter = 100;
};

/// Primal-dual Mehrotra predictor-corrector on the problem above, starting
/// from w = 1/n, z = 1. Each Newton system is solved by kkt_reduced_solve
/// with D = w / z. The returned w is strictly positive; use a threshold to
/// read off a support.
///
/// Converged when |1^T w - 1|, |grad + lambda 1 - z|_inf and w^T z are each
/// at most tol * min(1, rho) (tol alone for rho = 0). If that cannot be
/// reached before progress stalls, the unscaled test with tol is accepted.
SolveReport solve_relaxed(const Dictionary& X, const Vector& y, double rho, const IpmOptions& opts = {});

/// Euclidean projection of y onto conv(X): the relaxed problem at rho = 0.
/// Only Xw is unique.
SolveReport project_onto_hull(const Dictionary& X, const Vector& y, const IpmOptions& opts = {});

}  // namespace locreg
