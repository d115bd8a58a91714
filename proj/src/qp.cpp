#include "locreg/qp.hpp"

#include "locreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace locreg {

QpProblem QpProblem::build(const Dictionary& X, const Vector& y, double rho) {
  X.check_query(y);
  if (!std::isfinite(rho) || rho < 0.0) throw InvalidInput("rho must be finite and nonnegative");
  QpProblem qp;
  qp.X = &X;
  qp.rho = rho;
  qp.y = y;
  qp.q = rho * X.sq_distances(y) - X.points().transpose() * y;
  return qp;
}

namespace {

double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

struct Measures {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;

  bool within(double tol, double primal_tol, double dual_tol) const {
    return primal <= primal_tol && dual <= dual_tol && gap <= tol;
  }
  bool within(double tol) const { return within(tol, tol, tol); }
};

Measures measure(const QpProblem& qp, const IpmState& s, Vector& rd, double& rp) {
  const Matrix& P = qp.X->points();
  rd = P.transpose() * (P * s.w) + qp.q - s.z;
  rd.array() += s.lambda;
  rp = s.w.sum() - 1.0;
  return Measures{std::abs(rp), rd.cwiseAbs().maxCoeff(), s.w.dot(s.z)};
}

}  // namespace

SolveReport solve_relaxed(const Dictionary& X, const Vector& y, double rho, const IpmOptions& opts) {
  const QpProblem qp = QpProblem::build(X, y, rho);
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw InvalidInput("IPM needs tol > 0 and max_iter >= 1");
  const Eigen::Index n = X.size();
  // The duals of atoms off the support scale with rho, so the gap has to
  // shrink with rho for the weights of those atoms to vanish. Residuals
  // cannot go below rounding level.
  const double eps = std::numeric_limits<double>::epsilon();
  const double strict_tol = rho > 0.0 ? opts.tol * std::min(1.0, rho) : opts.tol;
  const double primal_floor = static_cast<double>(n) * eps;
  const double dual_floor = 10.0 * eps * (1.0 + qp.q.cwiseAbs().maxCoeff());
  const double strict_primal_tol = std::max(strict_tol, primal_floor);
  const double strict_dual_tol = std::max(strict_tol, dual_floor);

  IpmState s;
  s.w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  s.z = Vector::Ones(n);

  SolveReport report;
  report.status = SolveStatus::iteration_limit;
  Vector rd;
  double rp = 0.0;
  Measures m = measure(qp, s, rd, rp);
  bool stopped = false;

  for (s.iterate = 0; s.iterate < opts.max_iter; ++s.iterate) {
    if (m.within(strict_tol, strict_primal_tol, strict_dual_tol)) {
      report.status = SolveStatus::optimal;
      break;
    }
    s.mu = m.gap / static_cast<double>(n);
    const Vector D = s.w.cwiseQuotient(s.z);

    // Predictor (affine scaling) direction.
    KktRhs rhs{-rd, -rp, s.w};
    KktSolution aff, dir;
    try {
      aff = kkt_reduced_solve(X, D, rhs);
    } catch (const SingularKkt&) {
      stopped = true;
      break;
    }
    report.kkt_fallbacks += aff.used_fallback ? 1 : 0;
    const double a_aff = std::min(max_step(s.w, aff.u_w), max_step(s.z, aff.u_z));
    const double mu_aff =
        (s.w + a_aff * aff.u_w).dot(s.z + a_aff * aff.u_z) / static_cast<double>(n);
    const double sigma = std::pow(std::clamp(mu_aff / s.mu, 0.0, 1.0), 3);

    // Corrector: Z dw + W dz = -w.z - dw_aff.dz_aff + sigma mu.
    Vector rc = -s.w.cwiseProduct(s.z) - aff.u_w.cwiseProduct(aff.u_z);
    rc.array() += sigma * s.mu;
    rhs.b_z = -rc.cwiseQuotient(s.z);
    try {
      dir = kkt_reduced_solve(X, D, rhs);
    } catch (const SingularKkt&) {
      stopped = true;
      break;
    }
    report.kkt_fallbacks += dir.used_fallback ? 1 : 0;

    const double alpha =
        std::min(1.0, 0.995 * std::min(max_step(s.w, dir.u_w), max_step(s.z, dir.u_z)));
    if (alpha < 1e-8) {
      stopped = true;
      break;
    }
    const IpmState saved = s;
    const Measures before = m;
    s.w += alpha * dir.u_w;
    s.lambda += alpha * dir.u_y;
    s.z += alpha * dir.u_z;
    m = measure(qp, s, rd, rp);

    // Newton steps never increase the residuals; growth beyond rounding
    // means the scaling D has outrun the linear algebra.
    if (m.primal > std::max({2.0 * before.primal, 100.0 * primal_floor, 1e-2 * opts.tol}) ||
        m.dual > std::max({2.0 * before.dual, 100.0 * dual_floor, 1e-2 * opts.tol}) || !std::isfinite(m.gap)) {
      s = saved;
      m = before;
      measure(qp, s, rd, rp);
      stopped = true;
      break;
    }
  }
  if (stopped) ++s.iterate;
  if (report.status != SolveStatus::optimal && m.within(opts.tol)) report.status = SolveStatus::optimal;

  report.w = s.w;
  report.iters = s.iterate;
  report.residuals = Residuals{m.primal, m.dual, m.gap};
  evaluate_objective(X, y, rho, report);
  return report;
}

SolveReport project_onto_hull(const Dictionary& X, const Vector& y, const IpmOptions& opts) {
  return solve_relaxed(X, y, 0.0, opts);
}

}  // namespace locreg
