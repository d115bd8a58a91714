#include "locreg/lp.hpp"

#include "locreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace locreg {

void LinearProgram::validate() const {
  const Eigen::Index m = cost.size();
  if (m == 0) throw InvalidInput("linear program has no variables");
  if (eq_lhs.rows() != eq_rhs.size() || (eq_lhs.rows() > 0 && eq_lhs.cols() != m))
    throw InvalidInput("equality block has inconsistent dimensions");
  if (ineq_lhs.rows() != ineq_rhs.size() || (ineq_lhs.rows() > 0 && ineq_lhs.cols() != m))
    throw InvalidInput("inequality block has inconsistent dimensions");
  if (static_cast<Eigen::Index>(nonneg_mask.size()) != m)
    throw InvalidInput("nonneg_mask length does not match the variable count");
  if (!cost.allFinite() || !eq_lhs.allFinite() || !eq_rhs.allFinite() || !ineq_lhs.allFinite() ||
      !ineq_rhs.allFinite())
    throw InvalidInput("linear program has non-finite entries");
}

namespace {

// Dense tableau. Rows 0..rows-1 hold B^-1 [A | b]; the last row holds the
// reduced costs and minus the objective value.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols)
      : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows)), rows_(rows), cols_(cols) {}

  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double rhs(Eigen::Index r) const { return t_(r, cols_); }
  double reduced_cost(Eigen::Index c) const { return t_(rows_, c); }
  double objective() const { return -t_(rows_, cols_); }
  Eigen::Index basic(Eigen::Index r) const { return basis_[static_cast<std::size_t>(r)]; }
  void set_basic(Eigen::Index r, Eigen::Index c) { basis_[static_cast<std::size_t>(r)] = c; }
  Eigen::Index rows() const { return rows_; }

  void price(const Vector& cost) {
    t_.row(rows_).head(cols_) = cost.transpose();
    t_(rows_, cols_) = 0.0;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const double cb = cost[basic(r)];
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(r);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    t_.col(c).setZero();
    t_(r, c) = 1.0;
    set_basic(r, c);
  }

  enum class Outcome { optimal, unbounded, iteration_limit };

  // Bland's rule: lowest-index improving column enters; among minimum
  // ratios, the lowest-index basic variable leaves.
  Outcome iterate(Eigen::Index allowed_cols, double tol, int max_iter, int& iterations) {
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < allowed_cols; ++c) {
        if (reduced_cost(c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return Outcome::optimal;
      if (iterations >= max_iter) return Outcome::iteration_limit;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= tol) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (leave < 0 || ratio < best - slack ||
            (ratio <= best + slack && basic(r) < basic(leave))) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return Outcome::unbounded;
      pivot(leave, enter);
      for (Eigen::Index r = 0; r < rows_; ++r)
        if (t_(r, cols_) < 0.0 && t_(r, cols_) > -tol) t_(r, cols_) = 0.0;
      ++iterations;
    }
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index rows_;
  Eigen::Index cols_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  const Eigen::Index m = lp.num_vars();
  const Eigen::Index p = lp.eq_rhs.size();
  const Eigen::Index q = lp.ineq_rhs.size();
  const Eigen::Index rows = p + q;
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(50 * (m + p + q));
  const double tol = opts.tol;

  // Free variables are split as x = x+ - x-.
  std::vector<Eigen::Index> pos_col(static_cast<std::size_t>(m)), neg_col(static_cast<std::size_t>(m), -1);
  Eigen::Index n_struct = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    pos_col[j] = n_struct++;
    if (!lp.nonneg_mask[static_cast<std::size_t>(j)]) neg_col[j] = n_struct++;
  }
  const Eigen::Index slack0 = n_struct;

  // Rows with a negative right-hand side are negated. Inequality rows whose
  // slack is already a feasible basic variable need no artificial.
  std::vector<bool> flip(static_cast<std::size_t>(rows), false);
  std::vector<bool> needs_art(static_cast<std::size_t>(rows), true);
  Vector b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double rhs = r < p ? lp.eq_rhs[r] : lp.ineq_rhs[r - p];
    flip[r] = rhs < 0.0;
    b[r] = std::abs(rhs);
    if (r >= p && !flip[r]) needs_art[r] = false;
  }
  const Eigen::Index n_art = std::count(needs_art.begin(), needs_art.end(), true);
  const Eigen::Index art0 = slack0 + q;
  const Eigen::Index cols = art0 + n_art;

  Tableau tab(rows, cols);
  std::vector<Eigen::Index> init_col(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0, a = 0; r < rows; ++r) {
    const double sign = flip[r] ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double coef = r < p ? lp.eq_lhs(r, j) : lp.ineq_lhs(r - p, j);
      tab.at(r, pos_col[j]) = sign * coef;
      if (neg_col[j] >= 0) tab.at(r, neg_col[j]) = -sign * coef;
    }
    if (r >= p) tab.at(r, slack0 + (r - p)) = sign;
    tab.at(r, cols) = b[r];
    if (needs_art[r]) {
      init_col[r] = art0 + a++;
      tab.at(r, init_col[r]) = 1.0;
    } else {
      init_col[r] = slack0 + (r - p);
    }
    tab.set_basic(r, init_col[r]);
  }

  LpSolution sol;
  sol.x = Vector::Zero(m);
  sol.eq_duals = Vector::Zero(p);
  sol.ineq_duals = Vector::Zero(q);

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(cols);
    phase1.tail(n_art).setOnes();
    tab.price(phase1);
    const auto outcome = tab.iterate(cols, tol, max_iter, sol.iterations);
    if (outcome == Tableau::Outcome::iteration_limit) {
      sol.status = SolveStatus::iteration_limit;
      return sol;
    }
    const double bmax = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    if (tab.objective() > tol * (1.0 + bmax) * static_cast<double>(rows)) {
      sol.status = SolveStatus::infeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis. A row with no usable
    // pivot is redundant and keeps its artificial at zero.
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (tab.basic(r) < art0) continue;
      Eigen::Index best = -1;
      for (Eigen::Index c = 0; c < art0; ++c) {
        if (std::abs(tab.at(r, c)) > tol && (best < 0 || std::abs(tab.at(r, c)) > std::abs(tab.at(r, best))))
          best = c;
      }
      if (best >= 0) tab.pivot(r, best);
    }
  }

  Vector phase2 = Vector::Zero(cols);
  for (Eigen::Index j = 0; j < m; ++j) {
    phase2[pos_col[j]] = lp.cost[j];
    if (neg_col[j] >= 0) phase2[neg_col[j]] = -lp.cost[j];
  }
  tab.price(phase2);
  const auto outcome = tab.iterate(art0, tol, max_iter, sol.iterations);
  if (outcome == Tableau::Outcome::unbounded) {
    sol.status = SolveStatus::unbounded;
    return sol;
  }
  if (outcome == Tableau::Outcome::iteration_limit) sol.status = SolveStatus::iteration_limit;

  Vector xs = Vector::Zero(cols);
  for (Eigen::Index r = 0; r < rows; ++r) xs[tab.basic(r)] = tab.rhs(r);
  for (Eigen::Index j = 0; j < m; ++j) {
    sol.x[j] = xs[pos_col[j]];
    if (neg_col[j] >= 0) sol.x[j] -= xs[neg_col[j]];
    if (lp.nonneg_mask[static_cast<std::size_t>(j)] && sol.x[j] < 0.0) sol.x[j] = 0.0;
  }
  sol.objective = lp.cost.dot(sol.x);

  // Multipliers from the reduced costs of the initial identity columns,
  // whose phase-2 cost is zero.
  double dual_obj = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double y_std = -tab.reduced_cost(init_col[r]);
    dual_obj += b[r] * y_std;
    const double y = flip[r] ? -y_std : y_std;
    if (r < p)
      sol.eq_duals[r] = y;
    else
      sol.ineq_duals[r - p] = y;
  }
  sol.duality_gap = std::abs(sol.objective - dual_obj);

  double pres = 0.0;
  if (p > 0) pres = std::max(pres, (lp.eq_lhs * sol.x - lp.eq_rhs).cwiseAbs().maxCoeff());
  if (q > 0) {
    const Vector slack = lp.ineq_lhs * sol.x - lp.ineq_rhs;
    pres = std::max(pres, slack.maxCoeff());
    for (Eigen::Index k = 0; k < q; ++k)
      if (std::abs(slack[k]) <= tol * (1.0 + std::abs(lp.ineq_rhs[k]))) sol.active_set.push_back(static_cast<int>(k));
  }
  sol.primal_residual = std::max(pres, 0.0);
  return sol;
}

SolveReport solve_exact(const Dictionary& X, const Vector& y, const LpOptions& opts) {
  X.check_query(y);
  const Eigen::Index n = X.size();
  const Eigen::Index d = X.dim();
  LinearProgram lp;
  lp.cost = X.sq_distances(y);
  lp.eq_lhs.resize(d + 1, n);
  lp.eq_lhs.topRows(d) = X.points();
  lp.eq_lhs.row(d).setOnes();
  lp.eq_rhs.resize(d + 1);
  lp.eq_rhs << y, 1.0;
  lp.nonneg_mask.assign(static_cast<std::size_t>(n), true);

  const LpSolution sol = solve_lp(lp, opts);
  SolveReport report;
  report.status = sol.status;
  report.iters = sol.iterations;
  report.w = sol.x;
  if (sol.status == SolveStatus::optimal || sol.status == SolveStatus::iteration_limit) {
    evaluate_objective(X, y, 0.0, report);
    report.objective = report.locality;
  }
  report.residuals.primal = sol.primal_residual;
  report.residuals.gap = sol.duality_gap;
  return report;
}

const char* to_string(ChlpStatus status) {
  switch (status) {
    case ChlpStatus::located: return "located";
    case ChlpStatus::outside_hull: return "outside-hull";
    case ChlpStatus::degenerate: return "degenerate";
    case ChlpStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

ChlpResult chlp_locate(const Dictionary& X, const Vector& y, const LpOptions& opts) {
  X.check_query(y);
  const Eigen::Index n = X.size();
  const Eigen::Index d = X.dim();
  LinearProgram lp;
  lp.cost.resize(d + 1);
  lp.cost << -y, -1.0;
  lp.ineq_lhs.resize(n, d + 1);
  lp.ineq_lhs.leftCols(d) = X.points().transpose();
  lp.ineq_lhs.col(d).setOnes();
  lp.ineq_rhs = X.sq_norms();
  lp.nonneg_mask.assign(static_cast<std::size_t>(d + 1), false);

  const LpSolution sol = solve_lp(lp, opts);
  ChlpResult out;
  out.iterations = sol.iterations;
  if (sol.status == SolveStatus::unbounded || sol.status == SolveStatus::infeasible) {
    out.status = ChlpStatus::outside_hull;
    return out;
  }
  if (sol.status == SolveStatus::iteration_limit) {
    out.status = ChlpStatus::iteration_limit;
    return out;
  }
  out.normal = sol.x.head(d);
  out.offset = sol.x[d];
  std::vector<int> tight;
  const Vector lhs = X.points().transpose() * out.normal;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bi = X.sq_norms()[i];
    if (std::abs(lhs[i] + out.offset - bi) <= 1e-7 * (1.0 + std::abs(bi))) tight.push_back(static_cast<int>(i));
  }
  out.vertex_set = VertexSet(std::move(tight));
  out.status = static_cast<Eigen::Index>(out.vertex_set.size()) > d + 1 ? ChlpStatus::degenerate : ChlpStatus::located;
  return out;
}

}  // namespace locreg
