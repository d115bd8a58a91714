#pragma once

#include "locreg/geometry.hpp"
#include "locreg/report.hpp"

#include <vector>

namespace locreg {

/// min cost^T x  s.t.  eq_lhs x = eq_rhs,  ineq_lhs x <= ineq_rhs,
/// x_j >= 0 wherever nonneg_mask[j] is set.
struct LinearProgram {
  Vector cost;
  Matrix eq_lhs;
  Vector eq_rhs;
  Matrix ineq_lhs;
  Vector ineq_rhs;
  std::vector<bool> nonneg_mask;

  Eigen::Index num_vars() const { return cost.size(); }
  /// Throws InvalidInput on inconsistent dimensions or non-finite entries.
  void validate() const;
};

struct LpOptions {
  double tol = 1e-9;  // pivot and feasibility tolerance
  int max_iter = 0;   // 0 selects 50 * (vars + rows)
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::optimal;
  std::vector<int> active_set;  // inequality rows tight at x
  int iterations = 0;
  // Lagrange multipliers of the original rows (ineq duals are <= 0).
  Vector eq_duals;
  Vector ineq_duals;
  // |primal objective - dual objective| at optimal status.
  double duality_gap = 0.0;
  // max(|eq residual|, positive part of ineq residual, bound violation).
  double primal_residual = 0.0;
};

/// Dense two-phase tableau simplex with Bland's lowest-index rule.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// Exact locality coding: min sum_i w_i |x_i - y|^2 over the simplex with
/// Xw = y. The returned basic solution has at most d+1 nonzeros.
/// Infeasible status when y lies outside the hull.
SolveReport solve_exact(const Dictionary& X, const Vector& y, const LpOptions& opts = {});

enum class ChlpStatus { located, outside_hull, degenerate, iteration_limit };
const char* to_string(ChlpStatus status);

struct ChlpResult {
  VertexSet vertex_set;  // atoms whose lifted constraint is tight
  ChlpStatus status = ChlpStatus::located;
  Vector normal;  // optimal c
  double offset = 0.0;  // optimal z
  int iterations = 0;
};

/// Point location through the lifted-hull LP
///   min -c^T y - z  s.t.  x_i^T c + z <= |x_i|^2.
/// Tight constraints use the tolerance 1e-7 (1 + |x_i|^2).
ChlpResult chlp_locate(const Dictionary& X, const Vector& y, const LpOptions& opts = {});

}  // namespace locreg
