#pragma once

#include "locreg/geometry.hpp"

#include <json.hpp>

namespace locreg {

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus status);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

/// Outcome of one solve of the exact or the relaxed coding problem.
struct SolveReport {
  Vector w;
  double objective = 0.0;  // fit + rho * locality for the relaxed problem
  double fit = 0.0;        // 0.5 |Xw - y|^2
  double locality = 0.0;   // sum_i w_i |x_i - y|^2
  double rho = 0.0;
  int iters = 0;
  SolveStatus status = SolveStatus::optimal;
  Residuals residuals;
  int kkt_fallbacks = 0;

  bool ok() const { return status == SolveStatus::optimal; }
};

/// Fills fit / locality / objective from w.
void evaluate_objective(const Dictionary& X, const Vector& y, double rho, SolveReport& report);

nlohmann::json to_json(const SolveReport& report);

}  // namespace locreg
