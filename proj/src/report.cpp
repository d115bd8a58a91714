#include "locreg/report.hpp"

namespace locreg {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

void evaluate_objective(const Dictionary& X, const Vector& y, double rho, SolveReport& report) {
  report.rho = rho;
  if (report.w.size() != X.size()) return;
  report.fit = 0.5 * (X.points() * report.w - y).squaredNorm();
  report.locality = report.w.dot(X.sq_distances(y));
  report.objective = report.fit + rho * report.locality;
}

nlohmann::json to_json(const SolveReport& report) {
  return {
      {"w", std::vector<double>(report.w.data(), report.w.data() + report.w.size())},
      {"objective", report.objective},
      {"fit", report.fit},
      {"locality", report.locality},
      {"rho", report.rho},
      {"iters", report.iters},
      {"status", to_string(report.status)},
      {"residuals", {{"primal", report.residuals.primal}, {"dual", report.residuals.dual}, {"gap", report.residuals.gap}}},
      {"kkt_fallbacks", report.kkt_fallbacks},
  };
}

}  // namespace locreg
