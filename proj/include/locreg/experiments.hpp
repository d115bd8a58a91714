#pragma once

#include "locreg/geometry.hpp"
#include "locreg/locality.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace locreg {

/// rho = base^k for k = k_max down to k_min.
struct RhoGridSpec {
  double base = 2.0;
  int k_min = -32;
  int k_max = 2;

  /// "base:kmin:kmax", e.g. "2:-32:2".
  static RhoGridSpec parse(const std::string& text);
  std::vector<double> values() const;  // strictly decreasing
  std::vector<int> exponents() const;  // matches values()
  void validate() const;
};

enum class Profile { ci, full };
Profile parse_profile(const std::string& name);
int profile_queries(Profile profile);  // 500 or 10000

// Desk-scale guards.
inline constexpr int kMaxAtoms = 100000;
inline constexpr int kMaxDim = 128;
inline constexpr int kMaxQueries = 1000000;

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int n = 10;
  int d = 2;
  int num_queries = 500;
  RhoGridSpec grid;
  double threshold = kDefaultThreshold;
  std::string out;
  std::vector<Method> methods{Method::relaxed, Method::exact, Method::chlp};
  bool normalize = true;
  IpmOptions ipm;
  LpOptions lp;
  // Scaling grid for exp_scaling.
  std::vector<int> ns{100, 200, 400};
  std::vector<int> ds{2, 5};
  double bench_rho = 1e-7;
  // Worker threads for query-level parallelism; 0 picks hardware concurrency.
  int threads = 0;

  void validate() const;
};

/// Per-query seed from (master seed, query index); independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// n uniform samples from [0,1]^d. With normalize, centered on the mean and
/// scaled to unit maximum column norm.
Dictionary gen_dictionary(int n, int d, std::uint64_t seed, bool normalize);

/// m queries y = Xw with w uniform on the simplex.
std::vector<Vector> sample_from_hull(const Dictionary& X, int m, std::uint64_t seed);

struct SkipRecord {
  int query = 0;
  std::string reason;
};

struct BoundRow {
  int query = 0;
  Vector y;
  VertexSet simplex;
  double rho_theory = 0.0;
  // 0 when no grid value recovers the simplex.
  double rho_empirical = 0.0;
  std::optional<int> k_empirical;
  std::string status;  // "ok" or "unidentified"
};

struct BoundComparison {
  std::vector<BoundRow> rows;
  std::vector<SkipRecord> skips;
};

/// Theory rho_star versus the largest grid rho whose relaxed support is the
/// oracle simplex. Uses gen_dictionary(normalize = cfg.normalize).
BoundComparison exp_bound_comparison(const ExperimentConfig& cfg);

struct AccuracyRow {
  double rho = 0.0;
  double mean_l1 = 0.0;
  double mean_jaccard = 0.0;
  int count = 0;     // queries contributing
  int failures = 0;  // solver failures at this rho
};

struct AccuracyQuery {
  int query = 0;
  VertexSet exact_support;
  std::optional<double> rho_star;  // when the exact support certifies
  std::string note;
};

struct SupportAccuracy {
  std::vector<AccuracyRow> rows;  // grid order (decreasing rho)
  std::vector<AccuracyQuery> queries;
};

/// |w_e - w_rho|_1 and the Jaccard index of the supports, averaged over
/// queries for each grid rho. w_e from solve_exact.
SupportAccuracy exp_support_accuracy(const ExperimentConfig& cfg);

struct BenchRecord {
  Method method = Method::relaxed;
  int n = 0;
  int d = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;
  // Fraction of queries whose support is a certified Delaunay simplex
  // containing y.
  double correctness = 0.0;
  double mean_iterations = 0.0;
  double seconds_per_iteration = 0.0;
  int failures = 0;
};

/// One record per (method, n, d) cell of cfg.ns x cfg.ds with
/// cfg.num_queries queries each. Runs serially.
std::vector<BenchRecord> exp_scaling(const ExperimentConfig& cfg);

/// Relaxed solution path over cfg.grid for each query.
nlohmann::json exp_solution_path(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) on log(x).
double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y);

void write_csv(std::ostream& out, const BoundComparison& result);
void write_csv(std::ostream& out, const SupportAccuracy& result);
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
nlohmann::json to_json(const BoundComparison& result);
nlohmann::json to_json(const SupportAccuracy& result);
nlohmann::json to_json(const std::vector<BenchRecord>& records);

}  // namespace locreg
