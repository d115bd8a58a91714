#include "locreg/experiments.hpp"

#include "locreg/delaunay.hpp"
#include "locreg/error.hpp"
#include "locreg/io.hpp"
#include "locreg/lp.hpp"
#include "locreg/qp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace locreg {

namespace {

// Runs fn(i) for i in [0, count) on a small worker pool. The first
// exception is rethrown after all workers finish.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string join_indices(const VertexSet& S) {
  std::string out;
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(S[k]);
  }
  return out;
}

std::uint64_t query_seed(std::uint64_t master) { return derive_seed(master, 0x9e3779b97f4a7c15ULL); }

}  // namespace

RhoGridSpec RhoGridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidInput("rho grid must be base:kmin:kmax, got '" + text + "'");
  RhoGridSpec spec;
  try {
    std::size_t used = 0;
    spec.base = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("base");
    spec.k_min = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("kmin");
    spec.k_max = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("kmax");
  } catch (const std::logic_error&) {
    throw InvalidInput("rho grid must be base:kmin:kmax, got '" + text + "'");
  }
  spec.validate();
  return spec;
}

void RhoGridSpec::validate() const {
  if (!(base > 1.0) || !std::isfinite(base)) throw InvalidInput("rho grid base must exceed 1");
  if (k_min > k_max) throw InvalidInput("rho grid is empty (kmin > kmax)");
  if (k_max - k_min > 10000) throw InvalidInput("rho grid is too long");
}

std::vector<int> RhoGridSpec::exponents() const {
  validate();
  std::vector<int> ks;
  for (int k = k_max; k >= k_min; --k) ks.push_back(k);
  return ks;
}

std::vector<double> RhoGridSpec::values() const {
  std::vector<double> out;
  for (int k : exponents()) {
    const double rho = std::pow(base, k);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("rho grid leaves the double range");
    out.push_back(rho);
  }
  return out;
}

Profile parse_profile(const std::string& name) {
  if (name == "ci") return Profile::ci;
  if (name == "full") return Profile::full;
  throw InvalidInput("unknown profile '" + name + "' (expected ci or full)");
}

int profile_queries(Profile profile) { return profile == Profile::ci ? 500 : 10000; }

void ExperimentConfig::validate() const {
  if (d < 1) throw InvalidInput("d must be positive");
  if (n < d + 1) throw InvalidInput("n must satisfy d + 1 <= n");
  if (num_queries < 1) throw InvalidInput("num_queries must be positive");
  if (d > kMaxDim) throw ResourceLimit("d exceeds " + std::to_string(kMaxDim));
  if (n > kMaxAtoms) throw ResourceLimit("n exceeds " + std::to_string(kMaxAtoms));
  if (num_queries > kMaxQueries) throw ResourceLimit("num_queries exceeds " + std::to_string(kMaxQueries));
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("threshold must lie in (0, 1)");
  if (!(bench_rho > 0.0)) throw InvalidInput("bench rho must be positive");
  grid.validate();
  for (int v : ns)
    if (v < 1) throw InvalidInput("bench n must be positive");
    else if (v > kMaxAtoms) throw ResourceLimit("bench n exceeds the size guard");
  for (int v : ds)
    if (v < 1) throw InvalidInput("bench d must be positive");
    else if (v > kMaxDim) throw ResourceLimit("bench d exceeds the size guard");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Dictionary gen_dictionary(int n, int d, std::uint64_t seed, bool normalize) {
  if (d < 1 || n < d + 1) throw InvalidInput("n must satisfy d + 1 <= n with d >= 1");
  if (d > kMaxDim || n > kMaxAtoms) throw ResourceLimit("dictionary exceeds the size guard");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix P(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) P(i, j) = unif(rng);
  if (normalize) {
    const Vector mean = P.rowwise().mean();
    P.colwise() -= mean;
    P /= P.colwise().norm().maxCoeff();
  }
  return Dictionary(std::move(P));
}

std::vector<Vector> sample_from_hull(const Dictionary& X, int m, std::uint64_t seed) {
  if (m < 1) throw InvalidInput("sample_from_hull needs m >= 1");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(q)));
    out.push_back(X.points() * sample_simplex_weights(X.size(), rng).values());
  }
  return out;
}

BoundComparison exp_bound_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dictionary X = gen_dictionary(cfg.n, cfg.d, cfg.seed, cfg.normalize);
  const auto queries = sample_from_hull(X, cfg.num_queries, query_seed(cfg.seed));
  const DelaunayComplex complex = enumerate_delaunay(X);
  const std::vector<double> rhos = cfg.grid.values();
  const std::vector<int> ks = cfg.grid.exponents();

  std::vector<std::optional<BoundRow>> rows(queries.size());
  std::vector<std::string> reasons(queries.size());
  parallel_for(cfg.num_queries, cfg.threads, [&](int q) {
    const Vector& y = queries[static_cast<std::size_t>(q)];
    RhoBound bound;
    try {
      bound = rho_bound(X, y, complex);
    } catch (const NotApplicable& e) {
      reasons[static_cast<std::size_t>(q)] = e.what();
      return;
    }
    BoundRow row;
    row.query = q;
    row.y = y;
    row.simplex = bound.simplex;
    row.rho_theory = bound.rho_star;
    row.status = "unidentified";
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      const SolveReport r = solve_relaxed(X, y, rhos[k], cfg.ipm);
      if (r.ok() && support(r.w, cfg.threshold) == bound.simplex) {
        row.rho_empirical = rhos[k];
        row.k_empirical = ks[k];
        row.status = "ok";
        break;
      }
    }
    rows[static_cast<std::size_t>(q)] = std::move(row);
  });

  BoundComparison out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (rows[q])
      out.rows.push_back(std::move(*rows[q]));
    else
      out.skips.push_back(SkipRecord{static_cast<int>(q), reasons[q]});
  }
  return out;
}

SupportAccuracy exp_support_accuracy(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dictionary X = gen_dictionary(cfg.n, cfg.d, cfg.seed, cfg.normalize);
  const auto queries = sample_from_hull(X, cfg.num_queries, query_seed(cfg.seed));
  const std::vector<double> rhos = cfg.grid.values();
  const std::size_t nq = queries.size();
  const std::size_t nr = rhos.size();

  std::vector<AccuracyQuery> info(nq);
  std::vector<Vector> exact(nq);
  std::vector<double> l1(nq * nr, std::nan(""));
  std::vector<double> jac(nq * nr, std::nan(""));

  parallel_for(cfg.num_queries, cfg.threads, [&](int qi) {
    const auto q = static_cast<std::size_t>(qi);
    const Vector& y = queries[q];
    AccuracyQuery& qinfo = info[q];
    qinfo.query = qi;
    const SolveReport e = solve_exact(X, y, cfg.lp);
    if (!e.ok()) {
      qinfo.note = std::string("exact solve: ") + to_string(e.status);
      return;
    }
    exact[q] = e.w;
    qinfo.exact_support = support(e.w, cfg.threshold);
    try {
      qinfo.rho_star = rho_bound_certified(X, y, qinfo.exact_support).rho_star;
    } catch (const Error& err) {
      qinfo.note = err.what();
    }
    for (std::size_t k = 0; k < nr; ++k) {
      try {
        const SolveReport r = solve_relaxed(X, y, rhos[k], cfg.ipm);
        if (!r.ok()) continue;
        l1[q * nr + k] = (r.w - e.w).lpNorm<1>();
        jac[q * nr + k] = jaccard(support(r.w, cfg.threshold), qinfo.exact_support);
      } catch (const Error&) {
      }
    }
  });

  SupportAccuracy out;
  out.queries = std::move(info);
  for (std::size_t k = 0; k < nr; ++k) {
    AccuracyRow row;
    row.rho = rhos[k];
    for (std::size_t q = 0; q < nq; ++q) {
      if (exact[q].size() == 0) continue;
      const double a = l1[q * nr + k];
      if (std::isnan(a)) {
        ++row.failures;
        continue;
      }
      row.mean_l1 += a;
      row.mean_jaccard += jac[q * nr + k];
      ++row.count;
    }
    if (row.count > 0) {
      row.mean_l1 /= row.count;
      row.mean_jaccard /= row.count;
    }
    out.rows.push_back(row);
  }
  return out;
}

namespace {

bool certified_containing(const Dictionary& X, const VertexSet& S, const Vector& y) {
  if (static_cast<Eigen::Index>(S.size()) != X.dim() + 1) return false;
  try {
    return is_delaunay_simplex(X, S) && barycentric(X, S, y).minCoeff() >= -kTolLoc;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<BenchRecord> exp_scaling(const ExperimentConfig& cfg) {
  cfg.validate();
  for (Method m : cfg.methods)
    if (m == Method::oracle) throw InvalidInput("bench methods must be relaxed, exact or chlp");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRecord> out;
  std::uint64_t cell = 0;
  for (int d : cfg.ds) {
    for (int n : cfg.ns) {
      const std::uint64_t cell_seed = derive_seed(cfg.seed, cell++);
      if (n < d + 1) throw InvalidInput("bench cell has n < d + 1");
      const Dictionary X = gen_dictionary(n, d, cell_seed, false);
      const auto queries = sample_from_hull(X, cfg.num_queries, query_seed(cell_seed));
      for (Method method : cfg.methods) {
        BenchRecord rec;
        rec.method = method;
        rec.n = n;
        rec.d = d;
        std::vector<double> times;
        double iters = 0.0;
        int correct = 0;
        for (const Vector& y : queries) {
          VertexSet S;
          int it = 0;
          bool ok = true;
          const auto t0 = clock::now();
          try {
            if (method == Method::relaxed) {
              const SolveReport r = solve_relaxed(X, y, cfg.bench_rho, cfg.ipm);
              const auto t1 = clock::now();
              times.push_back(std::chrono::duration<double>(t1 - t0).count());
              ok = r.ok();
              it = r.iters;
              S = support(r.w, cfg.threshold);
            } else if (method == Method::exact) {
              const SolveReport r = solve_exact(X, y, cfg.lp);
              const auto t1 = clock::now();
              times.push_back(std::chrono::duration<double>(t1 - t0).count());
              ok = r.ok();
              it = r.iters;
              if (ok) S = support(r.w, cfg.threshold);
            } else {
              const ChlpResult r = chlp_locate(X, y, cfg.lp);
              const auto t1 = clock::now();
              times.push_back(std::chrono::duration<double>(t1 - t0).count());
              ok = r.status == ChlpStatus::located;
              it = r.iterations;
              S = r.vertex_set;
            }
          } catch (const Error&) {
            ok = false;
            times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
          }
          if (!ok) ++rec.failures;
          iters += it;
          if (ok && certified_containing(X, S, y)) ++correct;
        }
        const double count = static_cast<double>(times.size());
        double sum = 0.0;
        for (double t : times) sum += t;
        rec.mean_seconds = sum / count;
        double var = 0.0;
        for (double t : times) var += (t - rec.mean_seconds) * (t - rec.mean_seconds);
        rec.std_seconds = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
        rec.correctness = correct / count;
        rec.mean_iterations = iters / count;
        rec.seconds_per_iteration = iters > 0 ? sum / iters : 0.0;
        out.push_back(rec);
      }
    }
  }
  return out;
}

nlohmann::json exp_solution_path(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dictionary X = gen_dictionary(cfg.n, cfg.d, cfg.seed, cfg.normalize);
  const auto queries = sample_from_hull(X, cfg.num_queries, query_seed(cfg.seed));
  const std::vector<double> rhos = cfg.grid.values();
  std::optional<DelaunayComplex> complex;
  try {
    complex = enumerate_delaunay(X);
  } catch (const ResourceLimit&) {
  }

  PathOptions popts;
  popts.threshold = cfg.threshold;
  popts.ipm = cfg.ipm;
  std::vector<nlohmann::json> items(queries.size());
  parallel_for(cfg.num_queries, cfg.threads, [&](int qi) {
    const auto q = static_cast<std::size_t>(qi);
    const Vector& y = queries[q];
    Eigen::Index nearest = 0;
    X.sq_distances(y).minCoeff(&nearest);
    nlohmann::json j = {
        {"query", qi},
        {"y", to_std(y)},
        {"nearest_atom", static_cast<int>(nearest)},
        {"path", to_json(solution_path(X, y, rhos, popts))},
    };
    if (complex) {
      nlohmann::json located = nlohmann::json::array();
      for (const auto& S : locate_simplex(*complex, X, y)) located.push_back(S.indices());
      j["oracle"] = std::move(located);
    }
    items[q] = std::move(j);
  });

  nlohmann::json out = {
      {"schema", "v1"},
      {"seed", cfg.seed},
      {"n", cfg.n},
      {"d", cfg.d},
      {"rho_grid", {{"base", cfg.grid.base}, {"k_min", cfg.grid.k_min}, {"k_max", cfg.grid.k_max}}},
      {"queries", std::move(items)},
  };
  return out;
}

double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("power law fit needs matching samples, at least 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidInput("power law fit needs positive samples");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]) - mx;
    sxy += lx * (std::log(y[i]) - my);
    sxx += lx * lx;
  }
  if (sxx == 0.0) throw InvalidInput("power law fit needs distinct x");
  return sxy / sxx;
}

void write_csv(std::ostream& out, const BoundComparison& result) {
  const Eigen::Index d = result.rows.empty() ? 0 : result.rows.front().y.size();
  out << "query";
  for (Eigen::Index i = 0; i < d; ++i) out << ",y" << i;
  out << ",simplex,rho_theory,rho_empirical,log10_rho_theory,log10_rho_empirical,status\n";
  for (const auto& r : result.rows) {
    out << r.query;
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << io::fmt_double(r.y[i]);
    out << ',' << join_indices(r.simplex) << ',' << io::fmt_double(r.rho_theory) << ','
        << io::fmt_double(r.rho_empirical) << ',' << io::fmt_double(std::log10(r.rho_theory)) << ','
        << (r.rho_empirical > 0.0 ? io::fmt_double(std::log10(r.rho_empirical)) : std::string("nan")) << ','
        << r.status << '\n';
  }
  for (const auto& s : result.skips) {
    out << s.query;
    for (Eigen::Index i = 0; i < d; ++i) out << ",nan";
    out << ",,nan,nan,nan,nan,skipped: " << s.reason << '\n';
  }
}

void write_csv(std::ostream& out, const SupportAccuracy& result) {
  out << "rho,mean_l1_diff,mean_jaccard,count,failures\n";
  for (const auto& r : result.rows)
    out << io::fmt_double(r.rho) << ',' << io::fmt_double(r.mean_l1) << ',' << io::fmt_double(r.mean_jaccard)
        << ',' << r.count << ',' << r.failures << '\n';
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "method,n,d,mean_seconds,std_seconds,correctness,mean_iterations,seconds_per_iteration,failures\n";
  for (const auto& r : records)
    out << to_string(r.method) << ',' << r.n << ',' << r.d << ',' << io::fmt_double(r.mean_seconds) << ','
        << io::fmt_double(r.std_seconds) << ',' << io::fmt_double(r.correctness) << ','
        << io::fmt_double(r.mean_iterations) << ',' << io::fmt_double(r.seconds_per_iteration) << ','
        << r.failures << '\n';
}

nlohmann::json to_json(const BoundComparison& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    nlohmann::json j = {
        {"query", r.query},
        {"y", to_std(r.y)},
        {"simplex", r.simplex.indices()},
        {"rho_theory", r.rho_theory},
        {"rho_empirical", r.rho_empirical},
        {"status", r.status},
    };
    if (r.k_empirical) j["k_empirical"] = *r.k_empirical;
    rows.push_back(std::move(j));
  }
  nlohmann::json skips = nlohmann::json::array();
  for (const auto& s : result.skips) skips.push_back({{"query", s.query}, {"reason", s.reason}});
  return {{"schema", "v1"}, {"rows", std::move(rows)}, {"skips", std::move(skips)}};
}

nlohmann::json to_json(const SupportAccuracy& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows)
    rows.push_back({{"rho", r.rho},
                    {"mean_l1_diff", r.mean_l1},
                    {"mean_jaccard", r.mean_jaccard},
                    {"count", r.count},
                    {"failures", r.failures}});
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : result.queries) {
    nlohmann::json j = {{"query", q.query}, {"exact_support", q.exact_support.indices()}};
    if (q.rho_star) j["rho_star"] = *q.rho_star;
    if (!q.note.empty()) j["note"] = q.note;
    queries.push_back(std::move(j));
  }
  return {{"schema", "v1"}, {"rows", std::move(rows)}, {"queries", std::move(queries)}};
}

nlohmann::json to_json(const std::vector<BenchRecord>& records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records)
    rows.push_back({{"method", to_string(r.method)},
                    {"n", r.n},
                    {"d", r.d},
                    {"mean_seconds", r.mean_seconds},
                    {"std_seconds", r.std_seconds},
                    {"correctness", r.correctness},
                    {"mean_iterations", r.mean_iterations},
                    {"seconds_per_iteration", r.seconds_per_iteration},
                    {"failures", r.failures}});
  return {{"schema", "v1"}, {"records", std::move(rows)}};
}

}  // namespace locreg
