// dl: Delaunay-local coding from the command line.

#include "locreg/delaunay.hpp"
#include "locreg/error.hpp"
#include "locreg/experiments.hpp"
#include "locreg/io.hpp"
#include "locreg/locality.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace locreg;

namespace {

enum Exit { kOk = 0, kInvalidInput = 2, kSolverFailure = 3, kResourceLimit = 4 };

struct Common {
  std::string in;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iter = 100;
  double threshold = kDefaultThreshold;
  std::string profile = "ci";
  int queries = 0;
  int threads = 0;
};

io::Format output_format(const Common& c, io::Format fallback) {
  if (!c.format.empty()) return io::parse_format(c.format);
  if (!c.out.empty()) return io::format_from_path(c.out);
  return fallback;
}

// Writes to --out, or stdout when absent.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidInput("cannot write '" + c.out + "'");
  f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<Vector> read_queries(const std::string& point, const std::string& file) {
  std::vector<Vector> out;
  if (!point.empty()) out.push_back(io::parse_point(point));
  if (!file.empty()) {
    const Matrix rows = io::read_rows(file);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) out.push_back(rows.row(i).transpose());
  }
  if (out.empty()) throw InvalidInput("no query given (use --y or --queries)");
  return out;
}

Dictionary load(const Common& c) {
  if (c.in.empty()) throw InvalidInput("--in is required");
  return io::read_dictionary(c.in);
}

ExperimentConfig config_from(const Common& c) {
  ExperimentConfig cfg;
  cfg.seed = c.seed;
  cfg.threshold = c.threshold;
  cfg.out = c.out;
  cfg.ipm.tol = c.tol;
  cfg.ipm.max_iter = c.max_iter;
  cfg.num_queries = c.queries > 0 ? c.queries : profile_queries(parse_profile(c.profile));
  cfg.threads = c.threads;
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master random seed");
  app->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", c.max_iter, "Interior-point iteration limit")->check(CLI::PositiveNumber);
  app->add_option("--threshold", c.threshold, "Support threshold on the weights");
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--format", c.format, "csv or json");
}

void add_experiment(CLI::App* app, Common& c) {
  app->add_option("--profile", c.profile, "ci (500 queries) or full (10000)");
  app->add_option("--queries", c.queries, "Number of queries; overrides --profile");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delaunay simplex identification by locality-regularized coding"};
  app.require_subcommand(1);
  Common c;

  // gen
  int gen_n = 10, gen_d = 2;
  bool gen_raw = false;
  auto* gen = app.add_subcommand("gen", "Generate a uniform random dictionary");
  add_common(gen, c);
  gen->add_option("--n", gen_n, "Number of atoms");
  gen->add_option("--d", gen_d, "Dimension");
  gen->add_flag("--raw", gen_raw, "Skip centering and normalization");

  // identify
  std::string id_method = "relaxed", id_y, id_queries;
  std::optional<double> id_rho;
  bool id_verify = false;
  auto* ident = app.add_subcommand("identify", "Find the Delaunay simplex containing each query");
  add_common(ident, c);
  ident->add_option("--in", c.in, "Dictionary file (rows are atoms)")->required();
  ident->add_option("--y", id_y, "Query point as a,b,...");
  ident->add_option("--queries", id_queries, "File of query rows");
  ident->add_option("--method", id_method, "relaxed, exact, chlp or oracle");
  ident->add_option("--rho", id_rho, "Regularization for the relaxed method");
  ident->add_flag("--verify", id_verify, "Cross-check against the enumerated triangulation");

  // path
  std::string path_y, path_grid = "2:-32:2";
  int path_n = 10, path_d = 2;
  auto* path = app.add_subcommand("path", "Relaxed solution path over a rho grid");
  add_common(path, c);
  add_experiment(path, c);
  path->add_option("--in", c.in, "Dictionary file; generated when absent");
  path->add_option("--y", path_y, "Query point (with --in)");
  path->add_option("--rho-grid", path_grid, "base:kmin:kmax");
  path->add_option("--n", path_n, "Atoms when generating");
  path->add_option("--d", path_d, "Dimension when generating");

  // bound-compare
  std::string bc_grid = "2:-32:2";
  int bc_n = 10, bc_d = 2;
  auto* bc = app.add_subcommand("bound-compare", "Theoretical versus empirical rho per query");
  add_common(bc, c);
  add_experiment(bc, c);
  bc->add_option("--rho-grid", bc_grid, "base:kmin:kmax");
  bc->add_option("--n", bc_n, "Number of atoms");
  bc->add_option("--d", bc_d, "Dimension");

  // support-accuracy
  std::string sa_grid = "1.5:-32:19";
  int sa_n = 250, sa_d = 3;
  auto* sa = app.add_subcommand("support-accuracy", "Exact versus relaxed weights over a rho grid");
  add_common(sa, c);
  add_experiment(sa, c);
  sa->add_option("--rho-grid", sa_grid, "base:kmin:kmax");
  sa->add_option("--n", sa_n, "Number of atoms");
  sa->add_option("--d", sa_d, "Dimension");

  // bench
  std::vector<int> bench_ns{100, 200, 400}, bench_ds{2, 5};
  std::vector<std::string> bench_methods{"relaxed", "exact", "chlp"};
  double bench_rho = 1e-7;
  auto* bench = app.add_subcommand("bench", "Runtime scaling of the identification methods");
  add_common(bench, c);
  add_experiment(bench, c);
  bench->add_option("--ns", bench_ns, "Atom counts")->delimiter(',');
  bench->add_option("--ds", bench_ds, "Dimensions")->delimiter(',');
  bench->add_option("--method", bench_methods, "Methods to time")->delimiter(',');
  bench->add_option("--rho", bench_rho, "Regularization for the relaxed method");

  // oracle
  std::string or_y, or_queries;
  auto* orc = app.add_subcommand("oracle", "Enumerate the Delaunay triangulation");
  add_common(orc, c);
  orc->add_option("--in", c.in, "Dictionary file (rows are atoms)")->required();
  orc->add_option("--y", or_y, "Locate this query");
  orc->add_option("--queries", or_queries, "File of query rows to locate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*gen) {
      const Dictionary X = gen_dictionary(gen_n, gen_d, c.seed, !gen_raw);
      const io::Format f = output_format(c, io::Format::csv);
      std::ostringstream os;
      if (f == io::Format::json)
        os << dump(io::rows_to_json(X.points().transpose()));
      else
        io::write_rows_csv(os, X.points().transpose());
      emit(c, os.str());
      return kOk;
    }

    if (*ident) {
      const Dictionary X = load(c);
      const Method method = parse_method(id_method);
      const auto ys = read_queries(id_y, id_queries);
      IdentifyOptions opts;
      opts.rho = id_rho;
      opts.threshold = c.threshold;
      opts.verify = id_verify;
      opts.ipm.tol = c.tol;
      opts.ipm.max_iter = c.max_iter;
      std::optional<DelaunayComplex> complex;
      if (method == Method::oracle || id_verify || (method == Method::relaxed && !id_rho)) {
        try {
          complex = enumerate_delaunay(X, opts.limits);
          opts.complex = &*complex;
        } catch (const ResourceLimit&) {
          if (method == Method::oracle || id_verify) throw;
        }
      }
      std::vector<IdentificationResult> results;
      bool failed = false;
      for (const Vector& y : ys) {
        results.push_back(identify(X, y, method, opts));
        failed = failed || results.back().status == IdentifyStatus::solver_failure;
      }
      std::ostringstream os;
      if (output_format(c, io::Format::json) == io::Format::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results) arr.push_back(to_json(r));
        os << dump(ys.size() == 1 ? arr[0] : arr);
      } else {
        os << "query,method,status,support,rho,agrees_with_oracle\n";
        for (std::size_t q = 0; q < results.size(); ++q) {
          const auto& r = results[q];
          os << q << ',' << to_string(r.method) << ',' << to_string(r.status) << ',';
          for (std::size_t k = 0; k < r.support.size(); ++k) os << (k ? " " : "") << r.support[k];
          os << ',' << (r.rho ? io::fmt_double(*r.rho) : "") << ','
             << (r.agrees_with_oracle ? (*r.agrees_with_oracle ? "true" : "false") : "") << '\n';
        }
      }
      emit(c, os.str());
      return failed ? kSolverFailure : kOk;
    }

    if (*path) {
      const RhoGridSpec grid = RhoGridSpec::parse(path_grid);
      if (!c.in.empty()) {
        const Dictionary X = load(c);
        PathOptions opts;
        opts.threshold = c.threshold;
        opts.ipm.tol = c.tol;
        opts.ipm.max_iter = c.max_iter;
        const auto ys = read_queries(path_y, "");
        emit(c, dump(to_json(solution_path(X, ys.front(), grid.values(), opts))));
        return kOk;
      }
      ExperimentConfig cfg = config_from(c);
      cfg.n = path_n;
      cfg.d = path_d;
      cfg.grid = grid;
      if (c.queries <= 0) cfg.num_queries = 10;
      emit(c, dump(exp_solution_path(cfg)));
      return kOk;
    }

    if (*bc) {
      ExperimentConfig cfg = config_from(c);
      cfg.n = bc_n;
      cfg.d = bc_d;
      cfg.grid = RhoGridSpec::parse(bc_grid);
      const BoundComparison result = exp_bound_comparison(cfg);
      std::ostringstream os;
      if (output_format(c, io::Format::csv) == io::Format::json)
        os << dump(to_json(result));
      else
        write_csv(os, result);
      emit(c, os.str());
      return kOk;
    }

    if (*sa) {
      ExperimentConfig cfg = config_from(c);
      cfg.n = sa_n;
      cfg.d = sa_d;
      cfg.grid = RhoGridSpec::parse(sa_grid);
      cfg.normalize = false;
      if (c.queries <= 0) cfg.num_queries = 50;
      const SupportAccuracy result = exp_support_accuracy(cfg);
      std::ostringstream os;
      if (output_format(c, io::Format::csv) == io::Format::json)
        os << dump(to_json(result));
      else
        write_csv(os, result);
      emit(c, os.str());
      return kOk;
    }

    if (*bench) {
      ExperimentConfig cfg = config_from(c);
      cfg.ns = bench_ns;
      cfg.ds = bench_ds;
      cfg.bench_rho = bench_rho;
      cfg.methods.clear();
      for (const auto& m : bench_methods) cfg.methods.push_back(parse_method(m));
      if (c.queries <= 0) cfg.num_queries = 50;
      const auto records = exp_scaling(cfg);
      std::ostringstream os;
      if (output_format(c, io::Format::csv) == io::Format::json)
        os << dump(to_json(records));
      else
        write_csv(os, records);
      emit(c, os.str());
      return kOk;
    }

    if (*orc) {
      const Dictionary X = load(c);
      const DelaunayComplex complex = enumerate_delaunay(X);
      nlohmann::json j = to_json(complex);
      if (!or_y.empty() || !or_queries.empty()) {
        nlohmann::json located = nlohmann::json::array();
        for (const Vector& y : read_queries(or_y, or_queries)) {
          X.check_query(y);
          nlohmann::json hits = nlohmann::json::array();
          for (const auto& S : locate_simplex(complex, X, y)) hits.push_back(S.indices());
          located.push_back(std::move(hits));
        }
        j["located"] = std::move(located);
      }
      emit(c, dump(j));
      return kOk;
    }
  } catch (const ResourceLimit& e) {
    std::cerr << "dl: resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const SingularKkt& e) {
    std::cerr << "dl: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const Error& e) {
    std::cerr << "dl: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}
