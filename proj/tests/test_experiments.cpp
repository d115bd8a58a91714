#include "locreg/delaunay.hpp"
#include "locreg/error.hpp"
#include "locreg/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace locreg;

TEST_CASE("rho grid parsing") {
  const RhoGridSpec g = RhoGridSpec::parse("2:-3:1");
  CHECK(g.base == 2.0);
  CHECK(g.k_min == -3);
  CHECK(g.k_max == 1);
  const auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 2.0);
  CHECK(v.back() == 0.125);
  CHECK(g.exponents() == std::vector<int>{1, 0, -1, -2, -3});
  CHECK(RhoGridSpec::parse("1.5:-32:19").values().size() == 52);
  CHECK_THROWS_AS(RhoGridSpec::parse("2:-3"), InvalidInput);
  CHECK_THROWS_AS(RhoGridSpec::parse("2:x:1"), InvalidInput);
  CHECK_THROWS_AS(RhoGridSpec::parse("1:-3:1"), InvalidInput);
  CHECK_THROWS_AS(RhoGridSpec::parse("2:3:1"), InvalidInput);
  CHECK_THROWS_AS(RhoGridSpec::parse("2:-3000:1").values(), InvalidInput);
}

TEST_CASE("profiles") {
  CHECK(profile_queries(parse_profile("ci")) == 500);
  CHECK(profile_queries(parse_profile("full")) == 10000);
  CHECK_THROWS_AS(parse_profile("huge"), InvalidInput);
}

TEST_CASE("generated dictionaries") {
  const Dictionary X = gen_dictionary(10, 2, 7, true);
  CHECK(X.size() == 10);
  CHECK(X.dim() == 2);
  CHECK(X.points().colwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(X.points().rowwise().mean().norm() <= 1e-12);
  CHECK(gen_dictionary(10, 2, 7, true).points() == X.points());
  CHECK(gen_dictionary(10, 2, 8, true).points() != X.points());

  const Dictionary raw = gen_dictionary(50, 3, 1, false);
  CHECK(raw.points().minCoeff() >= 0.0);
  CHECK(raw.points().maxCoeff() <= 1.0);
  CHECK_THROWS_AS(gen_dictionary(2, 2, 0, true), InvalidInput);
  CHECK_THROWS_AS(gen_dictionary(10, 0, 0, true), InvalidInput);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("queries sampled from the hull are located") {
  const Dictionary X = gen_dictionary(12, 2, 3, true);
  const DelaunayComplex c = enumerate_delaunay(X);
  const auto qs = sample_from_hull(X, 50, 9);
  REQUIRE(qs.size() == 50);
  for (const Vector& y : qs) CHECK_FALSE(locate_simplex(c, X, y).empty());
  const auto again = sample_from_hull(X, 50, 9);
  for (std::size_t i = 0; i < qs.size(); ++i) CHECK(qs[i] == again[i]);
  CHECK_THROWS_AS(sample_from_hull(X, 0, 9), InvalidInput);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n = kMaxAtoms + 1;
  CHECK_THROWS_AS(cfg.validate(), ResourceLimit);
  cfg = {};
  cfg.num_queries = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.threshold = 2.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("bound comparison") {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.num_queries = 40;
  const BoundComparison r = exp_bound_comparison(cfg);
  CHECK(r.rows.size() + r.skips.size() == 40);
  CHECK(r.rows.size() > 20);
  for (const auto& row : r.rows) {
    CHECK(row.simplex.size() == 3);
    CHECK(row.rho_theory > 0.0);
    if (row.status == "ok") {
      REQUIRE(row.k_empirical.has_value());
      CHECK(row.rho_empirical == std::ldexp(1.0, *row.k_empirical));
      // The theory value is sufficient, so the largest working rho is at
      // least the largest grid point under it.
      CHECK(row.rho_empirical >= row.rho_theory / 2.0);
    } else {
      CHECK(row.rho_empirical == 0.0);
    }
  }
  std::ostringstream a, b;
  write_csv(a, r);
  write_csv(b, exp_bound_comparison(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("query,y0,y1,simplex,rho_theory,rho_empirical", 0) == 0);
  CHECK(to_json(r)["rows"].size() == r.rows.size());
}

TEST_CASE("bound comparison does not depend on the thread count") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.num_queries = 20;
  cfg.threads = 1;
  std::ostringstream a, b;
  write_csv(a, exp_bound_comparison(cfg));
  cfg.threads = 4;
  write_csv(b, exp_bound_comparison(cfg));
  CHECK(a.str() == b.str());
}

TEST_CASE("support accuracy") {
  ExperimentConfig cfg;
  cfg.seed = 11;
  cfg.n = 30;
  cfg.d = 3;
  cfg.num_queries = 10;
  cfg.normalize = false;
  cfg.grid = RhoGridSpec::parse("2:-20:0");
  const SupportAccuracy r = exp_support_accuracy(cfg);
  REQUIRE(r.rows.size() == 21);
  CHECK(r.queries.size() == 10);
  for (const auto& row : r.rows) {
    CHECK(row.mean_l1 >= 0.0);
    CHECK(row.mean_l1 <= 2.0 + 1e-9);
    CHECK(row.mean_jaccard >= 0.0);
    CHECK(row.mean_jaccard <= 1.0);
    CHECK(row.count + row.failures <= 10);
  }
  // Accuracy improves towards small rho.
  CHECK(r.rows.back().mean_l1 < r.rows.front().mean_l1);
  std::ostringstream out;
  write_csv(out, r);
  CHECK(out.str().find("mean_jaccard") != std::string::npos);
}

TEST_CASE("scaling records") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.num_queries = 3;
  cfg.ns = {20, 40};
  cfg.ds = {2};
  cfg.methods = {Method::relaxed, Method::exact};
  const auto recs = exp_scaling(cfg);
  REQUIRE(recs.size() == 4);
  for (const auto& r : recs) {
    CHECK(r.mean_seconds > 0.0);
    CHECK(r.std_seconds >= 0.0);
    CHECK(r.correctness >= 0.0);
    CHECK(r.correctness <= 1.0);
    CHECK(r.mean_iterations > 0.0);
    CHECK(r.failures == 0);
  }
  CHECK(to_json(recs)["records"].size() == 4);
}

TEST_CASE("solution path experiment") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  cfg.num_queries = 5;
  cfg.grid = RhoGridSpec::parse("2:-32:12");
  const auto j = exp_solution_path(cfg);
  CHECK(j["schema"] == "v1");
  REQUIRE(j["queries"].size() == 5);
  for (const auto& q : j["queries"]) {
    const auto& entries = q["path"]["entries"];
    REQUIRE(entries.size() == 45);
    CHECK(entries.front()["support"] == nlohmann::json::array({q["nearest_atom"]}));
    REQUIRE(q.contains("oracle"));
    if (q["oracle"].size() == 1) CHECK(entries.back()["support"] == q["oracle"][0]);
    double prev = INFINITY;
    for (const auto& e : entries) {
      const double r = e["residual_norm"];
      CHECK(r <= prev + 1e-8);
      prev = r;
    }
  }
}

TEST_CASE("power law exponent") {
  CHECK(power_law_exponent({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK(power_law_exponent({10, 100}, {5, 5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(power_law_exponent({1}, {1}), InvalidInput);
  CHECK_THROWS_AS(power_law_exponent({1, 2}, {1, -1}), InvalidInput);
}
