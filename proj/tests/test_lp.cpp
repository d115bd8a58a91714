#include "locreg/combinations.hpp"
#include "locreg/delaunay.hpp"
#include "locreg/error.hpp"
#include "locreg/lp.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace locreg;
using oracle::vec;

namespace {

LinearProgram make_lp(Vector cost, Matrix G, Vector h, std::vector<bool> nonneg) {
  LinearProgram lp;
  lp.cost = std::move(cost);
  lp.eq_lhs = Matrix(0, lp.cost.size());
  lp.eq_rhs = Vector(0);
  lp.ineq_lhs = std::move(G);
  lp.ineq_rhs = std::move(h);
  lp.nonneg_mask = std::move(nonneg);
  return lp;
}

Matrix rowmat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) M(i, j++) = v;
    ++i;
  }
  return M;
}

// Dual feasibility of the reported multipliers, checked from scratch.
void check_certificate(const LinearProgram& lp, const LpSolution& s, double tol) {
  Vector reduced = lp.cost;
  if (lp.eq_lhs.rows() > 0) reduced -= lp.eq_lhs.transpose() * s.eq_duals;
  if (lp.ineq_lhs.rows() > 0) reduced -= lp.ineq_lhs.transpose() * s.ineq_duals;
  for (Eigen::Index j = 0; j < reduced.size(); ++j) {
    if (lp.nonneg_mask[static_cast<std::size_t>(j)])
      CHECK(reduced[j] >= -tol);
    else
      CHECK(std::abs(reduced[j]) <= tol);
  }
  for (Eigen::Index k = 0; k < s.ineq_duals.size(); ++k) CHECK(s.ineq_duals[k] <= tol);
  double dual = 0.0;
  if (lp.eq_rhs.size() > 0) dual += lp.eq_rhs.dot(s.eq_duals);
  if (lp.ineq_rhs.size() > 0) dual += lp.ineq_rhs.dot(s.ineq_duals);
  CHECK(std::abs(dual - s.objective) <= tol * (1.0 + std::abs(s.objective)));
}

}  // namespace

TEST_CASE("lp examples") {
  {
    const LinearProgram lp = make_lp(vec({1}), rowmat({{-1}}), vec({-1}), {false});
    const LpSolution s = solve_lp(lp);
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.objective == doctest::Approx(1.0));
    check_certificate(lp, s, 1e-9);
  }
  {
    const LinearProgram lp = make_lp(vec({-1, -1}), rowmat({{1, 1}}), vec({1}), {true, true});
    const LpSolution s = solve_lp(lp);
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.objective == doctest::Approx(-1.0));
    CHECK(s.x.sum() == doctest::Approx(1.0));
    CHECK(s.active_set == std::vector<int>{0});
    check_certificate(lp, s, 1e-9);
  }
  {
    LinearProgram lp = make_lp(vec({-1}), Matrix(0, 1), Vector(0), {true});
    CHECK(solve_lp(lp).status == SolveStatus::unbounded);
  }
  {
    const LinearProgram lp = make_lp(vec({1}), rowmat({{1}}), vec({-1}), {true});
    CHECK(solve_lp(lp).status == SolveStatus::infeasible);
  }
}

TEST_CASE("lp with equalities and free variables") {
  // min x + 2y + 3z s.t. x + y + z = 1, x - y = 0.2, z >= 0, x, y free.
  LinearProgram lp;
  lp.cost = vec({1, 2, 3});
  lp.eq_lhs = rowmat({{1, 1, 1}, {1, -1, 0}});
  lp.eq_rhs = vec({1, 0.2});
  lp.ineq_lhs = Matrix(0, 3);
  lp.ineq_rhs = Vector(0);
  lp.nonneg_mask = {false, false, true};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(0.6));
  CHECK(s.x[1] == doctest::Approx(0.4));
  CHECK(s.x[2] == doctest::Approx(0.0));
  check_certificate(lp, s, 1e-9);
}

TEST_CASE("lp validation") {
  LinearProgram lp = make_lp(vec({1, 2}), rowmat({{1}}), vec({1}), {true, true});
  CHECK_THROWS_AS(solve_lp(lp), InvalidInput);
  lp = make_lp(vec({1, NAN}), rowmat({{1, 1}}), vec({1}), {true, true});
  CHECK_THROWS_AS(solve_lp(lp), InvalidInput);
  lp = make_lp(vec({1, 1}), rowmat({{1, 1}}), vec({1}), {true});
  CHECK_THROWS_AS(solve_lp(lp), InvalidInput);
}

TEST_CASE("random two-variable lps match vertex enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int q = 3 + trial % 6;
    Matrix G(q + 4, 2);
    Vector h(q + 4);
    for (int k = 0; k < q; ++k) {
      G(k, 0) = u(rng);
      G(k, 1) = u(rng);
      h[k] = 0.2 + std::abs(u(rng));
    }
    // Box |x|, |y| <= 3 keeps every instance bounded; the origin is feasible.
    G.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    h.tail(4).setConstant(3.0);
    const Vector c = vec({u(rng), u(rng)});
    const LinearProgram lp = make_lp(c, G, h, {false, false});
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::optimal);

    double best = INFINITY;
    for_each_combination(q + 4, 2, [&](const std::vector<int>& p) {
      Eigen::Matrix2d A;
      A << G(p[0], 0), G(p[0], 1), G(p[1], 0), G(p[1], 1);
      if (std::abs(A.determinant()) < 1e-12) return true;
      const Eigen::Vector2d x = A.inverse() * Eigen::Vector2d(h[p[0]], h[p[1]]);
      if (((G * Vector(x)) - h).maxCoeff() <= 1e-9) best = std::min(best, c.dot(Vector(x)));
      return true;
    });
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
    CHECK(s.duality_gap <= 1e-9 * (1.0 + std::abs(s.objective)));
    CHECK(s.primal_residual <= 1e-9);
    check_certificate(lp, s, 1e-8);
  }
}

TEST_CASE("exact problem examples") {
  const Dictionary X = Dictionary::from_points({{0, 0}, {1, 0}, {0, 1}, {2, 2}});
  const SolveReport r = solve_exact(X, vec({0.25, 0.25}));
  REQUIRE(r.ok());
  CHECK((r.w - vec({0.5, 0.25, 0.25, 0.0})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(r.locality == doctest::Approx(3.0 / 8.0));

  const Dictionary T = Dictionary::from_points({{0, 0}, {1, 0}, {0, 1}});
  const SolveReport v = solve_exact(T, vec({0, 0}));
  REQUIRE(v.ok());
  CHECK((v.w - vec({1, 0, 0})).cwiseAbs().maxCoeff() <= 1e-12);

  const Dictionary Q = Dictionary::from_points({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  const SolveReport s = solve_exact(Q, vec({0, 0}));
  REQUIRE(s.ok());
  CHECK(s.locality == doctest::Approx(1.0));
  CHECK((Q.points() * s.w).norm() <= 1e-12);

  CHECK(solve_exact(T, vec({-1, -1})).status == SolveStatus::infeasible);
}

TEST_CASE("exact solutions are sparse and beat alternatives off the containing simplex") {
  std::mt19937_64 rng(19);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Dictionary X(oracle::random_points(d, 8 + 2 * trial, rng));
      const DelaunayComplex c = enumerate_delaunay(X);
      for (int qi = 0; qi < 10; ++qi) {
        const Vector y = X.points() * sample_simplex_weights(X.size(), rng).values();
        const auto located = locate_simplex(c, X, y);
        REQUIRE(located.size() == 1);
        const VertexSet& S = located.front();
        const SolveReport e = solve_exact(X, y);
        REQUIRE(e.ok());
        std::vector<int> nz;
        for (Eigen::Index i = 0; i < e.w.size(); ++i)
          if (e.w[i] != 0.0) nz.push_back(static_cast<int>(i));
        CHECK(static_cast<int>(nz.size()) <= d + 1);
        for (int i : nz)
          if (e.w[i] > 1e-12) CHECK(S.contains(i));

        // Move a little mass to an atom outside S and stay feasible.
        for (Eigen::Index j = 0; j < X.size(); ++j) {
          if (S.contains(static_cast<int>(j))) continue;
          const double t = 1e-3;
          const Vector z = (y - t * X.atom(j)) / (1.0 - t);
          const Vector a = barycentric(X, S, z);
          if (a.minCoeff() < 0.0) continue;
          Vector w = Vector::Zero(X.size());
          for (std::size_t k = 0; k < S.size(); ++k) w[S[k]] = (1.0 - t) * a[static_cast<Eigen::Index>(k)];
          w[j] = t;
          CHECK(locality(X, SimplexWeights(w, 1e-12), y) > e.locality);
        }
      }
    }
  }
}

TEST_CASE("chlp examples") {
  const Dictionary T = Dictionary::from_points({{0, 0}, {1, 0}, {0, 1}});
  const ChlpResult a = chlp_locate(T, vec({0.25, 0.25}));
  CHECK(a.status == ChlpStatus::located);
  CHECK(a.vertex_set == VertexSet{0, 1, 2});

  const Dictionary X = Dictionary::from_points({{0, 0}, {1, 0}, {0, 1}, {2, 2}});
  const ChlpResult b = chlp_locate(X, vec({1, 1}));
  CHECK(b.status == ChlpStatus::located);
  CHECK(b.vertex_set == VertexSet{1, 2, 3});
  const auto oracle_hits = locate_simplex(enumerate_delaunay(X), X, vec({1, 1}));
  CHECK(oracle_hits == std::vector<VertexSet>{b.vertex_set});
  // The optimal hyperplane passes through the lifted vertices.
  for (int i : b.vertex_set)
    CHECK(X.atom(i).dot(b.normal) + b.offset == doctest::Approx(X.sq_norms()[i]));

  CHECK(chlp_locate(T, vec({-1, -1})).status == ChlpStatus::outside_hull);

  const Dictionary Q = Dictionary::from_points({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  const ChlpResult deg = chlp_locate(Q, vec({0.1, 0.05}));
  CHECK(deg.status == ChlpStatus::degenerate);
  CHECK(deg.vertex_set.size() == 4);
}

TEST_CASE("chlp agrees with the oracle on random instances") {
  std::mt19937_64 rng(23);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Dictionary X(oracle::random_points(d, 12 + trial, rng));
      const DelaunayComplex c = enumerate_delaunay(X);
      for (int qi = 0; qi < 20; ++qi) {
        const Vector y = X.points() * sample_simplex_weights(X.size(), rng).values();
        const auto located = locate_simplex(c, X, y);
        REQUIRE(located.size() == 1);
        if (barycentric(X, located.front(), y).minCoeff() < 1e-3) continue;
        const ChlpResult r = chlp_locate(X, y);
        CHECK(r.status == ChlpStatus::located);
        CHECK(r.vertex_set == located.front());
      }
    }
  }
}
