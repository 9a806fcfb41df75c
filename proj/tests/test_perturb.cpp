#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "ksparse/error.hpp"
#include "ksparse/generators.hpp"
#include "ksparse/perturb.hpp"
#include "support.hpp"

using namespace ksparse;
using ksparse::labels::line;
using ksparse::testing::path;

namespace {

WeightedGraph z_window(std::size_t r) { return materialize(gen_line(), r).graph; }

double bump(std::size_t d) { return 1.0 + 1.0 / (1.0 + static_cast<double>(d)); }

// Random connected graph: a spanning path plus extra chords.
WeightedGraph random_graph(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 3.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<Edge> edges;
  std::map<VertexId, double> m;
  for (std::size_t i = 0; i < n; ++i) m[vid(i)] = w(rng);
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({vid(i), vid(i + 1), w(rng)});
  std::set<std::pair<std::size_t, std::size_t>> chords;
  for (std::size_t k = 0; k < n; ++k) {
    auto a = pick(rng), b = pick(rng);
    if (a + 1 < b && chords.insert({a, b}).second) edges.push_back({vid(a), vid(b), w(rng)});
  }
  return build_graph(edges, m);
}

// Same edge set, weights and measures rescaled by random positive factors.
WeightedGraph jitter(const WeightedGraph& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.5, 2.0);
  std::vector<Edge> edges;
  std::map<VertexId, double> m;
  for (std::size_t i = 0; i < g.size(); ++i) {
    m[g.id(i)] = g.measure(i) * f(rng);
    for (const auto& nb : g.neighbors(i))
      if (i < nb.index) edges.push_back({g.id(i), g.id(nb.index), nb.weight * f(rng)});
  }
  return build_graph(edges, m);
}

std::vector<double> sorted_eigs(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().begin(), es.eigenvalues().end());
  return v;
}

}  // namespace

TEST_CASE("identity perturbation") {
  auto g = z_window(30);
  auto pair = make_pair(g, g, line(0));
  CHECK(pair.c_bound == 1.0);
  auto rep = check_hypotheses(pair, 30);
  CHECK(rep.pass);
  for (double s : rep.measure_sups) CHECK(s == 0.0);
  for (double s : rep.edge_sups) CHECK(s == 0.0);
  CHECK((transported_matrix(pair) - laplacian_matrix(g, Boundary::neumann)).cwiseAbs().maxCoeff() < 1e-14);
  auto F = F_domination(pair, 20, 1);
  for (double x : F.F) CHECK(x == 0.0);
  CHECK(F.ok);
  CHECK(compare_spectra(pair, Boundary::dirichlet, 5).filtered == 0.0);
}

TEST_CASE("vertex sets and domination are validated") {
  auto g = path(6);
  CHECK_THROWS_AS(make_pair(g, path(7), vid(0)), Error);
  auto extra = with_edge_weight(g, vid(0), vid(3), 1.0);
  try {
    make_pair(g, extra, vid(0));
    FAIL("expected DominationFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DominationFailure);
  }
  // removing an edge is allowed
  auto fewer = with_edge_weight(g, vid(2), vid(3), 0.0);
  CHECK_NOTHROW(make_pair(g, fewer, vid(0)));
  auto doubled = with_edge_weight(g, vid(2), vid(3), 2.5);
  CHECK(make_pair(g, doubled, vid(0)).c_bound == 2.5);
}

TEST_CASE("hypothesis profile for the decaying measure bump on Z") {
  auto g = z_window(60);
  auto pair = make_pair(g, scale_measure(g, line(0), bump), line(0));
  auto rep = check_hypotheses(pair, 60);
  for (std::size_t r = 0; r <= 60; ++r) CHECK(rep.measure_sups[r] == doctest::Approx(1.0 / (2.0 + r)).epsilon(1e-14));
  for (double s : rep.edge_sups) CHECK(s == 0.0);
  CHECK(rep.pass);
  CHECK_THROWS_AS(check_hypotheses(pair, 61), Error);

  // a bump that grows outward fails
  auto grow = make_pair(g, scale_measure(g, line(0), [](std::size_t d) { return 1.0 + 0.01 * d; }), line(0));
  CHECK_FALSE(check_hypotheses(grow, 60).pass);
}

TEST_CASE("transported matrix") {
  SUBCASE("doubling the measure halves the spectrum") {
    auto g = z_window(20);
    auto pair = make_pair(g, scale_measure(g, line(0), [](std::size_t) { return 2.0; }), line(0));
    for (auto b : {Boundary::neumann, Boundary::dirichlet}) {
      auto t = sorted_eigs(transported_matrix(pair, b));
      auto d = sorted_eigs(laplacian_matrix(g, b));
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx(0.5 * d[i]).epsilon(1e-12));
    }
  }
  SUBCASE("entrywise equal to the symmetrized frame of g~ on random pairs") {
    // M^{1/2} D = M~^{1/2}, so the product collapses to M~^{-1/2} L~ M~^{-1/2}
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      auto g = random_graph(25, rng);
      auto gt = jitter(g, rng);
      auto pair = make_pair(g, gt, vid(0));
      auto a = transported_matrix(pair);
      auto b = laplacian_matrix(gt, Boundary::neumann);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + b.cwiseAbs().maxCoeff()));
      auto ta = sorted_eigs(a), tb = sorted_eigs(b);
      for (std::size_t i = 0; i < ta.size(); ++i) CHECK(std::abs(ta[i] - tb[i]) < 1e-10);
    }
  }
  SUBCASE("dirichlet needs boundary data on g~") {
    auto g = path(5);
    CHECK_THROWS_AS(transported_matrix(make_pair(g, g, vid(0)), Boundary::dirichlet), Error);
  }
}

TEST_CASE("F domination") {
  SUBCASE("measure change at one vertex") {
    auto g = z_window(20);
    auto gt = scale_measure(g, line(0), [](std::size_t d) { return d == 0 ? 2.0 : 1.0; });
    auto pair = make_pair(g, gt, line(0));
    auto F = F_domination(pair, 200, 3);
    CHECK(F.ok);
    const auto d = bfs_distances(g, g.index_of(line(0)));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (d[i] > 1) CHECK(F.F[i] == 0.0);
    }
    // at 0: |2 - 1| + (1/2)(2 * (|1 - 1/2| + |1 - 1|)) = 3/2; at ±1: (1/2)(|1 - 1| + |1 - 1/2|) = 1/4
    CHECK(F.F[g.index_of(line(0))] == doctest::Approx(1.5));
    CHECK(F.F[g.index_of(line(1))] == doctest::Approx(0.25));
    CHECK(F.F[g.index_of(line(-1))] == doctest::Approx(0.25));
  }
  SUBCASE("500 random f on the decaying bump") {
    auto g = z_window(100);
    auto pair = make_pair(g, scale_measure(g, line(0), bump), line(0));
    auto F = F_domination(pair, 500, 11);
    CHECK(F.ok);
    CHECK(F.decreasing);
    CHECK(F.shell_ratio.front() > F.shell_ratio[50]);
  }
  SUBCASE("random weighted pairs never violate the bound") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      auto g = random_graph(30, rng);
      auto pair = make_pair(g, jitter(g, rng), vid(0));
      auto F = F_domination(pair, 50, trial);
      CHECK(F.ok);
    }
  }
  CHECK_THROWS_AS(F_domination(make_pair(path(4), path(4), vid(0)), 0, 1), Error);
}

TEST_CASE("filtered spectra of Z and its perturbations") {
  auto g = z_window(200);
  SUBCASE("decaying measure bump") {
    auto pair = make_pair(g, scale_measure(g, line(0), bump), line(0));
    auto cmp = compare_spectra(pair, Boundary::dirichlet, 25);
    CHECK(cmp.filtered < 0.05);
    auto swapped = make_pair(pair.g_tilde, pair.g, line(0));
    CHECK(std::abs(compare_spectra(swapped, Boundary::dirichlet, 25).filtered - cmp.filtered) < 1e-9);
  }
  SUBCASE("finitely many edges changed") {
    auto gt = with_edge_weight(g, line(0), line(1), 0.5);
    gt = with_edge_weight(gt, line(3), line(4), 0.2);
    auto cmp = compare_spectra(make_pair(g, gt, line(0)), Boundary::dirichlet, 25);
    CHECK(cmp.filtered < 0.05);
  }
  SUBCASE("filter that removes everything") {
    auto pair = make_pair(g, g, line(0));
    CHECK_THROWS_AS(compare_spectra(pair, Boundary::dirichlet, 500), Error);
  }
}
