#include <cmath>

#include "doctest.h"
#include "ksparse/error.hpp"
#include "ksparse/klaus_check.hpp"

using namespace ksparse;

namespace {

KlausSparsePresentation shipped(const std::string& name) {
  return assemble(read_plan_file(std::string(KSPARSE_DATA_DIR) + "/plans/" + name));
}

KlausSparsePresentation with_radii(std::vector<std::pair<std::size_t, std::size_t>> radii) {
  KlausSparsePresentation p;
  for (std::size_t a = 0; a < radii.size(); ++a)
    p.placements.push_back({a, 1, {0}, vid(0), radii[a].first, radii[a].second});
  return p;
}

// Backbone vertex at hop distance d from `from` on the side of the base.
VertexId toward_base(const KlausSparsePresentation& p, VertexId from, std::size_t d) {
  const auto& g = *p.window;
  for (auto v : g.vertices())
    if (distance(g, from, v) == d && *distance(g, v, p.base) + d == *distance(g, from, p.base))
      return v;
  FAIL("no such vertex");
  return from;
}

std::uint64_t brute_crossover(double C) {
  // first r with (r+1)! > C 2^r, by direct products
  for (std::uint64_t r = 0;; ++r) {
    double fact = 1.0;
    for (std::uint64_t j = 2; j <= r + 1; ++j) fact *= static_cast<double>(j);
    double bound = C;
    for (std::uint64_t j = 0; j < r; ++j) bound *= 2.0;
    if (fact > bound) return r;
  }
}

}  // namespace

TEST_CASE("radii trend") {
  CHECK(check_radii_trend(with_radii({{3, 8}, {4, 10}, {5, 12}})).status == Status::pass);
  CHECK(check_radii_trend(with_radii({{5, 12}, {3, 8}})).status == Status::diagnostic);
  auto flat = check_radii_trend(with_radii({{3, 8}, {4, 9}, {6, 11}}));
  CHECK(flat.status == Status::fail);
  CHECK(flat.witness["value"] == 5);
  CHECK(check_radii_trend(with_radii({{3, 8}})).status == Status::diagnostic);
  CHECK(check_radii_trend(shipped("starlike.plan")).status == Status::pass);
}

TEST_CASE("shipped presentations pass b1, c, d") {
  for (const char* name : {"starlike.plan", "z2like.plan", "z2like_wide.plan"}) {
    CAPTURE(name);
    auto p = shipped(name);
    CHECK(check_pattern_inclusion(p).status == Status::pass);
    CHECK(check_components(p).status == Status::pass);
    CHECK(check_disjointness(p).status == Status::pass);
    CHECK(sharp_block_diagonal(p));
    for (const auto& r : check_all(p, 2)) CHECK(r.status != Status::fail);
  }
}

TEST_CASE("component structure") {
  auto z = shipped("z2like.plan");
  CHECK(outer_components(z).size() == 1);
  auto s = shipped("starlike.plan");
  auto comps = outer_components(s);
  // four backbone segments and two isolated arm tips
  CHECK(comps.size() == 6);
  for (const auto& c : comps) {
    auto sub = induced(*s.window, c);
    CHECK(sub.num_edges() + 1 == sub.size());
  }
}

TEST_CASE("reverse inclusion and medium windows") {
  auto s = shipped("starlike.plan");
  CHECK(check_reverse_inclusion(s, 2).status == Status::pass);
  CHECK(check_reverse_inclusion(s, 20).status == Status::diagnostic);
  CHECK(check_medium_window(s, 2).status == Status::pass);
  CHECK(check_medium_window(s, 30).status == Status::diagnostic);

  auto wide = shipped("z2like_wide.plan");
  auto e = check_medium_window(wide, 2);
  CHECK(e.status == Status::pass);
  CHECK(check_medium_window(shipped("z2like.plan"), 2).status == Status::diagnostic);

  // corrupt the interior of the weighted placement: its center measure
  auto g = s.window->to_parts();
  const auto c = s.window->index_of(s.placements[1].center);
  g.measure[c] = 0.75;
  auto bad = s.with_window(WeightedGraph::from_parts(g));
  auto rep = check_reverse_inclusion(bad, 2);
  CHECK(rep.status == Status::fail);
  CHECK(rep.witness["localizations"][1]["reason"] == "NotEmbeddable");
}

TEST_CASE("mutation: perturbed pattern weight is reported with a replayable witness") {
  auto p = shipped("starlike.plan");
  const auto& w = *p.window;
  const auto c = p.placements[0].center;
  const auto nb = w.id(w.neighbors(w.index_of(c))[0].index);
  auto bad = p.with_window(with_edge_weight(w, c, nb, 1.1));
  auto rep = check_pattern_inclusion(bad);
  REQUIRE(rep.status == Status::fail);
  const auto& f = rep.witness["failures"][0];
  CHECK(f["placement"] == 0);
  CHECK(f["reason"] == "weights");
  REQUIRE(f["edges"].size() == 1);
  const auto& e = f["edges"][0];
  std::vector<std::uint64_t> edge = e["edge"];
  CHECK(((edge[0] == raw(c) && edge[1] == raw(nb)) || (edge[1] == raw(c) && edge[0] == raw(nb))));

  // replay through graph primitives
  const auto& g = *bad.window;
  CHECK(g.weight(g.index_of(vid(edge[0])), g.index_of(vid(edge[1]))) == doctest::Approx(1.1));
  std::vector<std::uint64_t> loc_edge = e["localization_edge"];
  double loc_w = 0.0;
  for (const auto& [v, wt] : bad.localization(1).neighbors(vid(loc_edge[0])))
    if (raw(v) == loc_edge[1]) loc_w = wt;
  CHECK(loc_w == 1.0);
  auto src = induced(g, window_ball(bad, 0, 8));
  auto tgt = materialize(bad.localization(1), 10);
  CHECK_FALSE(find_rooted_embedding(src, c, tgt.graph, tgt.root));
}

TEST_CASE("mutation: overlapping balls") {
  auto p = shipped("starlike.plan");
  auto bad = p;
  bad.placements[1].center = toward_base(p, p.placements[0].center, 1);
  auto rep = check_disjointness(bad);
  REQUIRE(rep.status == Status::fail);
  std::vector<std::uint64_t> centers = rep.witness["centers"];
  std::vector<std::size_t> radii = rep.witness["r_ext"];
  const auto v = vid(rep.witness["vertex"].get<std::uint64_t>());
  CHECK(*distance(*bad.window, vid(centers[0]), v) <= radii[0]);
  CHECK(*distance(*bad.window, vid(centers[1]), v) <= radii[1]);
}

TEST_CASE("mutation: apex inside an outer component") {
  auto p = shipped("z2like.plan");
  const auto& g = *p.window;
  // a unit face far from both placements and the window boundary
  VertexId v{};
  for (auto x : g.vertices())
    if (*distance(g, x, p.placements[0].center) >= 6 && *distance(g, x, p.placements[1].center) >= 6 &&
        *distance(g, x, p.base) <= 5) {
      v = x;
      break;
    }
  auto nbs = g.neighbors(g.index_of(v));
  const auto a = nbs[0].index;
  std::size_t b = 0, corner = 0;
  bool found = false;
  for (std::size_t t = 1; t < nbs.size() && !found; ++t)
    for (const auto& na : g.neighbors(a))
      if (na.index != g.index_of(v) && g.weight(na.index, nbs[t].index) > 0) {
        b = nbs[t].index;
        corner = na.index;
        found = true;
        break;
      }
  REQUIRE(found);
  const auto apex = vid((1ULL << 63) | 77);
  std::vector<std::pair<VertexId, double>> edges{{v, 1.0}, {g.id(a), 1.0}, {g.id(b), 1.0}, {g.id(corner), 1.0}};
  auto bad = p.with_window(with_vertex(g, apex, 1.0, edges));
  auto rep = check_components(bad);
  REQUIRE(rep.status == Status::fail);
  std::vector<std::uint64_t> obstructions = rep.witness["failures"][0]["local_obstructions"];
  CHECK(std::find(obstructions.begin(), obstructions.end(), raw(apex)) != obstructions.end());
  // replay: the apex 1-ball has no rooted copy in Z^2
  const auto& bw = *bad.window;
  auto one = induced(bw, ball(bw, apex, 1));
  auto z = materialize(gen_z2(), 2);
  CHECK_FALSE(find_rooted_embedding(one, apex, z.graph, z.root));
}

TEST_CASE("W surrogate") {
  auto p = shipped("starlike.plan");
  const auto& g = *p.window;
  auto W = compute_W(p);
  CHECK(W.support_in_components);
  CHECK(W.bounded_by_medium_degree);
  CHECK(W.sup == 2.0);
  CHECK(W.W[g.index_of(p.placements[1].center)] == 0.0);
  CHECK(W.W[g.index_of(p.base)] == 2.0);
  // exterior-sphere vertex: one neighbor outside V#
  auto rim = toward_base(p, p.placements[2].center, 30);
  CHECK(W.W[g.index_of(rim)] == 1.0);

  auto z = shipped("z2like.plan");
  auto Wz = compute_W(z);
  CHECK(Wz.support_in_components);
  CHECK(Wz.bounded_by_medium_degree);
  CHECK(Wz.sup <= 4.0);
}

TEST_CASE("sharp graph is block-diagonal exactly when balls do not touch") {
  auto p = shipped("starlike.plan");
  CHECK(sharp_block_diagonal(p));
  auto touching = p;
  // move placement 1 so that its exterior ball abuts placement 0's
  touching.placements[1].center = toward_base(p, p.placements[0].center, 8 + 1 + 15);
  CHECK(check_disjointness(touching).status == Status::pass);
  nlohmann::json w;
  CHECK_FALSE(sharp_block_diagonal(touching, &w));
  std::vector<std::uint64_t> e = w["edge"];
  CHECK(touching.window->weight(touching.window->index_of(vid(e[0])), touching.window->index_of(vid(e[1]))) > 0);
}

TEST_CASE("growth") {
  auto line = materialize(gen_line(), 120);
  CHECK(check_growth(line.graph, line.root, 2.0, 2.0, 50).status == Status::pass);
  auto grid = materialize(gen_z2(), 30);
  CHECK(check_growth(grid.graph, grid.root, 2.0, 4.0, 10).status == Status::pass);

  for (double C : {1.0, 1e3, 1e6}) {
    auto rep = check_growth(gen_antitree(), 2.0, C, 16);
    REQUIRE(rep.status == Status::fail);
    CHECK(rep.witness["radius"] == brute_crossover(C));
  }
  CHECK(brute_crossover(1e6) == 12);

  auto tree = materialize(gen_antitree(), 4);
  auto rep = check_growth(tree.graph, tree.root, 2.0, 1.0, 3);
  REQUIRE(rep.status == Status::fail);
  CHECK(rep.witness["radius"] <= 2);
  // replay the witness
  const auto x = vid(rep.witness["vertex"].get<std::uint64_t>());
  const std::size_t r = rep.witness["radius"];
  auto d = bfs_distances(tree.graph, tree.graph.index_of(x));
  CHECK(std::count(d.begin(), d.end(), static_cast<int>(r)) == rep.witness["sphere_size"].get<int>());
}
