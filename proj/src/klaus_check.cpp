#include "ksparse/klaus_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ksparse/error.hpp"

namespace ksparse {

using nlohmann::json;

namespace {

ConditionReport report(std::string tag, Status s, json witness = nullptr) {
  return {std::move(tag), s, std::move(witness)};
}

Status combine(Status a, Status b) {
  if (a == Status::fail || b == Status::fail) return Status::fail;
  if (a == Status::diagnostic || b == Status::diagnostic) return Status::diagnostic;
  return Status::pass;
}

// Window indices lying in some interior ball B(x, r_int - 1).
std::vector<bool> interior_mask(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  std::vector<bool> mask(g.size(), false);
  for (std::size_t a = 0; a < p.placements.size(); ++a)
    for (auto v : window_ball(p, a, p.placements[a].r_int - 1)) mask[g.index_of(v)] = true;
  return mask;
}

std::vector<bool> sharp_mask(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  std::vector<bool> mask(g.size(), false);
  for (std::size_t a = 0; a < p.placements.size(); ++a)
    for (auto v : window_ball(p, a, p.placements[a].r_ext)) mask[g.index_of(v)] = true;
  return mask;
}

// Smallest radius rho at which the rooted rho-ball of src stops embedding.
std::size_t first_failing_radius(const WeightedGraph& src, VertexId root, const WeightedGraph& tgt,
                                 VertexId tgt_root, const EmbeddingOptions& opts) {
  const std::size_t ecc = eccentricity(src, root);
  for (std::size_t rho = 0; rho <= ecc; ++rho) {
    auto piece = induced(src, ball(src, root, rho));
    if (!find_rooted_embedding(piece, root, tgt, tgt_root, opts)) return rho;
  }
  return ecc + 1;
}

// Explains why `src` (rooted at root) does not embed into `tgt`: either a
// structure-preserving map exists and some weights or measures differ, or
// the structure itself breaks at some radius.
json explain_non_embedding(const WeightedGraph& src, VertexId root, const MaterializedBall& tgt,
                           const EmbeddingOptions& opts) {
  EmbeddingOptions loose = opts;
  loose.ignore_weights = true;
  json w;
  auto shape = find_rooted_embedding(src, root, tgt.graph, tgt.root, loose);
  if (!shape) {
    w["reason"] = "structure";
    w["failing_radius"] = first_failing_radius(src, root, tgt.graph, tgt.root, loose);
    return w;
  }
  w["reason"] = "weights";
  json edges = json::array();
  json vertices = json::array();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto ti = tgt.graph.index_of(*shape->image(src.id(i)));
    const auto gen_label = [&](std::size_t t) { return raw(*tgt.labels.image(tgt.graph.id(t))); };
    if (!nearly_equal(src.measure(i), tgt.graph.measure(ti), opts.tol))
      vertices.push_back({{"vertex", raw(src.id(i))},
                          {"window_measure", src.measure(i)},
                          {"localization_vertex", gen_label(ti)},
                          {"localization_measure", tgt.graph.measure(ti)}});
    for (const auto& nb : src.neighbors(i)) {
      if (nb.index < i) continue;
      const auto tj = tgt.graph.index_of(*shape->image(src.id(nb.index)));
      const double lw = tgt.graph.weight(ti, tj);
      if (!nearly_equal(nb.weight, lw, opts.tol))
        edges.push_back({{"edge", {raw(src.id(i)), raw(src.id(nb.index))}},
                         {"window_weight", nb.weight},
                         {"localization_edge", {gen_label(ti), gen_label(tj)}},
                         {"localization_weight", lw}});
    }
  }
  w["edges"] = edges;
  w["vertices"] = vertices;
  return w;
}

// Vertex with minimal eccentricity, smallest index on ties.
VertexId center_of(const WeightedGraph& g) {
  std::size_t best = 0;
  std::size_t best_ecc = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = eccentricity(g, g.id(i));
    if (e < best_ecc) {
      best_ecc = e;
      best = i;
    }
  }
  return g.id(best);
}

bool embeds_somewhere(const WeightedGraph& small, VertexId root, const WeightedGraph& big,
                      VertexId big_root) {
  if (find_rooted_embedding(small, root, big, big_root)) return true;
  for (auto v : big.vertices())
    if (v != big_root && find_rooted_embedding(small, root, big, v)) return true;
  return false;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::diagnostic: return "asymptotic-diagnostic";
  }
  return "?";
}

json ConditionReport::to_json() const {
  return {{"condition", condition}, {"status", to_string(status)}, {"witness", witness}};
}

ConditionReport check_radii_trend(const KlausSparsePresentation& p) {
  const auto& pl = p.placements;
  const std::size_t n = pl.size();
  if (n < 2) return report("a", Status::diagnostic, {{"reason", "fewer than two placements"}});
  auto gap = [&](std::size_t a) { return pl[a].r_ext - pl[a].r_int; };

  const bool constant_int =
      std::all_of(pl.begin(), pl.end(), [&](const Placement& q) { return q.r_int == pl[0].r_int; });
  bool constant_gap = true;
  for (std::size_t a = 1; a < n; ++a) constant_gap = constant_gap && gap(a) == gap(0);
  if (n >= 3 && (constant_int || constant_gap)) {
    json w{{"placements", n}, {"reason", constant_gap ? "constant r_ext - r_int" : "constant r_int"}};
    w["value"] = constant_gap ? gap(0) : pl[0].r_int;
    return report("a", Status::fail, w);
  }

  json broken = json::array();
  for (std::size_t t = 1; t < n; ++t) {
    std::size_t early_int = pl[0].r_int, early_gap = gap(0);
    for (std::size_t a = 1; a < t; ++a) {
      early_int = std::min(early_int, pl[a].r_int);
      early_gap = std::min(early_gap, gap(a));
    }
    std::size_t late_int = pl[t].r_int, late_gap = gap(t);
    for (std::size_t a = t + 1; a < n; ++a) {
      late_int = std::min(late_int, pl[a].r_int);
      late_gap = std::min(late_gap, gap(a));
    }
    if (late_int <= early_int || late_gap <= early_gap)
      broken.push_back({{"checkpoint", t},
                        {"min_r_int", {early_int, late_int}},
                        {"min_gap", {early_gap, late_gap}}});
  }
  if (broken.empty()) return report("a", Status::pass);
  return report("a", Status::diagnostic, {{"checkpoints", broken}});
}

ConditionReport check_pattern_inclusion(const KlausSparsePresentation& p,
                                        const EmbeddingOptions& opts) {
  json failures = json::array();
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    const auto& pl = p.placements[a];
    auto src = induced(*p.window, window_ball(p, a, pl.r_ext));
    auto tgt = materialize(p.localization(pl.k), pl.r_ext + 2);
    if (find_rooted_embedding(src, pl.center, tgt.graph, tgt.root, opts)) continue;
    json w = explain_non_embedding(src, pl.center, tgt, opts);
    w["placement"] = a;
    w["center"] = raw(pl.center);
    w["r_ext"] = pl.r_ext;
    failures.push_back(w);
  }
  if (failures.empty()) return report("b1", Status::pass);
  return report("b1", Status::fail, {{"failures", failures}});
}

ConditionReport check_reverse_inclusion(const KlausSparsePresentation& p, std::size_t r) {
  if (r == 0) throw Error(ErrorCode::BadParameter, "radius must be >= 1");
  Status status = Status::pass;
  json per_k = json::array();
  for (const auto& [k, loc] : p.localizations) {
    auto src = materialize(loc, r);
    json entry{{"k", k}};
    json tried = json::array();
    bool found = false;
    for (std::size_t a = 0; a < p.placements.size() && !found; ++a) {
      const auto& pl = p.placements[a];
      if (pl.k != k || pl.r_int < r + 1) continue;
      tried.push_back(a);
      auto interior = induced(*p.window, window_ball(p, a, pl.r_int - 1));
      if (find_rooted_embedding(src.graph, src.root, interior, pl.center)) {
        entry["placement"] = a;
        found = true;
      }
    }
    if (found) {
      entry["status"] = "pass";
    } else if (tried.empty()) {
      entry["status"] = to_string(Status::diagnostic);
      status = combine(status, Status::diagnostic);
    } else {
      entry["status"] = "fail";
      entry["reason"] = "NotEmbeddable";
      entry["tried"] = tried;
      status = Status::fail;
    }
    per_k.push_back(entry);
  }
  return report("b2", status, {{"radius", r}, {"localizations", per_k}});
}

std::vector<std::vector<VertexId>> outer_components(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  const auto mask = interior_mask(p);
  std::vector<VertexId> rest;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!mask[i]) rest.push_back(g.id(i));
  auto comps = connected_components(induced(g, rest));
  for (auto& c : comps)
    std::sort(c.begin(), c.end(),
              [&](VertexId x, VertexId y) { return g.index_of(x) < g.index_of(y); });
  return comps;
}

ConditionReport check_components(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  const auto comps = outer_components(p);
  const std::size_t cap = EmbeddingOptions{}.vertex_cap;
  auto local = materialize(p.medium, 2);

  struct Piece {
    WeightedGraph graph;
    VertexId root;
  };
  std::vector<Piece> pieces;
  json failures = json::array();
  json oversized = json::array();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto sub = induced(g, comps[c]);
    if (sub.size() > cap) {
      oversized.push_back({{"component", c}, {"size", sub.size()}});
      pieces.push_back({std::move(sub), comps[c].front()});
      continue;
    }
    const auto root = center_of(sub);
    auto medium_ball = materialize(p.medium, eccentricity(sub, root));
    if (!find_rooted_embedding(sub, root, medium_ball.graph, medium_ball.root)) {
      // The media used here are vertex-transitive, so a 1-ball that does
      // not fit at the medium root fits nowhere.
      json obstructions = json::array();
      for (auto v : sub.vertices()) {
        auto one = induced(sub, ball(sub, v, 1));
        if (!find_rooted_embedding(one, v, local.graph, local.root)) obstructions.push_back(raw(v));
      }
      json w{{"component", c}, {"root", raw(root)}, {"size", sub.size()}, {"local_obstructions", obstructions}};
      if (obstructions.empty())
        w["failing_radius"] = first_failing_radius(sub, root, medium_ball.graph, medium_ball.root, {});
      failures.push_back(w);
    }
    pieces.push_back({std::move(sub), root});
  }

  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pieces[a].graph.size() < pieces[b].graph.size(); });
  json chain_breaks = json::array();
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    const auto& small = pieces[order[t]];
    const auto& big = pieces[order[t + 1]];
    if (small.graph.size() > cap || big.graph.size() > cap) continue;
    if (!embeds_somewhere(small.graph, small.root, big.graph, big.root))
      chain_breaks.push_back({{"smaller", order[t]}, {"larger", order[t + 1]}});
  }

  json w{{"components", comps.size()}};
  json sizes = json::array();
  for (const auto& c : comps) sizes.push_back(c.size());
  w["sizes"] = sizes;
  if (!failures.empty() || !chain_breaks.empty()) {
    w["failures"] = failures;
    w["chain_breaks"] = chain_breaks;
    return report("c", Status::fail, w);
  }
  if (!oversized.empty()) {
    w["oversized"] = oversized;
    return report("c", Status::diagnostic, w);
  }
  return report("c", Status::pass, w);
}

ConditionReport check_disjointness(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  std::vector<std::vector<int>> dist;
  for (const auto& pl : p.placements)
    dist.push_back(bfs_distances(g, g.index_of(pl.center), static_cast<int>(pl.r_ext)));
  for (std::size_t a = 0; a < p.placements.size(); ++a)
    for (std::size_t b = a + 1; b < p.placements.size(); ++b)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (dist[a][i] >= 0 && dist[b][i] >= 0)
          return report("d", Status::fail,
                        {{"placements", {a, b}},
                         {"centers", {raw(p.placements[a].center), raw(p.placements[b].center)}},
                         {"vertex", raw(g.id(i))},
                         {"distances", {dist[a][i], dist[b][i]}},
                         {"r_ext", {p.placements[a].r_ext, p.placements[b].r_ext}}});
  return report("d", Status::pass);
}

ConditionReport check_medium_window(const KlausSparsePresentation& p, std::size_t r) {
  if (r == 0) throw Error(ErrorCode::BadParameter, "radius must be >= 1");
  const auto& g = *p.window;
  auto src = materialize(p.medium, r);
  json tried = json::array();
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    const auto& pl = p.placements[a];
    if (pl.r_ext < pl.r_int + 2 || pl.r_ext - pl.r_int - 2 < 2 * r + 1) continue;
    tried.push_back(a);
    const auto from_center = bfs_distances(g, g.index_of(pl.center), static_cast<int>(pl.r_ext - 1));
    std::vector<VertexId> annulus;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (from_center[i] > static_cast<int>(pl.r_int + 1)) annulus.push_back(g.id(i));
    auto ring = induced(g, annulus);
    // candidate roots: annulus vertices whose r-ball in the ring is large
    // enough, mid-annulus first
    const double mid = 0.5 * static_cast<double>(pl.r_int + 2 + pl.r_ext - 1);
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto d = from_center[g.index_of(ring.id(i))];
      cand.emplace_back(std::abs(d - mid), i);
    }
    std::sort(cand.begin(), cand.end());
    for (const auto& [score, i] : cand) {
      if (ball(ring, ring.id(i), r).size() < src.graph.size()) continue;
      auto piece = induced(ring, ball(ring, ring.id(i), r));
      if (find_rooted_embedding(src.graph, src.root, piece, ring.id(i)))
        return report("e", Status::pass, {{"radius", r}, {"placement", a}, {"root", raw(ring.id(i))}});
    }
  }
  if (tried.empty())
    return report("e", Status::diagnostic, {{"radius", r}, {"reason", "no annulus wide enough in window"}});
  return report("e", Status::fail, {{"radius", r}, {"reason", "NotEmbeddable"}, {"tried", tried}});
}

WProfile compute_W(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  const auto sharp = sharp_mask(p);
  const auto interior = interior_mask(p);
  WProfile out;
  out.W.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (const auto& nb : g.neighbors(i))
      if (!(sharp[i] && sharp[nb.index])) s += nb.weight;
    out.W[i] = s / g.measure(i);
    out.sup = std::max(out.sup, out.W[i]);
    if (out.W[i] > 0.0 && interior[i]) out.support_in_components = false;
  }
  out.bounded_by_medium_degree = out.sup <= p.medium.sup_degree * (1.0 + 1e-12);
  return out;
}

bool sharp_block_diagonal(const KlausSparsePresentation& p, json* witness) {
  const auto& g = *p.window;
  std::vector<int> owner(g.size(), -1);
  for (std::size_t a = 0; a < p.placements.size(); ++a)
    for (auto v : window_ball(p, a, p.placements[a].r_ext)) owner[g.index_of(v)] = static_cast<int>(a);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& nb : g.neighbors(i))
      if (owner[i] >= 0 && owner[nb.index] >= 0 && owner[i] != owner[nb.index]) {
        if (witness)
          *witness = {{"edge", {raw(g.id(i)), raw(g.id(nb.index))}}, {"placements", {owner[i], owner[nb.index]}}};
        return false;
      }
  return true;
}

ConditionReport check_growth(const WeightedGraph& g, VertexId base, double gamma, double C,
                             std::size_t r_max) {
  if (!(gamma > 1.0) || !(C > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "need gamma > 1, C > 0");
  std::vector<std::size_t> samples{g.index_of(base)};
  std::vector<std::size_t> boundary;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.is_boundary(i)) boundary.push_back(i);
  std::vector<int> to_boundary(g.size(), -1);
  if (!boundary.empty()) to_boundary = bfs_distances(g, boundary);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (i != samples[0] && (to_boundary[i] < 0 || to_boundary[i] >= static_cast<int>(r_max)))
      samples.push_back(i);

  std::size_t worst_r = r_max + 1;
  std::size_t worst_x = 0;
  std::uint64_t worst_count = 0;
  double max_ratio = 0.0;
  for (auto x : samples) {
    const auto d = bfs_distances(g, x, static_cast<int>(r_max));
    std::vector<std::uint64_t> sphere(r_max + 1, 0);
    for (int di : d)
      if (di >= 0) ++sphere[static_cast<std::size_t>(di)];
    for (std::size_t r = 0; r <= r_max; ++r) {
      const double bound = C * std::pow(gamma, static_cast<double>(r));
      max_ratio = std::max(max_ratio, static_cast<double>(sphere[r]) / bound);
      if (static_cast<double>(sphere[r]) > bound && r < worst_r) {
        worst_r = r;
        worst_x = x;
        worst_count = sphere[r];
      }
    }
  }
  if (worst_r <= r_max)
    return report("growth", Status::fail,
                  {{"vertex", raw(g.id(worst_x))},
                   {"radius", worst_r},
                   {"sphere_size", worst_count},
                   {"bound", C * std::pow(gamma, static_cast<double>(worst_r))}});
  return report("growth", Status::pass,
                {{"samples", samples.size()}, {"r_max", r_max}, {"max_ratio", max_ratio}});
}

ConditionReport check_growth(const GraphGenerator& gen, double gamma, double C, std::size_t r_max) {
  if (!(gamma > 1.0) || !(C > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "need gamma > 1, C > 0");
  const auto profile = growth_profile(gen, r_max);
  for (std::size_t r = 0; r < profile.sphere_sizes.size(); ++r) {
    const double bound = C * std::pow(gamma, static_cast<double>(r));
    if (static_cast<double>(profile.sphere_sizes[r]) > bound)
      return report("growth", Status::fail,
                    {{"vertex", raw(gen.root)},
                     {"radius", r},
                     {"sphere_size", profile.sphere_sizes[r]},
                     {"bound", bound}});
  }
  return report("growth", Status::pass, {{"vertex", raw(gen.root)}, {"r_max", r_max}});
}

std::vector<ConditionReport> check_all(const KlausSparsePresentation& p, std::size_t r) {
  return {check_radii_trend(p),      check_pattern_inclusion(p), check_reverse_inclusion(p, r),
          check_components(p),       check_disjointness(p),      check_medium_window(p, r)};
}

}  // namespace ksparse
