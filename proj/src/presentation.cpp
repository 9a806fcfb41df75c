#include "ksparse/presentation.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ksparse/error.hpp"
#include "ksparse/graph_io.hpp"

namespace ksparse {

namespace {

// Graph under construction with arbitrary 64-bit keys; finalized with
// labels assigned in BFS order from a base key.
class KeyedBuilder {
 public:
  void vertex(std::uint64_t key, double m) { measure_[key] = m; }
  void edge(std::uint64_t a, std::uint64_t b, double w) {
    adj_[a][b] = w;
    adj_[b][a] = w;
  }
  void exterior(std::uint64_t key, double w) { exterior_[key] += w; }
  bool has(std::uint64_t key) const { return measure_.contains(key); }

  WeightedGraph finalize(std::uint64_t base, std::unordered_map<std::uint64_t, VertexId>& label) {
    std::vector<std::uint64_t> order{base};
    label.clear();
    label.emplace(base, vid(0));
    for (std::size_t head = 0; head < order.size(); ++head)
      for (const auto& [nb, w] : adj_[order[head]])
        if (label.emplace(nb, vid(order.size())).second) order.push_back(nb);
    if (order.size() != measure_.size())
      throw Error(ErrorCode::BadParameter, "assembled window is not connected");

    WeightedGraph::Parts parts;
    parts.has_boundary = true;
    parts.adj.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      parts.ids.push_back(vid(i));
      parts.measure.push_back(measure_.at(order[i]));
      auto ext = exterior_.find(order[i]);
      parts.exterior.push_back(ext == exterior_.end() ? 0.0 : ext->second);
      for (const auto& [nb, w] : adj_[order[i]])
        parts.adj[i].push_back({static_cast<std::size_t>(raw(label.at(nb))), w});
    }
    return WeightedGraph::from_parts(std::move(parts));
  }

 private:
  std::map<std::uint64_t, double> measure_;
  std::map<std::uint64_t, std::map<std::uint64_t, double>> adj_;
  std::map<std::uint64_t, double> exterior_;
};

void validate_common(const std::map<std::size_t, GraphGenerator>& localizations,
                     const std::vector<PlacementPlan>& plan, std::size_t dims) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& pl : plan) {
    if (!localizations.contains(pl.k))
      throw Error(ErrorCode::BadParameter, "no localization k=" + std::to_string(pl.k));
    if (pl.position.size() != dims)
      throw Error(ErrorCode::BadParameter, "position needs " + std::to_string(dims) + " coordinates");
    if (pl.r_int == 0 || pl.r_int >= pl.r_ext)
      throw Error(ErrorCode::BadParameter, "need 0 < r_int < r_ext");
    if (!seen.emplace(pl.i, pl.k).second)
      throw Error(ErrorCode::BadParameter, "duplicate placement (i,k)");
  }
}

// Definition (d): pairwise disjoint r_ext balls, checked on the window.
void require_disjoint(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  std::vector<int> owner(g.size(), -1);
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    for (auto v : window_ball(p, a, p.placements[a].r_ext)) {
      auto idx = g.index_of(v);
      if (owner[idx] >= 0)
        throw Error(ErrorCode::OverlappingBalls,
                    "placements " + std::to_string(owner[idx]) + " and " + std::to_string(a) +
                        " share vertex " + std::to_string(raw(v)));
      owner[idx] = static_cast<int>(a);
    }
  }
}

void require_pattern_inclusion(const KlausSparsePresentation& p) {
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    if (window_ball(p, a, p.placements[a].r_ext).size() > EmbeddingOptions{}.vertex_cap) continue;
    if (!pattern_embedding(p, a))
      throw Error(ErrorCode::BadParameter,
                  "placement " + std::to_string(a) + " does not embed into its localization");
  }
}

}  // namespace

const GraphGenerator& KlausSparsePresentation::localization(std::size_t k) const {
  auto it = localizations.find(k);
  if (it == localizations.end())
    throw Error(ErrorCode::BadParameter, "no localization k=" + std::to_string(k));
  return it->second;
}

KlausSparsePresentation KlausSparsePresentation::with_window(WeightedGraph g) const {
  KlausSparsePresentation copy = *this;
  copy.window = std::make_shared<const WeightedGraph>(std::move(g));
  return copy;
}

std::vector<VertexId> window_ball(const KlausSparsePresentation& p, std::size_t placement,
                                  std::size_t r) {
  return ball(*p.window, p.placements.at(placement).center, r);
}

std::optional<RootedEmbedding> pattern_embedding(const KlausSparsePresentation& p,
                                                 std::size_t placement,
                                                 const EmbeddingOptions& opts) {
  const auto& pl = p.placements.at(placement);
  auto src = induced(*p.window, window_ball(p, placement, pl.r_ext));
  auto tgt = materialize(p.localization(pl.k), pl.r_ext + 2);
  return find_rooted_embedding(src, pl.center, tgt.graph, tgt.root, opts);
}

KlausSparsePresentation assemble_starlike(const std::map<std::size_t, GraphGenerator>& localizations,
                                          const std::vector<PlacementPlan>& plan,
                                          std::size_t window_radius) {
  if (window_radius == 0) throw Error(ErrorCode::BadParameter, "window radius must be positive");
  validate_common(localizations, plan, 1);
  const auto W = static_cast<std::int64_t>(window_radius);
  for (std::size_t a = 0; a < plan.size(); ++a) {
    const auto pos = plan[a].position[0];
    if (a > 0 && pos <= plan[a - 1].position[0])
      throw Error(ErrorCode::BadParameter, "positions must be strictly increasing");
    if (std::llabs(pos) + static_cast<std::int64_t>(plan[a].r_ext) > W)
      throw Error(ErrorCode::PatternExceedsWindow, "placement " + std::to_string(a));
    const auto& fam = localizations.at(plan[a].k).family;
    if (fam != "line" && fam != "three-star")
      throw Error(ErrorCode::BadParameter, "star-like windows cannot graft '" + fam + "'");
  }

  constexpr std::uint64_t kArm = 1ULL << 62;
  KeyedBuilder b;
  for (std::int64_t x = -W; x <= W; ++x) b.vertex(labels::zigzag(x), 1.0);
  for (std::int64_t x = -W; x < W; ++x) b.edge(labels::zigzag(x), labels::zigzag(x + 1), 1.0);
  b.exterior(labels::zigzag(-W), 1.0);
  b.exterior(labels::zigzag(W), 1.0);
  for (std::size_t a = 0; a < plan.size(); ++a) {
    const auto& pl = plan[a];
    const auto& loc = localizations.at(pl.k);
    const auto at = labels::zigzag(pl.position[0]);
    if (loc.family == "line") {
      b.vertex(at, loc.params.at(0));
    } else {
      std::uint64_t prev = at;
      for (std::size_t d = 1; d <= pl.r_int; ++d) {
        const std::uint64_t key = kArm | (static_cast<std::uint64_t>(a) << 32) | d;
        b.vertex(key, 1.0);
        b.edge(prev, key, 1.0);
        prev = key;
      }
    }
  }

  std::unordered_map<std::uint64_t, VertexId> label;
  KlausSparsePresentation p;
  p.window = std::make_shared<const WeightedGraph>(b.finalize(labels::zigzag(0), label));
  p.medium = gen_line(1.0);
  p.localizations = localizations;
  p.window_radius = window_radius;
  p.base = label.at(labels::zigzag(0));
  for (const auto& pl : plan)
    p.placements.push_back(
        {pl.i, pl.k, pl.position, label.at(labels::zigzag(pl.position[0])), pl.r_int, pl.r_ext});
  require_disjoint(p);
  require_pattern_inclusion(p);
  return p;
}

KlausSparsePresentation assemble_z2like(const std::map<std::size_t, GraphGenerator>& localizations,
                                        const std::vector<PlacementPlan>& plan,
                                        std::size_t window_radius) {
  if (window_radius == 0) throw Error(ErrorCode::BadParameter, "window radius must be positive");
  validate_common(localizations, plan, 2);
  const auto W = static_cast<std::int64_t>(window_radius);
  for (std::size_t a = 0; a < plan.size(); ++a) {
    const auto& pl = plan[a];
    if (localizations.at(pl.k).family != "z2-apex")
      throw Error(ErrorCode::BadParameter, "z2-like windows take z2-apex localizations");
    const auto l1 = std::llabs(pl.position[0]) + std::llabs(pl.position[1]);
    if (l1 + static_cast<std::int64_t>(pl.r_ext) > W)
      throw Error(ErrorCode::PatternExceedsWindow, "placement " + std::to_string(a));
  }

  auto grid = materialize(gen_z2(), window_radius);
  KeyedBuilder b;
  for (std::size_t i = 0; i < grid.graph.size(); ++i) {
    const auto key = raw(*grid.labels.image(grid.graph.id(i)));
    b.vertex(key, grid.graph.measure(i));
    if (grid.graph.exterior_weight(i) > 0.0) b.exterior(key, grid.graph.exterior_weight(i));
    for (const auto& nb : grid.graph.neighbors(i))
      if (nb.index > i) b.edge(key, raw(*grid.labels.image(grid.graph.id(nb.index))), nb.weight);
  }
  std::uint64_t next_apex = 0;
  for (const auto& pl : plan) {
    const auto x = pl.position[0];
    const auto y = pl.position[1];
    const int apexes = static_cast<int>(localizations.at(pl.k).params.at(0));
    for (int j = 0; j < apexes; ++j) {
      const auto key = raw(labels::apex(static_cast<int>(next_apex++)));
      b.vertex(key, 1.0);
      for (auto [dx, dy] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}})
        b.edge(key, raw(labels::z2(x + dx, y + dy)), 1.0);
    }
  }

  std::unordered_map<std::uint64_t, VertexId> label;
  KlausSparsePresentation p;
  p.window = std::make_shared<const WeightedGraph>(b.finalize(raw(labels::z2(0, 0)), label));
  p.medium = gen_z2();
  p.localizations = localizations;
  p.window_radius = window_radius;
  p.base = label.at(raw(labels::z2(0, 0)));
  for (const auto& pl : plan)
    p.placements.push_back({pl.i, pl.k, pl.position,
                            label.at(raw(labels::z2(pl.position[0], pl.position[1]))), pl.r_int,
                            pl.r_ext});
  require_disjoint(p);

  // L = {1}: the complement of the interior balls must stay connected.
  std::vector<bool> removed(p.window->size(), false);
  for (std::size_t a = 0; a < p.placements.size(); ++a)
    for (auto v : window_ball(p, a, p.placements[a].r_int - 1)) removed[p.window->index_of(v)] = true;
  std::vector<VertexId> rest;
  for (std::size_t i = 0; i < p.window->size(); ++i)
    if (!removed[i]) rest.push_back(p.window->id(i));
  if (connected_components(induced(*p.window, rest)).size() != 1)
    throw Error(ErrorCode::BadParameter, "complement of interior balls is not connected");

  require_pattern_inclusion(p);
  return p;
}

PresentationPlan read_plan(std::istream& in) {
  PresentationPlan plan;
  std::string text;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::ParseError, "plan line " + std::to_string(line_no) + ": " + msg);
  };
  bool have_window = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto num = [&](const std::string& s) {
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') fail("bad number '" + s + "'");
      return v;
    };
    auto integer = [&](const std::string& s) {
      char* end = nullptr;
      long long v = std::strtoll(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') fail("bad integer '" + s + "'");
      return static_cast<std::int64_t>(v);
    };
    auto count = [&](const std::string& s) {
      auto v = integer(s);
      if (v < 0) fail("negative value '" + s + "'");
      return static_cast<std::size_t>(v);
    };
    if (tok[0] == "medium") {
      if (tok.size() < 2) fail("medium needs a family");
      plan.medium_family = tok[1];
      for (std::size_t t = 2; t < tok.size(); ++t) plan.medium_params.push_back(num(tok[t]));
    } else if (tok[0] == "localization") {
      if (tok.size() < 3) fail("localization needs <k> <family>");
      std::vector<double> params;
      for (std::size_t t = 3; t < tok.size(); ++t) params.push_back(num(tok[t]));
      plan.localizations[count(tok[1])] = {tok[2], params};
    } else if (tok[0] == "place") {
      if (tok.size() < 6) fail("place needs <i> <k> <position...> <r_int> <r_ext>");
      PlacementPlan pl;
      pl.i = count(tok[1]);
      pl.k = count(tok[2]);
      for (std::size_t t = 3; t + 2 < tok.size(); ++t) pl.position.push_back(integer(tok[t]));
      pl.r_int = count(tok[tok.size() - 2]);
      pl.r_ext = count(tok[tok.size() - 1]);
      plan.placements.push_back(pl);
    } else if (tok[0] == "window") {
      if (tok.size() != 2) fail("window needs <radius>");
      plan.window_radius = count(tok[1]);
      have_window = true;
    } else {
      fail("unknown record '" + tok[0] + "'");
    }
  }
  if (plan.medium_family.empty()) throw Error(ErrorCode::ParseError, "plan has no medium");
  if (!have_window) throw Error(ErrorCode::ParseError, "plan has no window");
  return plan;
}

PresentationPlan read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_plan(in);
}

void write_plan(std::ostream& out, const PresentationPlan& plan) {
  out << "medium " << plan.medium_family;
  for (double v : plan.medium_params) out << ' ' << format_double(v);
  out << '\n';
  for (const auto& [k, loc] : plan.localizations) {
    out << "localization " << k << ' ' << loc.first;
    for (double v : loc.second) out << ' ' << format_double(v);
    out << '\n';
  }
  for (const auto& pl : plan.placements) {
    out << "place " << pl.i << ' ' << pl.k;
    for (auto c : pl.position) out << ' ' << c;
    out << ' ' << pl.r_int << ' ' << pl.r_ext << '\n';
  }
  out << "window " << plan.window_radius << '\n';
}

KlausSparsePresentation assemble(const PresentationPlan& plan) {
  std::map<std::size_t, GraphGenerator> locs;
  for (const auto& [k, loc] : plan.localizations) locs.emplace(k, make_generator(loc.first, loc.second));
  if (plan.medium_family == "line") {
    if (!plan.medium_params.empty() && plan.medium_params != std::vector<double>{1.0})
      throw Error(ErrorCode::BadParameter, "star-like medium must be the uniform line");
    return assemble_starlike(locs, plan.placements, plan.window_radius);
  }
  if (plan.medium_family == "z2") return assemble_z2like(locs, plan.placements, plan.window_radius);
  throw Error(ErrorCode::UnknownFamily, "medium " + plan.medium_family);
}

}  // namespace ksparse
