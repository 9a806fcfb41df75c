#include "ksparse/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "ksparse/error.hpp"

namespace ksparse {

namespace labels {

std::uint64_t zigzag(std::int64_t z) {
  return z >= 0 ? 2 * static_cast<std::uint64_t>(z) : 2 * static_cast<std::uint64_t>(-z) - 1;
}

std::int64_t unzigzag(std::uint64_t u) {
  return (u & 1) ? -static_cast<std::int64_t>((u + 1) / 2) : static_cast<std::int64_t>(u / 2);
}

VertexId line(std::int64_t x) { return vid(zigzag(x)); }

constexpr std::uint64_t kApexBit = 1ULL << 63;

VertexId z2(std::int64_t x, std::int64_t y) { return vid((zigzag(x) << 31) | zigzag(y)); }

std::pair<std::int64_t, std::int64_t> z2_coords(VertexId v) {
  const auto u = raw(v);
  return {unzigzag(u >> 31), unzigzag(u & ((1ULL << 31) - 1))};
}

VertexId apex(int j) { return vid(kApexBit | static_cast<std::uint64_t>(j)); }
bool is_apex(VertexId v) { return (raw(v) & kApexBit) != 0; }

}  // namespace labels

MaterializedBall materialize(const GraphGenerator& gen, std::size_t r) {
  std::vector<VertexId> order{gen.root};
  std::vector<std::size_t> depth{0};
  std::unordered_map<VertexId, std::size_t> index{{gen.root, 0}};
  std::vector<GraphGenerator::NeighborList> nbrs;

  for (std::size_t head = 0; head < order.size(); ++head) {
    auto list = gen.neighbors(order[head]);
    std::sort(list.begin(), list.end(),
              [](const auto& a, const auto& b) { return raw(a.first) < raw(b.first); });
    if (depth[head] < r) {
      for (const auto& [v, w] : list) {
        if (index.emplace(v, order.size()).second) {
          order.push_back(v);
          depth.push_back(depth[head] + 1);
        }
      }
    }
    nbrs.push_back(std::move(list));
  }

  WeightedGraph::Parts parts;
  const std::size_t n = order.size();
  parts.has_boundary = true;
  parts.adj.resize(n);
  parts.exterior.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    parts.ids.push_back(vid(i));
    parts.measure.push_back(gen.measure(order[i]));
    for (const auto& [v, w] : nbrs[i]) {
      auto it = index.find(v);
      if (it != index.end())
        parts.adj[i].push_back({it->second, w});
      else
        parts.exterior[i] += w;
    }
  }

  MaterializedBall out;
  out.graph = WeightedGraph::from_parts(std::move(parts));
  out.root = vid(0);
  out.labels.source_root = vid(0);
  out.labels.target_root = gen.root;
  for (std::size_t i = 0; i < n; ++i) out.labels.mapping.emplace(vid(i), order[i]);
  return out;
}

GrowthProfile growth_profile(const GraphGenerator& gen, std::size_t r_max) {
  if (gen.sphere_census) {
    GrowthProfile p;
    p.base = gen.root;
    p.sphere_sizes = gen.sphere_census(r_max);
    return p;
  }
  auto ball = materialize(gen, r_max);
  auto p = growth_profile(ball.graph, ball.root, r_max);
  p.base = gen.root;
  return p;
}

GraphGenerator gen_line(double m0) {
  if (!(m0 > 0.0) || !std::isfinite(m0))
    throw Error(ErrorCode::NonpositiveParameter, "line measure m0 must be positive");
  GraphGenerator g;
  g.name = m0 == 1.0 ? "line" : "line(m0=" + std::to_string(m0) + ")";
  g.family = "line";
  g.params = {m0};
  g.root = labels::line(0);
  g.neighbors = [](VertexId v) {
    auto x = labels::unzigzag(raw(v));
    return GraphGenerator::NeighborList{{labels::line(x - 1), 1.0}, {labels::line(x + 1), 1.0}};
  };
  g.measure = [m0](VertexId v) { return raw(v) == 0 ? m0 : 1.0; };
  g.sup_degree = std::max(2.0, 2.0 / m0);
  return g;
}

GraphGenerator gen_three_star() {
  // center 0; arm a in {0,1,2} at depth d >= 1 is 1 + 3(d-1) + a
  GraphGenerator g;
  g.name = "three-star";
  g.family = "three-star";
  g.root = vid(0);
  g.neighbors = [](VertexId v) {
    const auto u = raw(v);
    if (u == 0) return GraphGenerator::NeighborList{{vid(1), 1.0}, {vid(2), 1.0}, {vid(3), 1.0}};
    const auto depth = (u - 1) / 3 + 1;
    const auto arm = (u - 1) % 3;
    const auto inner = depth == 1 ? 0 : 1 + 3 * (depth - 2) + arm;
    return GraphGenerator::NeighborList{{vid(inner), 1.0}, {vid(1 + 3 * depth + arm), 1.0}};
  };
  g.measure = [](VertexId) { return 1.0; };
  g.sup_degree = 3.0;
  return g;
}

namespace {

GraphGenerator z2_with(int num_apexes) {
  GraphGenerator g;
  g.family = num_apexes == 0 ? "z2" : "z2-apex";
  g.name = num_apexes == 0 ? "z2" : "z2-apex" + std::to_string(num_apexes);
  if (num_apexes > 0) g.params = {static_cast<double>(num_apexes)};
  g.root = labels::z2(0, 0);
  g.neighbors = [num_apexes](VertexId v) {
    GraphGenerator::NeighborList out;
    if (labels::is_apex(v)) {
      for (auto [x, y] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}})
        out.push_back({labels::z2(x, y), 1.0});
      return out;
    }
    auto [x, y] = labels::z2_coords(v);
    out = {{labels::z2(x + 1, y), 1.0},
           {labels::z2(x - 1, y), 1.0},
           {labels::z2(x, y + 1), 1.0},
           {labels::z2(x, y - 1), 1.0}};
    if ((x == 0 || x == 1) && (y == 0 || y == 1))
      for (int j = 0; j < num_apexes; ++j) out.push_back({labels::apex(j), 1.0});
    return out;
  };
  g.measure = [](VertexId) { return 1.0; };
  g.sup_degree = 4.0 + num_apexes;
  return g;
}

// Antitree labels: sphere n occupies [offset(n), offset(n) + (n+1)!).
constexpr std::size_t kMaxAntitreeLevel = 18;

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

std::uint64_t level_offset(std::size_t n) {
  std::uint64_t off = 0;
  for (std::size_t j = 0; j < n; ++j) off += factorial(j + 1);
  return off;
}

std::size_t level_of(std::uint64_t u) {
  std::size_t n = 0;
  std::uint64_t off = 0;
  while (u >= off + factorial(n + 1)) {
    off += factorial(n + 1);
    ++n;
  }
  return n;
}

void append_level(GraphGenerator::NeighborList& out, std::size_t n) {
  if (n > kMaxAntitreeLevel) throw Error(ErrorCode::BadParameter, "antitree level too deep");
  const auto off = level_offset(n);
  const auto size = factorial(n + 1);
  for (std::uint64_t i = 0; i < size; ++i) out.push_back({vid(off + i), 1.0});
}

std::vector<std::uint64_t> antitree_census(std::size_t r_max, bool with_ray) {
  if (r_max > kMaxAntitreeLevel) throw Error(ErrorCode::BadParameter, "antitree census radius");
  std::vector<std::uint64_t> sizes;
  for (std::size_t n = 0; n <= r_max; ++n) sizes.push_back(factorial(n + 1) + (with_ray && n > 0));
  return sizes;
}

constexpr std::uint64_t kRayBit = 1ULL << 63;

}  // namespace

GraphGenerator gen_z2() { return z2_with(0); }

GraphGenerator gen_z2_with_apexes(int num_apexes) {
  if (num_apexes != 1 && num_apexes != 2)
    throw Error(ErrorCode::BadParameter, "num_apexes must be 1 or 2");
  return z2_with(num_apexes);
}

GraphGenerator gen_antitree() {
  GraphGenerator g;
  g.name = "antitree";
  g.family = "antitree";
  g.root = vid(0);
  g.neighbors = [](VertexId v) {
    GraphGenerator::NeighborList out;
    const auto n = level_of(raw(v));
    if (n > 0) append_level(out, n - 1);
    append_level(out, n + 1);
    return out;
  };
  g.measure = [](VertexId) { return 1.0; };
  g.sup_degree = std::numeric_limits<double>::infinity();
  g.sphere_census = [](std::size_t r_max) { return antitree_census(r_max, false); };
  return g;
}

GraphGenerator gen_antitree_glued_line() {
  GraphGenerator g = gen_antitree();
  g.name = "antitree-z";
  g.family = "antitree-z";
  auto tree = g.neighbors;
  g.neighbors = [tree](VertexId v) {
    const auto u = raw(v);
    if (u & kRayBit) {
      const auto x = u & ~kRayBit;
      VertexId inner = x == 1 ? vid(0) : vid(kRayBit | (x - 1));
      return GraphGenerator::NeighborList{{inner, 1.0}, {vid(kRayBit | (x + 1)), 1.0}};
    }
    auto out = tree(v);
    if (u == 0) out.push_back({vid(kRayBit | 1), 1.0});
    return out;
  };
  g.sphere_census = [](std::size_t r_max) { return antitree_census(r_max, true); };
  return g;
}

GraphGenerator make_generator(const std::string& family, const std::vector<double>& params) {
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      throw Error(ErrorCode::BadParameter, "wrong parameter count for " + family);
  };
  if (family == "line") {
    want(0, 1);
    return gen_line(params.empty() ? 1.0 : params[0]);
  }
  if (family == "three-star") {
    want(0, 0);
    return gen_three_star();
  }
  if (family == "z2") {
    want(0, 0);
    return gen_z2();
  }
  if (family == "z2-apex") {
    want(0, 1);
    const double n = params.empty() ? 1.0 : params[0];
    if (n != 1.0 && n != 2.0) throw Error(ErrorCode::BadParameter, "num_apexes must be 1 or 2");
    return gen_z2_with_apexes(static_cast<int>(n));
  }
  if (family == "antitree") {
    want(0, 0);
    return gen_antitree();
  }
  if (family == "antitree-z") {
    want(0, 0);
    return gen_antitree_glued_line();
  }
  throw Error(ErrorCode::UnknownFamily, family);
}

}  // namespace ksparse
