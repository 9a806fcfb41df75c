#include "ksparse/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "ksparse/error.hpp"

namespace ksparse {

namespace {

std::string label(VertexId v) { return std::to_string(raw(v)); }

}  // namespace

std::optional<std::size_t> WeightedGraph::find(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightedGraph::index_of(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw Error(ErrorCode::UnknownVertex, "vertex " + label(v));
  return it->second;
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
  const auto& row = adj_[i];
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& n, std::size_t key) { return n.index < key; });
  return (it != row.end() && it->index == j) ? it->weight : 0.0;
}

double WeightedGraph::weight_sum(std::size_t i) const {
  double s = 0.0;
  for (const auto& n : adj_[i]) s += n.weight;
  return s;
}

WeightedGraph WeightedGraph::from_parts(Parts parts) {
  const std::size_t n = parts.ids.size();
  if (parts.measure.size() != n || parts.adj.size() != n)
    throw Error(ErrorCode::BadParameter, "inconsistent graph parts");
  if (parts.exterior.empty()) parts.exterior.assign(n, 0.0);

  WeightedGraph g;
  g.ids_ = std::move(parts.ids);
  g.measure_ = std::move(parts.measure);
  g.exterior_ = std::move(parts.exterior);
  g.adj_ = std::move(parts.adj);
  g.has_boundary_ = parts.has_boundary;
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.index_.emplace(g.ids_[i], i).second)
      throw Error(ErrorCode::BadParameter, "duplicate vertex " + label(g.ids_[i]));
    if (!(g.measure_[i] > 0.0) || !std::isfinite(g.measure_[i]))
      throw Error(ErrorCode::NonpositiveMeasure, "vertex " + label(g.ids_[i]));
    if (g.exterior_[i] < 0.0) throw Error(ErrorCode::NegativeWeight, "exterior weight");
  }
  std::size_t half_edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = g.adj_[i];
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& nb = row[k];
      if (nb.index >= n) throw Error(ErrorCode::UnknownVertex, "neighbor index");
      if (nb.index == i) throw Error(ErrorCode::LoopEdge, "vertex " + label(g.ids_[i]));
      if (nb.weight < 0.0) throw Error(ErrorCode::NegativeWeight, "edge weight");
      if (k > 0 && row[k - 1].index == nb.index)
        throw Error(ErrorCode::BadParameter, "duplicate adjacency entry");
    }
    half_edges += row.size();
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : g.adj_[i])
      if (g.weight(nb.index, i) != nb.weight)
        throw Error(ErrorCode::BadParameter, "asymmetric adjacency at " + label(g.ids_[i]));
  g.num_edges_ = half_edges / 2;
  return g;
}

WeightedGraph WeightedGraph::relabeled(const std::function<VertexId(VertexId)>& relabel) const {
  Parts parts;
  parts.ids.reserve(size());
  for (auto v : ids_) parts.ids.push_back(relabel(v));
  parts.measure = measure_;
  parts.exterior = exterior_;
  parts.adj = adj_;
  parts.has_boundary = has_boundary_;
  return from_parts(std::move(parts));
}

WeightedGraph::Parts WeightedGraph::to_parts() const {
  return {ids_, measure_, exterior_, adj_, has_boundary_};
}

namespace {

void set_half_edge(std::vector<WeightedGraph::Neighbor>& row, std::size_t j, double w) {
  auto it = std::find_if(row.begin(), row.end(), [&](const auto& nb) { return nb.index == j; });
  if (it != row.end()) {
    if (w == 0.0)
      row.erase(it);
    else
      it->weight = w;
  } else if (w != 0.0) {
    row.push_back({j, w});
  }
}

}  // namespace

WeightedGraph with_edge_weight(const WeightedGraph& g, VertexId a, VertexId b, double w) {
  const auto i = g.index_of(a);
  const auto j = g.index_of(b);
  if (i == j) throw Error(ErrorCode::LoopEdge, "vertex " + label(a));
  auto parts = g.to_parts();
  set_half_edge(parts.adj[i], j, w);
  set_half_edge(parts.adj[j], i, w);
  return WeightedGraph::from_parts(std::move(parts));
}

WeightedGraph with_vertex(const WeightedGraph& g, VertexId v, double m,
                          std::span<const std::pair<VertexId, double>> edges) {
  if (g.contains(v)) throw Error(ErrorCode::BadParameter, "vertex " + label(v) + " already present");
  auto parts = g.to_parts();
  const std::size_t n = parts.ids.size();
  parts.ids.push_back(v);
  parts.measure.push_back(m);
  parts.exterior.push_back(0.0);
  parts.adj.emplace_back();
  for (const auto& [u, w] : edges) {
    const auto j = g.index_of(u);
    set_half_edge(parts.adj[n], j, w);
    set_half_edge(parts.adj[j], n, w);
  }
  return WeightedGraph::from_parts(std::move(parts));
}

WeightedGraph build_graph(std::span<const Edge> edges, const std::map<VertexId, double>& measure,
                          const std::map<VertexId, double>* exterior) {
  WeightedGraph::Parts parts;
  std::unordered_map<VertexId, std::size_t> index;
  for (const auto& [v, mv] : measure) {
    if (!(mv > 0.0) || !std::isfinite(mv))
      throw Error(ErrorCode::NonpositiveMeasure, "vertex " + label(v));
    index.emplace(v, parts.ids.size());
    parts.ids.push_back(v);
    parts.measure.push_back(mv);
  }
  parts.adj.resize(parts.ids.size());
  parts.exterior.assign(parts.ids.size(), 0.0);

  // Unordered pair -> weight, so that reversed duplicates collapse.
  std::map<std::pair<std::size_t, std::size_t>, double> pairs;
  for (const auto& e : edges) {
    if (e.weight < 0.0 || !std::isfinite(e.weight))
      throw Error(ErrorCode::NegativeWeight, label(e.a) + "-" + label(e.b));
    if (e.a == e.b) {
      if (e.weight > 0.0) throw Error(ErrorCode::LoopEdge, "vertex " + label(e.a));
      continue;
    }
    auto ia = index.find(e.a);
    auto ib = index.find(e.b);
    if (ia == index.end()) throw Error(ErrorCode::UnknownVertex, "vertex " + label(e.a));
    if (ib == index.end()) throw Error(ErrorCode::UnknownVertex, "vertex " + label(e.b));
    auto key = std::minmax(ia->second, ib->second);
    auto [it, inserted] = pairs.emplace(std::pair{key.first, key.second}, e.weight);
    if (!inserted && it->second != e.weight)
      throw Error(ErrorCode::BadParameter,
                  "conflicting weights for edge " + label(e.a) + "-" + label(e.b));
  }
  for (const auto& [key, w] : pairs) {
    if (w == 0.0) continue;
    parts.adj[key.first].push_back({key.second, w});
    parts.adj[key.second].push_back({key.first, w});
  }
  if (exterior) {
    parts.has_boundary = true;
    for (const auto& [v, w] : *exterior) {
      auto it = index.find(v);
      if (it == index.end()) throw Error(ErrorCode::UnknownVertex, "vertex " + label(v));
      parts.exterior[it->second] = w;
    }
  }
  return WeightedGraph::from_parts(std::move(parts));
}

double degree(const WeightedGraph& g, VertexId x) { return g.degree(g.index_of(x)); }

std::vector<int> bfs_distances(const WeightedGraph& g, std::span<const std::size_t> sources,
                               int max_depth) {
  std::vector<int> dist(g.size(), -1);
  std::deque<std::size_t> queue;
  for (auto s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.index] < 0) {
        dist[nb.index] = dist[u] + 1;
        queue.push_back(nb.index);
      }
    }
  }
  return dist;
}

std::vector<int> bfs_distances(const WeightedGraph& g, std::size_t source, int max_depth) {
  const std::size_t src[] = {source};
  return bfs_distances(g, src, max_depth);
}

std::optional<std::size_t> distance(const WeightedGraph& g, VertexId x, VertexId y) {
  auto ix = g.index_of(x);
  auto iy = g.index_of(y);
  auto dist = bfs_distances(g, ix);
  if (dist[iy] < 0) return std::nullopt;
  return static_cast<std::size_t>(dist[iy]);
}

std::vector<VertexId> ball(const WeightedGraph& g, VertexId x, std::size_t r) {
  auto dist = bfs_distances(g, g.index_of(x), static_cast<int>(r));
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (dist[i] >= 0) out.push_back(g.id(i));
  return out;
}

WeightedGraph induced(const WeightedGraph& g, std::span<const VertexId> subset) {
  std::vector<std::size_t> keep;
  keep.reserve(subset.size());
  for (auto v : subset) keep.push_back(g.index_of(v));
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::vector<std::ptrdiff_t> remap(g.size(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) remap[keep[k]] = static_cast<std::ptrdiff_t>(k);

  WeightedGraph::Parts parts;
  parts.has_boundary = true;
  parts.adj.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    auto i = keep[k];
    parts.ids.push_back(g.id(i));
    parts.measure.push_back(g.measure(i));
    double ext = g.exterior_weight(i);
    for (const auto& nb : g.neighbors(i)) {
      if (remap[nb.index] >= 0)
        parts.adj[k].push_back({static_cast<std::size_t>(remap[nb.index]), nb.weight});
      else
        ext += nb.weight;
    }
    parts.exterior.push_back(ext);
  }
  return WeightedGraph::from_parts(std::move(parts));
}

std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g) {
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<VertexId>> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = c;
    std::vector<std::size_t> members;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (const auto& nb : g.neighbors(u)) {
        if (comp[nb.index] < 0) {
          comp[nb.index] = c;
          stack.push_back(nb.index);
        }
      }
    }
    std::sort(members.begin(), members.end());
    for (auto u : members) out.back().push_back(g.id(u));
  }
  return out;
}

bool is_connected(const WeightedGraph& g) { return connected_components(g).size() <= 1; }

GrowthProfile growth_profile(const WeightedGraph& g, VertexId base, std::size_t r_max) {
  auto dist = bfs_distances(g, g.index_of(base), static_cast<int>(r_max));
  GrowthProfile p;
  p.base = base;
  p.sphere_sizes.assign(r_max + 1, 0);
  for (int d : dist)
    if (d >= 0) ++p.sphere_sizes[static_cast<std::size_t>(d)];
  return p;
}

std::size_t eccentricity(const WeightedGraph& g, VertexId x) {
  auto dist = bfs_distances(g, g.index_of(x));
  int e = 0;
  for (int d : dist) e = std::max(e, d);
  return static_cast<std::size_t>(e);
}

}  // namespace ksparse
