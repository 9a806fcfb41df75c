#pragma once

// Finite weighted graphs (V, E, m): symmetric nonnegative conductances, no
// loops, strictly positive vertex measure. Graphs are immutable once built.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ksparse {

/// Opaque vertex label, stable within one graph.
enum class VertexId : std::uint64_t {};

constexpr VertexId vid(std::uint64_t raw) { return VertexId{raw}; }
constexpr std::uint64_t raw(VertexId v) { return static_cast<std::uint64_t>(v); }

struct Edge {
  VertexId a;
  VertexId b;
  double weight;
};

class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t index;
    double weight;
  };

  WeightedGraph() = default;

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const VertexId> vertices() const { return ids_; }
  VertexId id(std::size_t i) const { return ids_[i]; }
  bool contains(VertexId v) const { return index_.contains(v); }
  std::optional<std::size_t> find(VertexId v) const;
  /// Throws UnknownVertex.
  std::size_t index_of(VertexId v) const;

  double measure(std::size_t i) const { return measure_[i]; }
  std::span<const double> measures() const { return measure_; }

  /// Total conductance to vertices that were cut away when this graph was
  /// obtained by truncation. Used by the Dirichlet Laplacian.
  double exterior_weight(std::size_t i) const { return exterior_[i]; }
  bool has_boundary_data() const { return has_boundary_; }
  bool is_boundary(std::size_t i) const { return exterior_[i] > 0.0; }

  /// Neighbors sorted by index.
  std::span<const Neighbor> neighbors(std::size_t i) const { return adj_[i]; }
  /// Conductance between two indices, 0 when not adjacent.
  double weight(std::size_t i, std::size_t j) const;
  double weight_sum(std::size_t i) const;
  /// (1/m(x)) sum_y E(x,y)
  double degree(std::size_t i) const { return weight_sum(i) / measure_[i]; }

  struct Parts {
    std::vector<VertexId> ids;
    std::vector<double> measure;
    std::vector<double> exterior;
    std::vector<std::vector<Neighbor>> adj;
    bool has_boundary = false;
  };
  /// Internal constructor; validates invariants. Adjacency must be symmetric.
  static WeightedGraph from_parts(Parts parts);

  Parts to_parts() const;

  /// Same graph with vertices relabeled; `relabel` must be injective.
  WeightedGraph relabeled(const std::function<VertexId(VertexId)>& relabel) const;

 private:
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<double> measure_;
  std::vector<double> exterior_;
  std::vector<std::vector<Neighbor>> adj_;
  std::size_t num_edges_ = 0;
  bool has_boundary_ = false;
};

/// Builds a graph from an edge list and a measure over the declared vertex
/// set. Reversed duplicates collapse to one stored edge; zero weights are
/// dropped. Optional exterior weights attach Dirichlet boundary data.
WeightedGraph build_graph(std::span<const Edge> edges, const std::map<VertexId, double>& measure,
                          const std::map<VertexId, double>* exterior = nullptr);

double degree(const WeightedGraph& g, VertexId x);

/// Copy with the conductance between a and b set to w (0 removes the edge).
WeightedGraph with_edge_weight(const WeightedGraph& g, VertexId a, VertexId b, double w);

/// Copy with a new vertex of measure m joined to existing vertices.
WeightedGraph with_vertex(const WeightedGraph& g, VertexId v, double m,
                          std::span<const std::pair<VertexId, double>> edges);

/// Hop distance; nullopt means unreachable.
std::optional<std::size_t> distance(const WeightedGraph& g, VertexId x, VertexId y);

/// BFS hop distances from a set of source indices; -1 marks unreachable.
std::vector<int> bfs_distances(const WeightedGraph& g, std::span<const std::size_t> sources,
                               int max_depth = -1);
std::vector<int> bfs_distances(const WeightedGraph& g, std::size_t source, int max_depth = -1);

/// Closed ball, in the graph's vertex order.
std::vector<VertexId> ball(const WeightedGraph& g, VertexId x, std::size_t r);

/// Induced subgraph. Weights of dropped edges are added to the exterior
/// weight of the kept endpoint, so the result always carries boundary data.
WeightedGraph induced(const WeightedGraph& g, std::span<const VertexId> subset);

std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g);
bool is_connected(const WeightedGraph& g);

struct GrowthProfile {
  VertexId base{};
  std::vector<std::uint64_t> sphere_sizes;
};

GrowthProfile growth_profile(const WeightedGraph& g, VertexId base, std::size_t r_max);

/// Largest hop distance from x to a reachable vertex.
std::size_t eccentricity(const WeightedGraph& g, VertexId x);

}  // namespace ksparse
