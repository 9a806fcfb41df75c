#pragma once

// Procedural (infinite) graphs given by neighbor and measure oracles. Only
// finite balls around the root are ever materialized.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ksparse/embedding.hpp"
#include "ksparse/graph.hpp"

namespace ksparse {

struct GraphGenerator {
  using NeighborList = std::vector<std::pair<VertexId, double>>;

  std::string name;
  std::string family;
  std::vector<double> params;
  VertexId root{};
  std::function<NeighborList(VertexId)> neighbors;
  std::function<double(VertexId)> measure;
  /// sup_x deg(x) over the whole infinite graph (infinite if unbounded).
  double sup_degree = 0.0;
  /// Optional closed-form sphere sizes around the root, for radii that are
  /// too large to materialize.
  std::function<std::vector<std::uint64_t>(std::size_t r_max)> sphere_census;
};

struct MaterializedBall {
  WeightedGraph graph;
  /// Ball label -> generator label; roots correspond.
  RootedEmbedding labels;
  VertexId root{};
};

/// Induced ball [B(root, r)], labeled 0..n-1 in BFS order from the root
/// (neighbors visited in increasing generator label). Weights to vertices
/// at distance r+1 are recorded as exterior (Dirichlet) weights.
MaterializedBall materialize(const GraphGenerator& gen, std::size_t r);

/// Sphere sizes around the root: census oracle when present, BFS otherwise.
GrowthProfile growth_profile(const GraphGenerator& gen, std::size_t r_max);

/// Z with unit edges, measure 1 except m(0) = m0. Root 0.
GraphGenerator gen_line(double m0 = 1.0);
/// Center joined to three unit-weight rays, m = 1. Root = center.
GraphGenerator gen_three_star();
/// Z^2 with unit edges and m = 1. Root (0,0).
GraphGenerator gen_z2();
/// Z^2 plus `num_apexes` (1 or 2) apex vertices, each joined to the four
/// corners of the unit face with lower-left corner (0,0).
GraphGenerator gen_z2_with_apexes(int num_apexes);
/// Antitree: sphere S_n has (n+1)! vertices, complete bipartite joins
/// between consecutive spheres, unit weights, m = 1.
GraphGenerator gen_antitree();
/// Antitree with a Z ray glued at its root.
GraphGenerator gen_antitree_glued_line();

/// Lookup by family tag: line [m0], three-star, z2, z2-apex [n], antitree,
/// antitree-z. Throws UnknownFamily / BadParameter.
GraphGenerator make_generator(const std::string& family, const std::vector<double>& params);

/// Label encodings used by the generators.
namespace labels {
std::uint64_t zigzag(std::int64_t z);
std::int64_t unzigzag(std::uint64_t u);
VertexId line(std::int64_t x);
VertexId z2(std::int64_t x, std::int64_t y);
std::pair<std::int64_t, std::int64_t> z2_coords(VertexId v);
VertexId apex(int j);
bool is_apex(VertexId v);
}  // namespace labels

}  // namespace ksparse
