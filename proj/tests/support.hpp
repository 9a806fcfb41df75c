#pragma once

#include <map>
#include <random>
#include <vector>

#include "ksparse/graph.hpp"
#include "ksparse/spectral.hpp"

namespace ksparse::testing {

/// Path 0-1-...-(n-1) with unit edges and the given measure (default 1).
inline WeightedGraph path(std::size_t n, std::vector<double> m = {}) {
  if (m.empty()) m.assign(n, 1.0);
  std::vector<Edge> edges;
  std::map<VertexId, double> measure;
  for (std::size_t i = 0; i < n; ++i) measure[vid(i)] = m[i];
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({vid(i), vid(i + 1), 1.0});
  return build_graph(edges, measure);
}

inline Function random_function(std::size_t n, std::mt19937_64& rng, bool complex = true) {
  std::normal_distribution<double> gauss;
  Function f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(i) = {gauss(rng), complex ? gauss(rng) : 0.0};
  return f;
}

}  // namespace ksparse::testing
