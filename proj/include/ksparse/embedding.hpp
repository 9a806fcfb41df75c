#pragma once

// Rooted induced-subgraph embeddings (G1, x1) ⊂ (G2, x2): injective,
// root-preserving maps that preserve every edge weight (including absent
// edges) and every vertex measure.

#include <cstddef>
#include <map>
#include <optional>

#include "ksparse/graph.hpp"

namespace ksparse {

struct RootedEmbedding {
  VertexId source_root{};
  VertexId target_root{};
  std::map<VertexId, VertexId> mapping;

  std::optional<VertexId> image(VertexId v) const {
    auto it = mapping.find(v);
    if (it == mapping.end()) return std::nullopt;
    return it->second;
  }
};

struct EmbeddingOptions {
  std::size_t vertex_cap = 400;
  double tol = 1e-12;
  /// Match adjacency structure only; measures and weights are not compared.
  bool ignore_weights = false;
};

/// Exhaustive backtracking search. Returns nullopt when no embedding exists.
/// Throws SizeCapExceeded when src has more than `vertex_cap` vertices.
std::optional<RootedEmbedding> find_rooted_embedding(const WeightedGraph& src, VertexId src_root,
                                                     const WeightedGraph& tgt, VertexId tgt_root,
                                                     const EmbeddingOptions& opts = {});

/// Checks injectivity, root preservation, and weight/measure preservation
/// over all pairs of the domain.
bool verify_embedding(const WeightedGraph& src, const WeightedGraph& tgt,
                      const RootedEmbedding& emb, double tol = 1e-12);

bool nearly_equal(double a, double b, double tol);

}  // namespace ksparse
