#pragma once

// Finite windows of Klaus-sparse graphs: a medium graph with pattern balls
// of the localizations at infinity placed along it.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ksparse/generators.hpp"

namespace ksparse {

struct PlacementPlan {
  std::size_t i = 0;  // index within family k
  std::size_t k = 0;  // localization index
  std::vector<std::int64_t> position;
  std::size_t r_int = 0;
  std::size_t r_ext = 0;
};

struct Placement {
  std::size_t i = 0;
  std::size_t k = 0;
  std::vector<std::int64_t> position;
  VertexId center{};
  std::size_t r_int = 0;
  std::size_t r_ext = 0;
};

struct KlausSparsePresentation {
  GraphGenerator medium;
  std::map<std::size_t, GraphGenerator> localizations;
  std::vector<Placement> placements;
  std::shared_ptr<const WeightedGraph> window;
  std::size_t window_radius = 0;
  /// Window vertex standing for the medium root; |x| is measured from here.
  VertexId base{};

  const GraphGenerator& localization(std::size_t k) const;
  /// Copy with a replaced window (same labels); used for mutation tests.
  KlausSparsePresentation with_window(WeightedGraph g) const;
};

/// Z backbone of radius `window_radius` with pattern balls grafted at the
/// planned positions. Supported localizations: line (weighted vertex on the
/// backbone) and three-star (third arm of length r_int hanging at the
/// position). Placement i of the plan gets index i within its family unless
/// the plan sets it.
KlausSparsePresentation assemble_starlike(const std::map<std::size_t, GraphGenerator>& localizations,
                                          const std::vector<PlacementPlan>& plan,
                                          std::size_t window_radius);

/// Z^2 window (l1 ball of radius `window_radius`) with apex patterns.
/// Localizations must be z2-apex generators; positions are (x, y).
KlausSparsePresentation assemble_z2like(const std::map<std::size_t, GraphGenerator>& localizations,
                                        const std::vector<PlacementPlan>& plan,
                                        std::size_t window_radius);

/// Rooted embedding of the window ball B(center, r_ext) into the
/// localization's (r_ext + 2)-ball, or nullopt.
std::optional<RootedEmbedding> pattern_embedding(const KlausSparsePresentation& p,
                                                 std::size_t placement,
                                                 const EmbeddingOptions& opts = {});

/// Vertices of the closed ball B(center, r) in the window, graph order.
std::vector<VertexId> window_ball(const KlausSparsePresentation& p, std::size_t placement,
                                  std::size_t r);

// Plan files:
//   medium <family> [params]
//   localization <k> <family> [params]
//   place <i> <k> <position...> <r_int> <r_ext>
//   window <radius>
struct PresentationPlan {
  std::string medium_family;
  std::vector<double> medium_params;
  std::map<std::size_t, std::pair<std::string, std::vector<double>>> localizations;
  std::vector<PlacementPlan> placements;
  std::size_t window_radius = 0;
};

PresentationPlan read_plan(std::istream& in);
PresentationPlan read_plan_file(const std::string& path);
void write_plan(std::ostream& out, const PresentationPlan& plan);
KlausSparsePresentation assemble(const PresentationPlan& plan);

}  // namespace ksparse
