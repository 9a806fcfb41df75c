#pragma once

// Finite-window checks of the Klaus-sparse conditions (a)-(e), the W(x)
// surrogate used for essential self-adjointness, and growth profiling.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "ksparse/generators.hpp"
#include "ksparse/presentation.hpp"

namespace ksparse {

enum class Status { pass, fail, diagnostic };

/// "pass", "fail", "asymptotic-diagnostic".
const char* to_string(Status s);

struct ConditionReport {
  std::string condition;  // a, b1, b2, c, d, e, growth
  Status status = Status::pass;
  nlohmann::json witness;  // null when there is nothing to show

  nlohmann::json to_json() const;
};

/// (a) interior radii and annulus widths diverge. Checkpoints are the split
/// points 1..n-1 of the enumeration order.
ConditionReport check_radii_trend(const KlausSparsePresentation& p);

/// (b), first inclusion: every window r_ext-ball embeds rooted into its
/// localization. Throws SizeCapExceeded for oversized balls.
ConditionReport check_pattern_inclusion(const KlausSparsePresentation& p,
                                        const EmbeddingOptions& opts = {});

/// (b), second inclusion at radius r: for each localization some interior
/// ball B(x, r_int - 1) contains a rooted copy of its r-ball.
ConditionReport check_reverse_inclusion(const KlausSparsePresentation& p, std::size_t r);

/// Connected components of the window minus the interior balls
/// B(x, r_int - 1), each sorted by window index.
std::vector<std::vector<VertexId>> outer_components(const KlausSparsePresentation& p);

/// (c) every outer component embeds into the medium graph; embeddability
/// is monotone along component size order.
ConditionReport check_components(const KlausSparsePresentation& p);

/// (d) exterior balls are pairwise disjoint.
ConditionReport check_disjointness(const KlausSparsePresentation& p);

/// (e) some annulus B(x, r_ext - 1) \ B(x, r_int + 1) contains a rooted copy
/// of the medium r-ball.
ConditionReport check_medium_window(const KlausSparsePresentation& p, std::size_t r);

struct WProfile {
  std::vector<double> W;  // by window index
  double sup = 0.0;
  bool support_in_components = true;
  bool bounded_by_medium_degree = true;
};

/// W(x) = (1/m(x)) Σ_y |E(x,y) - E#(x,y)| with E# = E on V# x V#, V# the
/// union of the exterior balls.
WProfile compute_W(const KlausSparsePresentation& p);

/// True when no window edge joins two different exterior balls, i.e. the
/// Laplacian of [V#] is block-diagonal under ball ordering. On failure the
/// offending edge goes to `witness`.
bool sharp_block_diagonal(const KlausSparsePresentation& p, nlohmann::json* witness = nullptr);

/// Sphere counts |S(x, r)| <= C gamma^r for r <= r_max, sampled over the
/// base point and every vertex at distance >= r_max from the boundary.
ConditionReport check_growth(const WeightedGraph& g, VertexId base, double gamma, double C,
                             std::size_t r_max);

/// Same bound on the spheres around a generator's root (census when
/// available). Fails at the first radius that breaks the bound.
ConditionReport check_growth(const GraphGenerator& gen, double gamma, double C, std::size_t r_max);

/// a, b1, b2(r), c, d, e(r).
std::vector<ConditionReport> check_all(const KlausSparsePresentation& p, std::size_t r);

}  // namespace ksparse
