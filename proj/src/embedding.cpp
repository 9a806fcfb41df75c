#include "ksparse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ksparse/error.hpp"

namespace ksparse {

bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace {

struct Slot {
  std::size_t vertex;
  std::size_t anchor;       // earlier-ordered neighbor used to generate candidates
  std::size_t back_edges;   // number of earlier-ordered neighbors
};

class Search {
 public:
  Search(const WeightedGraph& src, const WeightedGraph& tgt, double tol)
      : src_(src), tgt_(tgt), tol_(tol), image_(src.size(), npos), owner_(tgt.size(), npos) {}

  bool run(std::size_t src_root, std::size_t tgt_root) {
    order(src_root);
    if (!compatible(src_root, tgt_root)) return false;
    assign(src_root, tgt_root);
    return extend(1);
  }

  const std::vector<std::size_t>& image() const { return image_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Most-constrained-first static order: each next vertex maximizes its
  // number of already-ordered neighbors.
  void order(std::size_t root) {
    const std::size_t n = src_.size();
    std::vector<bool> placed(n, false);
    std::vector<std::size_t> links(n, 0);
    std::vector<std::size_t> position(n, npos);
    slots_.push_back({root, npos, 0});
    placed[root] = true;
    position[root] = 0;
    for (const auto& nb : src_.neighbors(root)) ++links[nb.index];
    for (std::size_t step = 1; step < n; ++step) {
      std::size_t best = npos;
      for (std::size_t v = 0; v < n; ++v) {
        if (placed[v] || links[v] == 0) continue;
        if (best == npos || links[v] > links[best]) best = v;
      }
      if (best == npos) throw Error(ErrorCode::BadParameter, "embedding source is not connected");
      std::size_t anchor = npos;
      for (const auto& nb : src_.neighbors(best))
        if (placed[nb.index] && (anchor == npos || position[nb.index] < position[anchor]))
          anchor = nb.index;
      slots_.push_back({best, anchor, links[best]});
      placed[best] = true;
      position[best] = step;
      for (const auto& nb : src_.neighbors(best)) ++links[nb.index];
    }
  }

  bool compatible(std::size_t v, std::size_t c) const {
    if (!nearly_equal(src_.measure(v), tgt_.measure(c), tol_)) return false;
    return tgt_.neighbors(c).size() >= src_.neighbors(v).size();
  }

  // Every already-used target neighbor of c must be the image of a source
  // neighbor of v with equal weight, and all source back-edges must appear.
  bool consistent(const Slot& slot, std::size_t c) const {
    std::size_t matched = 0;
    for (const auto& nb : tgt_.neighbors(c)) {
      auto u = owner_[nb.index];
      if (u == npos) continue;
      double w = src_.weight(slot.vertex, u);
      if (w == 0.0 || !nearly_equal(w, nb.weight, tol_)) return false;
      ++matched;
    }
    return matched == slot.back_edges;
  }

  void assign(std::size_t v, std::size_t c) {
    image_[v] = c;
    owner_[c] = v;
  }
  void unassign(std::size_t v) {
    owner_[image_[v]] = npos;
    image_[v] = npos;
  }

  bool extend(std::size_t depth) {
    if (depth == slots_.size()) return true;
    const Slot& slot = slots_[depth];
    for (const auto& nb : tgt_.neighbors(image_[slot.anchor])) {
      const std::size_t c = nb.index;
      if (owner_[c] != npos) continue;
      if (!compatible(slot.vertex, c) || !consistent(slot, c)) continue;
      assign(slot.vertex, c);
      if (extend(depth + 1)) return true;
      unassign(slot.vertex);
    }
    return false;
  }

  const WeightedGraph& src_;
  const WeightedGraph& tgt_;
  double tol_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> image_;
  std::vector<std::size_t> owner_;
};

bool measure_multiset_fits(const WeightedGraph& src, const WeightedGraph& tgt, double tol) {
  std::vector<double> a(src.measures().begin(), src.measures().end());
  std::vector<double> b(tgt.measures().begin(), tgt.measures().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t j = 0;
  for (double x : a) {
    while (j < b.size() && b[j] < x && !nearly_equal(b[j], x, tol)) ++j;
    if (j == b.size() || !nearly_equal(b[j], x, tol)) return false;
    ++j;
  }
  return true;
}

}  // namespace

std::optional<RootedEmbedding> find_rooted_embedding(const WeightedGraph& src, VertexId src_root,
                                                     const WeightedGraph& tgt, VertexId tgt_root,
                                                     const EmbeddingOptions& opts) {
  if (src.size() > opts.vertex_cap)
    throw Error(ErrorCode::SizeCapExceeded, "embedding source has " + std::to_string(src.size()) +
                                                " vertices, cap " +
                                                std::to_string(opts.vertex_cap));
  const double tol = opts.ignore_weights ? std::numeric_limits<double>::infinity() : opts.tol;
  const auto sr = src.index_of(src_root);
  const auto tr = tgt.index_of(tgt_root);
  if (src.size() > tgt.size()) return std::nullopt;
  if (!measure_multiset_fits(src, tgt, tol)) return std::nullopt;

  Search search(src, tgt, tol);
  if (!search.run(sr, tr)) return std::nullopt;

  RootedEmbedding emb;
  emb.source_root = src_root;
  emb.target_root = tgt_root;
  for (std::size_t v = 0; v < src.size(); ++v)
    emb.mapping.emplace(src.id(v), tgt.id(search.image()[v]));
  return emb;
}

bool verify_embedding(const WeightedGraph& src, const WeightedGraph& tgt,
                      const RootedEmbedding& emb, double tol) {
  if (emb.image(emb.source_root) != emb.target_root) return false;
  std::vector<std::size_t> dom;
  std::vector<std::size_t> img;
  std::vector<bool> used(tgt.size(), false);
  for (const auto& [s, t] : emb.mapping) {
    auto si = src.find(s);
    auto ti = tgt.find(t);
    if (!si || !ti || used[*ti]) return false;
    used[*ti] = true;
    if (!nearly_equal(src.measure(*si), tgt.measure(*ti), tol)) return false;
    dom.push_back(*si);
    img.push_back(*ti);
  }
  for (std::size_t a = 0; a < dom.size(); ++a)
    for (std::size_t b = a + 1; b < dom.size(); ++b)
      if (!nearly_equal(src.weight(dom[a], dom[b]), tgt.weight(img[a], img[b]), tol)) return false;
  return true;
}

}  // namespace ksparse
