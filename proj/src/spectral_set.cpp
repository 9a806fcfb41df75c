#include "ksparse/spectral_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ksparse/error.hpp"

namespace ksparse {

namespace {

bool same_point(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), same_point), v.end());
}

// Runs of sorted values with consecutive gaps < tol.
void cluster(std::span<const double> sorted, double tol,
             std::vector<std::pair<double, double>>& intervals, std::vector<double>& points) {
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] - sorted[i - 1] < tol) continue;
    if (i - start >= 2)
      intervals.emplace_back(sorted[start], sorted[i - 1]);
    else if (i - start == 1)
      points.push_back(sorted[start]);
    start = i;
  }
}

void merge_intervals(std::vector<std::pair<double, double>>& iv, double join_gap) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& seg : iv) {
    if (!out.empty() && seg.first - out.back().second <= join_gap)
      out.back().second = std::max(out.back().second, seg.second);
    else
      out.push_back(seg);
  }
  iv = std::move(out);
}

// Aitken Δ² extrapolation of the last three points of a track whose tail
// gaps are all below tol and strictly decreasing.
std::optional<double> track_limit(const std::vector<double>& track, double tol) {
  if (track.size() < 3) return std::nullopt;
  std::vector<double> gaps;
  for (std::size_t j = 1; j < track.size(); ++j) gaps.push_back(std::abs(track[j] - track[j - 1]));
  std::size_t tail = 0;
  while (tail < gaps.size() && gaps[gaps.size() - 1 - tail] < tol) ++tail;
  if (tail < 2) return std::nullopt;
  for (std::size_t j = gaps.size() - tail + 1; j < gaps.size(); ++j)
    if (!(gaps[j] < gaps[j - 1])) return std::nullopt;
  const double p1 = track[track.size() - 3];
  const double p2 = track[track.size() - 2];
  const double p3 = track[track.size() - 1];
  const double d2 = (p3 - p2) - (p2 - p1);
  if (d2 == 0.0) return p3;
  return p3 - (p3 - p2) * (p3 - p2) / d2;
}

SpectralSet close_family(std::vector<std::pair<double, double>> intervals,
                         const std::vector<std::vector<double>>& isolated, double tol) {
  SpectralSet out;
  merge_intervals(intervals, tol);
  out.intervals = std::move(intervals);
  std::size_t depth = 0;
  for (const auto& iso : isolated) {
    depth = std::max(depth, iso.size());
    out.points.insert(out.points.end(), iso.begin(), iso.end());
  }
  for (std::size_t rank = 0; rank < depth; ++rank) {
    std::vector<double> track;
    for (const auto& iso : isolated)
      if (iso.size() > rank) track.push_back(iso[iso.size() - 1 - rank]);
    if (auto lim = track_limit(track, tol)) {
      bool attained = std::any_of(out.points.begin(), out.points.end(),
                                  [&](double p) { return same_point(p, *lim); });
      if (!attained) {
        out.points.push_back(*lim);
        out.accumulation.push_back(*lim);
      }
    }
  }
  out.normalize();
  return out;
}

// Exact distance from x to a normalized set.
double distance_to(double x, const SpectralSet& s) {
  double best = std::numeric_limits<double>::infinity();
  auto it = std::upper_bound(s.intervals.begin(), s.intervals.end(), x,
                             [](double v, const auto& seg) { return v < seg.first; });
  if (it != s.intervals.end()) best = std::min(best, it->first - x);
  if (it != s.intervals.begin()) {
    const auto& seg = *std::prev(it);
    best = std::min(best, x <= seg.second ? 0.0 : x - seg.second);
  }
  auto pt = std::lower_bound(s.points.begin(), s.points.end(), x);
  if (pt != s.points.end()) best = std::min(best, *pt - x);
  if (pt != s.points.begin()) best = std::min(best, x - *std::prev(pt));
  return best;
}

double directed(const SpectralSet& a, const SpectralSet& b, double step) {
  double d = 0.0;
  for (double p : a.points) d = std::max(d, distance_to(p, b));
  for (const auto& [lo, hi] : a.intervals) {
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step));
    for (std::size_t j = 0; j <= n; ++j) d = std::max(d, distance_to(lo + static_cast<double>(j) * step, b));
    d = std::max(d, distance_to(hi, b));
  }
  return d;
}

}  // namespace

bool SpectralSet::contains(double x, double tol) const {
  for (const auto& [lo, hi] : intervals)
    if (x >= lo - tol && x <= hi + tol) return true;
  for (double p : points)
    if (std::abs(x - p) <= tol) return true;
  return false;
}

SpectralSet SpectralSet::from_points(std::span<const double> pts) {
  SpectralSet s;
  s.points.assign(pts.begin(), pts.end());
  s.normalize();
  return s;
}

void SpectralSet::normalize() {
  merge_intervals(intervals, 0.0);
  sort_unique(points);
  std::erase_if(points, [&](double p) {
    return std::any_of(intervals.begin(), intervals.end(),
                       [&](const auto& seg) { return p >= seg.first && p <= seg.second; });
  });
  sort_unique(accumulation);
  std::erase_if(accumulation, [&](double a) {
    return std::none_of(points.begin(), points.end(), [&](double p) { return same_point(p, a); });
  });
}

SpectralSet reference_spectrum(const std::string& family, const std::vector<double>& params) {
  SpectralSet s;
  if (family == "line_uniform") {
    s.intervals = {{0.0, 4.0}};
  } else if (family == "line_weighted") {
    if (params.size() != 1) throw Error(ErrorCode::BadParameter, "line_weighted needs s");
    const double w = params[0];
    if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::BadParameter, "line_weighted needs s in (0,1)");
    s.intervals = {{0.0, 4.0}};
    s.points = {4.0 / (w * (2.0 - w))};
  } else if (family == "three_star") {
    s.intervals = {{0.0, 4.0}};
    s.points = {4.5};
  } else if (family == "z2") {
    s.intervals = {{0.0, 8.0}};
  } else {
    throw Error(ErrorCode::UnknownFamily, "no reference spectrum for '" + family + "'");
  }
  s.normalize();
  return s;
}

SpectralSet reference_spectrum_for(const std::string& family, const std::vector<double>& params) {
  if (family == "line") {
    const double m0 = params.empty() ? 1.0 : params[0];
    if (m0 == 1.0) return reference_spectrum("line_uniform");
    return reference_spectrum("line_weighted", {m0});
  }
  if (family == "three-star") return reference_spectrum("three_star");
  if (family == "z2") return reference_spectrum("z2");
  throw Error(ErrorCode::UnknownFamily, "no reference spectrum for '" + family + "'");
}

SpectralSet union_closure(std::span<const SpectrumApprox> spectra, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::BadParameter, "cluster_tol must be positive");
  std::vector<std::pair<double, double>> intervals;
  std::vector<std::vector<double>> isolated;
  for (const auto& s : spectra) {
    std::vector<double> sorted = s.eigenvalues;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> pts;
    cluster(sorted, cluster_tol, intervals, pts);
    isolated.push_back(std::move(pts));
  }
  return close_family(std::move(intervals), isolated, cluster_tol);
}

SpectralSet union_closure(std::span<const SpectralSet> sets, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::BadParameter, "cluster_tol must be positive");
  std::vector<std::pair<double, double>> intervals;
  std::vector<std::vector<double>> isolated;
  for (const auto& s : sets) {
    intervals.insert(intervals.end(), s.intervals.begin(), s.intervals.end());
    std::vector<double> pts = s.points;
    std::sort(pts.begin(), pts.end());
    isolated.push_back(std::move(pts));
  }
  auto out = close_family(std::move(intervals), isolated, cluster_tol);
  for (const auto& s : sets)
    out.accumulation.insert(out.accumulation.end(), s.accumulation.begin(), s.accumulation.end());
  out.normalize();
  return out;
}

double hausdorff(const SpectralSet& a, const SpectralSet& b, double grid_step) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "hausdorff of an empty set");
  if (!(grid_step > 0.0)) throw Error(ErrorCode::BadParameter, "grid step must be positive");
  SpectralSet na = a;
  SpectralSet nb = b;
  na.normalize();
  nb.normalize();
  return std::max(directed(na, nb, grid_step), directed(nb, na, grid_step));
}

double hausdorff(std::span<const double> a, const SpectralSet& b, double grid_step) {
  return hausdorff(SpectralSet::from_points(a), b, grid_step);
}

std::vector<bool> boundary_margin(const WeightedGraph& g, std::size_t margin) {
  if (!g.has_boundary_data())
    throw Error(ErrorCode::MissingBoundaryData, "boundary filter needs exterior weights");
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.is_boundary(i)) sources.push_back(i);
  auto dist = bfs_distances(g, sources, static_cast<int>(margin));
  std::vector<bool> region(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) region[i] = dist[i] >= 0;
  return region;
}

FilteredSpectrum filter_boundary_states(const WeightedGraph& g, const Eigensystem& es,
                                        std::size_t margin, double threshold) {
  const auto region = boundary_margin(g, margin);
  FilteredSpectrum out;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    double mass = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (region[i]) mass += es.vectors(static_cast<Eigen::Index>(i), j) * es.vectors(static_cast<Eigen::Index>(i), j);
    (mass >= threshold ? out.dropped : out.kept).push_back(es.values(j));
  }
  return out;
}

}  // namespace ksparse
