#pragma once

// Compact subsets of the real line built from closed intervals and isolated
// points, with the set operations used to compare truncation spectra against
// reference spectra.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ksparse/spectral.hpp"

namespace ksparse {

struct SpectralSet {
  std::vector<std::pair<double, double>> intervals;  // disjoint, sorted
  std::vector<double> points;                        // sorted, outside intervals
  /// Subset of `points` detected as limits of isolated eigenvalue sequences.
  std::vector<double> accumulation;

  bool empty() const { return intervals.empty() && points.empty(); }
  bool contains(double x, double tol = 0.0) const;

  static SpectralSet from_points(std::span<const double> pts);
  /// Sorts, merges overlapping intervals, drops points inside intervals and
  /// duplicate points.
  void normalize();
};

/// Closed-form spectra of the localizations: line_uniform -> [0,4];
/// line_weighted(s) -> [0,4] ∪ {4/(s(2-s))}, s in (0,1); three_star ->
/// [0,4] ∪ {9/2}; z2 -> [0,8].
SpectralSet reference_spectrum(const std::string& family, const std::vector<double>& params = {});

/// Reference spectrum for a generator, when one is known.
SpectralSet reference_spectrum_for(const std::string& family, const std::vector<double>& params);

/// Closed union of a family of spectra. Within each spectrum, runs of
/// eigenvalues with gaps < cluster_tol become intervals and the rest
/// isolated points. Isolated points are tracked across the family by rank
/// from the top; a track whose tail gaps are all < cluster_tol and strictly
/// decreasing is declared convergent and its Aitken Δ² limit (last three
/// points) joins the closure.
SpectralSet union_closure(std::span<const SpectrumApprox> spectra, double cluster_tol);
SpectralSet union_closure(std::span<const SpectralSet> sets, double cluster_tol);

/// Hausdorff distance between compact sets, intervals discretized with the
/// given grid step. Throws EmptySet.
double hausdorff(const SpectralSet& a, const SpectralSet& b, double grid_step = 1e-4);
double hausdorff(std::span<const double> a, const SpectralSet& b, double grid_step = 1e-4);

struct FilteredSpectrum {
  std::vector<double> kept;
  std::vector<double> dropped;
};

/// Drops eigenpairs whose l2_m mass within `margin` hops of the boundary
/// (vertices carrying exterior weight) is >= threshold.
FilteredSpectrum filter_boundary_states(const WeightedGraph& g, const Eigensystem& es,
                                        std::size_t margin, double threshold = 0.5);

/// Indicator of the boundary margin region used by the filter.
std::vector<bool> boundary_margin(const WeightedGraph& g, std::size_t margin);

}  // namespace ksparse
