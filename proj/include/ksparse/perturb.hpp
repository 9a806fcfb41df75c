#pragma once

// Stability of the essential spectrum under perturbations of measure and
// weights that vanish at infinity, checked on a finite window.

#include <cstdint>
#include <functional>
#include <vector>

#include "ksparse/spectral.hpp"
#include "ksparse/spectral_set.hpp"

namespace ksparse {

struct PerturbationPair {
  WeightedGraph g;
  WeightedGraph g_tilde;
  double c_bound = 0.0;  // least c with E~ <= c E edgewise
  VertexId base{};
};

/// Validates identical vertex sets and computes c_bound = max E~/E (0/0 := 0).
/// Throws DominationFailure when E~ > 0 where E = 0.
PerturbationPair make_pair(WeightedGraph g, WeightedGraph g_tilde, VertexId base);

/// Copy of g with m(x) multiplied by factor(d(base, x)).
WeightedGraph scale_measure(const WeightedGraph& g, VertexId base,
                            const std::function<double(std::size_t)>& factor);

struct HypothesisReport {
  std::vector<double> measure_sups;  // per shell: sup |m/m~ - 1|
  std::vector<double> edge_sups;     // per shell: sup |E - E~| over edges leaving the shell
  bool measure_decreasing = true;    // non-increasing over the outer half
  bool edge_decreasing = true;
  double c_bound = 0.0;
  bool pass = false;
};

/// Shells 0..shells around the base. Throws BadParameter when the window
/// is smaller than `shells`.
HypothesisReport check_hypotheses(const PerturbationPair& pair, std::size_t shells);

/// Matrix of the transported operator sqrt(m~/m) Δ~ sqrt(m/m~) on l2(m) in
/// the symmetrized frame, assembled as the product
/// M^{1/2} D M~^{-1} L~ D^{-1} M^{-1/2} with D = diag sqrt(m~/m).
Eigen::MatrixXd transported_matrix(const PerturbationPair& pair, Boundary boundary = Boundary::neumann);

struct FDomination {
  std::vector<double> F;            // by vertex index
  double max_excess = 0.0;          // max over trials of |<f,(Δ - Δ~)f>_m| - <f,F f>_m
  double scale = 0.0;               // max over trials of ||f||^2 (1 + 2 sup deg)
  bool ok = true;                   // max_excess <= 1e-10 scale
  std::vector<double> shell_ratio;  // per shell: sup F/(1 + deg)
  bool decreasing = true;           // shell_ratio non-increasing over the outer half
};

/// F(x) = |deg(x) - deg~(x)| + (1/2m(x)) Σ_y (|E(x,y) - (m(x)/m~(x)) E~(x,y)|
///                                           + |E(x,y) - (m(y)/m~(y)) E~(x,y)|)
FDomination F_domination(const PerturbationPair& pair, std::size_t trials, std::uint64_t seed);

struct SpectraComparison {
  double raw = 0.0;       // Hausdorff distance of the full truncation spectra
  double filtered = 0.0;  // after dropping boundary-concentrated eigenpairs
  std::size_t kept_g = 0;
  std::size_t kept_g_tilde = 0;
};

/// Throws EmptySet when filtering removes every eigenvalue.
SpectraComparison compare_spectra(const PerturbationPair& pair, Boundary boundary,
                                  std::size_t margin, double threshold = 0.5);

}  // namespace ksparse
