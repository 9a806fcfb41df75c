#pragma once

// Cutoffs around pattern balls, commutator bounds, compactly supported
// approximate eigenfunctions and their transplantation along embeddings.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "ksparse/presentation.hpp"
#include "ksparse/spectral.hpp"

namespace ksparse {

/// Values indexed by window vertex index.
struct CutoffProfile {
  std::vector<double> chi;
  std::vector<double> G;
  std::vector<double> F;
};

/// chi(x) = max over placements of max(1 - d(x, B(c, r_int)) / (r_ext - r_int - 1), 0),
/// G(x) = (1/m(x)) Σ_y E(x,y) |chi(y) - chi(x)|, F = 1/(r_ext - r_int - 1) on
/// B(c, r_ext - 1) \ B(c, r_int - 1). Throws DegenerateAnnulus.
CutoffProfile build_cutoff(const KlausSparsePresentation& p);

/// G for an arbitrary real function chi on g.
std::vector<double> commutator_weight(const WeightedGraph& g, std::span<const double> chi);

struct CommutatorCheck {
  double max_excess = 0.0;  // max over trials of |<f,[Δ,chi]f>| - <f,G f>
  double scale = 0.0;       // max over trials of ||f||^2 (1 + 2 sup deg)
  bool ok = true;           // max_excess <= 1e-10 scale
};

/// Random complex f: |<f, [Δ, chi] f>_m| <= <f, G f>_m.
CommutatorCheck commutator_bound_check(const WeightedGraph& g, std::span<const double> chi,
                                       std::size_t trials, std::uint64_t seed);

struct CompactnessDiagnostic {
  std::vector<double> sups;      // sup of G over each placement's F-support
  std::vector<double> expected;  // sup_medium_deg / (r_ext - r_int - 1)
  bool matches_formula = true;
  bool decreasing = true;
};

CompactnessDiagnostic compactness_diagnostic(const CutoffProfile& profile,
                                             const KlausSparsePresentation& p);

struct WeylCertificate {
  double lambda = 0.0;
  std::map<VertexId, std::complex<double>> vector;  // nonzero entries
  double residual = 0.0;                            // ||(Δ - λ)φ||_m / ||φ||_m
  VertexId support_center{};
  std::size_t support_radius = 0;
  std::shared_ptr<const WeightedGraph> host;

  nlohmann::json to_json() const;
};

/// ||(Δ_g - λ)φ||_m / ||φ||_m for a finitely supported φ on g.
double weyl_residual(const WeightedGraph& g, const std::map<VertexId, std::complex<double>>& phi,
                     double lambda);

/// Eigenpair of the Neumann truncation B(root, radius) nearest target_lambda
/// (ties toward the larger eigenvalue), tapered by a cosine half-window over
/// the outer quarter of the radius so that it vanishes at distance radius.
/// The residual is measured against target_lambda.
WeylCertificate eigvec_certificate(const GraphGenerator& gen, double target_lambda,
                                   std::size_t radius, const SpectralOptions& opts = {});

/// Pushes the certificate forward along emb (host labels -> target labels).
/// Requires the host ball B(center, support_radius + 1) inside emb's domain
/// and exact neighbourhood correspondence on B(center, support_radius).
/// Throws MarginViolation.
WeylCertificate transplant(const WeylCertificate& cert, const RootedEmbedding& emb,
                           std::shared_ptr<const WeightedGraph> target);

/// Rooted embedding of the host ball B(center, support_radius + 1) of a
/// localization certificate into the window at a placement center.
std::optional<RootedEmbedding> placement_embedding(const WeylCertificate& cert,
                                                   const KlausSparsePresentation& p,
                                                   std::size_t placement);

/// Transplants a medium-graph certificate into some annulus
/// B(c, r_ext - 1) \ B(c, r_int + 1), optionally restricted to one
/// placement and avoiding the given window vertices. Throws NoAnnulusFound.
WeylCertificate medium_transplant(const WeylCertificate& cert, const KlausSparsePresentation& p,
                                  std::optional<std::size_t> placement = std::nullopt,
                                  std::span<const VertexId> avoid = {});

/// Support of the certificate's vector.
std::vector<VertexId> support(const WeylCertificate& cert);

/// True when the supports are pairwise disjoint.
bool supports_disjoint(std::span<const WeylCertificate> certs);

/// Greedy phases θ_j in [0, 2π) with ||Σ e^{iθ_j} f_j||^2 >= Σ ||f_j||^2.
/// Throws EmptyInput.
std::vector<double> amar_phases(std::span<const Eigen::VectorXcd> vectors);

struct BallDecomposition {
  std::vector<Function> parts;  // 1_{B(c, r_ext - 2)} psi, one per placement
  Function remainder;
  std::vector<double> norms;  // m-norms of parts
  double remainder_norm = 0.0;
  double chi_norm = 0.0;         // ||chi psi||_m
  double complement_norm = 0.0;  // ||(1 - chi) psi||_m
};

BallDecomposition decompose_by_balls(const KlausSparsePresentation& p, const Function& psi);

}  // namespace ksparse
