#include "ksparse/weyl_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "ksparse/error.hpp"

namespace ksparse {

namespace {

std::size_t annulus_width(const Placement& pl) {
  if (pl.r_ext < pl.r_int + 2)
    throw Error(ErrorCode::DegenerateAnnulus,
                "r_ext - r_int < 2 at placement (" + std::to_string(pl.i) + "," + std::to_string(pl.k) + ")");
  return pl.r_ext - pl.r_int - 1;
}

Function random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Function f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(i) = {gauss(rng), gauss(rng)};
  return f;
}

double cosine_taper(double d, double radius) {
  const double inner = 0.75 * radius;
  if (d <= inner) return 1.0;
  if (d >= radius) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (d - inner) / (radius - inner)));
}

}  // namespace

std::vector<double> commutator_weight(const WeightedGraph& g, std::span<const double> chi) {
  if (chi.size() != g.size()) throw Error(ErrorCode::BadParameter, "chi has the wrong size");
  std::vector<double> G(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (const auto& nb : g.neighbors(i)) s += nb.weight * std::abs(chi[nb.index] - chi[i]);
    G[i] = s / g.measure(i);
  }
  return G;
}

CutoffProfile build_cutoff(const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  CutoffProfile out;
  out.chi.assign(g.size(), 0.0);
  out.F.assign(g.size(), 0.0);
  for (const auto& pl : p.placements) {
    const double w = static_cast<double>(annulus_width(pl));
    const auto d = bfs_distances(g, g.index_of(pl.center), static_cast<int>(pl.r_ext - 1));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (d[i] < 0) continue;
      const double out_of_interior = std::max(0.0, static_cast<double>(d[i]) - static_cast<double>(pl.r_int));
      out.chi[i] = std::max(out.chi[i], std::max(1.0 - out_of_interior / w, 0.0));
      if (d[i] >= static_cast<int>(pl.r_int)) out.F[i] = 1.0 / w;
    }
  }
  out.G = commutator_weight(g, out.chi);
  return out;
}

CommutatorCheck commutator_bound_check(const WeightedGraph& g, std::span<const double> chi,
                                       std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::BadParameter, "trials must be >= 1");
  const auto G = commutator_weight(g, chi);
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = chi[static_cast<std::size_t>(i)];
  std::mt19937_64 rng(seed);
  CommutatorCheck out;
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    Function f = random_complex(g.size(), rng);
    Function chi_f = c.cast<std::complex<double>>().cwiseProduct(f);
    Function comm = apply_laplacian(g, chi_f) - c.cast<std::complex<double>>().cwiseProduct(apply_laplacian(g, f));
    const double lhs = std::abs(inner_m(g, f, comm));
    double rhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rhs += g.measure(i) * G[i] * std::norm(f(i));
    const double nf = norm_m(g, f);
    out.max_excess = std::max(out.max_excess, lhs - rhs);
    out.scale = std::max(out.scale, nf * nf * (1.0 + norm_bound(g)));
  }
  out.ok = out.max_excess <= 1e-10 * out.scale;
  return out;
}

CompactnessDiagnostic compactness_diagnostic(const CutoffProfile& profile,
                                             const KlausSparsePresentation& p) {
  const auto& g = *p.window;
  CompactnessDiagnostic out;
  for (const auto& pl : p.placements) {
    const double w = static_cast<double>(annulus_width(pl));
    const auto d = bfs_distances(g, g.index_of(pl.center), static_cast<int>(pl.r_ext - 1));
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (d[i] >= static_cast<int>(pl.r_int)) sup = std::max(sup, profile.G[i]);
    const double expected = p.medium.sup_degree / w;
    out.sups.push_back(sup);
    out.expected.push_back(expected);
    if (std::abs(sup - expected) > 1e-12 * expected) out.matches_formula = false;
  }
  for (std::size_t a = 1; a < out.sups.size(); ++a)
    if (!(out.sups[a] < out.sups[a - 1])) out.decreasing = false;
  return out;
}

nlohmann::json WeylCertificate::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& [id, z] : vector) v.push_back({raw(id), z.real(), z.imag()});
  return {{"lambda", lambda},
          {"residual", residual},
          {"support_center", raw(support_center)},
          {"support_radius", support_radius},
          {"vector", v}};
}

double weyl_residual(const WeightedGraph& g, const std::map<VertexId, std::complex<double>>& phi,
                     double lambda) {
  Function f = Function::Zero(static_cast<Eigen::Index>(g.size()));
  for (const auto& [v, z] : phi) f(static_cast<Eigen::Index>(g.index_of(v))) = z;
  const double nf = norm_m(g, f);
  if (!(nf > 0.0)) throw Error(ErrorCode::BadParameter, "certificate vector is zero");
  Function r = apply_laplacian(g, f) - lambda * f;
  // cut edges carry the zero extension of f
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.exterior_weight(i) > 0.0) r(i) += g.exterior_weight(i) * f(i) / g.measure(i);
  return norm_m(g, r) / nf;
}

WeylCertificate eigvec_certificate(const GraphGenerator& gen, double target_lambda,
                                   std::size_t radius, const SpectralOptions& opts) {
  if (radius == 0) throw Error(ErrorCode::BadParameter, "certificate radius must be positive");
  auto b = materialize(gen, radius);
  auto host = std::make_shared<const WeightedGraph>(std::move(b.graph));
  const auto& g = *host;
  const auto es = eigensystem(g, Boundary::neumann, opts);

  Eigen::Index pick = 0;
  for (Eigen::Index j = 1; j < es.values.size(); ++j) {
    const double dj = std::abs(es.values(j) - target_lambda);
    const double db = std::abs(es.values(pick) - target_lambda);
    if (dj <= db) pick = j;  // ascending order: ties go to the larger value
  }
  Function u = eigenfunction(g, es, static_cast<std::size_t>(pick));
  Eigen::Index big = 0;
  u.cwiseAbs().maxCoeff(&big);
  if (u(big).real() < 0.0) u = -u;

  const auto root = g.index_of(b.root);
  const auto d = bfs_distances(g, root);
  WeylCertificate cert;
  cert.lambda = target_lambda;
  cert.support_center = b.root;
  cert.support_radius = radius - 1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto z = cosine_taper(static_cast<double>(d[i]), static_cast<double>(radius)) * u(i);
    if (z != 0.0) cert.vector.emplace(g.id(i), z);
  }
  cert.residual = weyl_residual(g, cert.vector, target_lambda);
  cert.host = std::move(host);
  return cert;
}

WeylCertificate transplant(const WeylCertificate& cert, const RootedEmbedding& emb,
                           std::shared_ptr<const WeightedGraph> target) {
  if (!cert.host || !target) throw Error(ErrorCode::BadParameter, "certificate without graphs");
  const auto& h = *cert.host;
  const auto& t = *target;
  const std::size_t s = cert.support_radius;
  const auto d = bfs_distances(h, h.index_of(cert.support_center), static_cast<int>(s + 1));
  auto violation = [&](VertexId x, const std::string& why) {
    return Error(ErrorCode::MarginViolation, "host vertex " + std::to_string(raw(x)) + ": " + why);
  };
  auto image_index = [&](VertexId x) {
    auto y = emb.image(x);
    if (!y) throw violation(x, "outside the embedding domain");
    auto ti = t.find(*y);
    if (!ti) throw violation(x, "image not in target");
    return *ti;
  };
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (d[i] < 0) continue;
    const auto x = h.id(i);
    const auto ti = image_index(x);
    if (!nearly_equal(h.measure(i), t.measure(ti), 1e-12)) throw violation(x, "measure differs");
    if (d[i] > static_cast<int>(s)) continue;
    if (h.exterior_weight(i) > 0.0 || t.exterior_weight(ti) > 0.0) throw violation(x, "touches a boundary");
    if (h.neighbors(i).size() != t.neighbors(ti).size()) throw violation(x, "neighbourhoods differ");
    for (const auto& nb : h.neighbors(i))
      if (!nearly_equal(nb.weight, t.weight(ti, image_index(h.id(nb.index))), 1e-12))
        throw violation(x, "edge weight differs");
  }
  for (const auto& [x, z] : cert.vector) {
    const auto i = h.index_of(x);
    if (d[i] < 0 || d[i] > static_cast<int>(s)) throw violation(x, "vector outside declared support");
  }

  WeylCertificate out;
  out.lambda = cert.lambda;
  out.support_radius = s;
  out.support_center = t.id(image_index(cert.support_center));
  for (const auto& [x, z] : cert.vector) out.vector.emplace(t.id(image_index(x)), z);
  out.residual = weyl_residual(t, out.vector, out.lambda);
  out.host = std::move(target);
  return out;
}

std::optional<RootedEmbedding> placement_embedding(const WeylCertificate& cert,
                                                   const KlausSparsePresentation& p,
                                                   std::size_t placement) {
  const auto& h = *cert.host;
  auto src = induced(h, ball(h, cert.support_center, cert.support_radius + 1));
  return find_rooted_embedding(src, cert.support_center, *p.window, p.placements.at(placement).center);
}

WeylCertificate medium_transplant(const WeylCertificate& cert, const KlausSparsePresentation& p,
                                  std::optional<std::size_t> placement,
                                  std::span<const VertexId> avoid) {
  const auto& h = *cert.host;
  const auto& g = *p.window;
  const std::size_t rho = cert.support_radius + 1;
  auto src = induced(h, ball(h, cert.support_center, rho));
  std::set<VertexId> banned(avoid.begin(), avoid.end());

  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    if (placement && *placement != a) continue;
    const auto& pl = p.placements[a];
    if (pl.r_ext < pl.r_int + 2 || pl.r_ext - pl.r_int - 2 < 2 * rho + 1) continue;
    const auto from_center = bfs_distances(g, g.index_of(pl.center), static_cast<int>(pl.r_ext - 1));
    std::vector<VertexId> annulus;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (from_center[i] > static_cast<int>(pl.r_int + 1) && !banned.contains(g.id(i)))
        annulus.push_back(g.id(i));
    if (annulus.empty()) continue;
    auto ring = induced(g, annulus);
    const double mid = 0.5 * static_cast<double>(pl.r_int + 2 + pl.r_ext - 1);
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < ring.size(); ++i)
      cand.emplace_back(std::abs(from_center[g.index_of(ring.id(i))] - mid), i);
    std::sort(cand.begin(), cand.end());
    for (const auto& [score, i] : cand) {
      auto emb = find_rooted_embedding(src, cert.support_center, ring, ring.id(i));
      if (!emb) continue;
      try {
        return transplant(cert, *emb, p.window);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MarginViolation) throw;
      }
    }
  }
  throw Error(ErrorCode::NoAnnulusFound,
              "no annulus admits the medium ball of radius " + std::to_string(rho));
}

std::vector<VertexId> support(const WeylCertificate& cert) {
  std::vector<VertexId> out;
  for (const auto& [v, z] : cert.vector) out.push_back(v);
  return out;
}

bool supports_disjoint(std::span<const WeylCertificate> certs) {
  std::set<VertexId> seen;
  for (const auto& c : certs)
    for (const auto& [v, z] : c.vector)
      if (!seen.insert(v).second) return false;
  return true;
}

std::vector<double> amar_phases(std::span<const Eigen::VectorXcd> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::EmptyInput, "no vectors");
  const auto n = vectors[0].size();
  std::vector<double> theta{0.0};
  Eigen::VectorXcd k = vectors[0];
  for (std::size_t j = 1; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) throw Error(ErrorCode::BadParameter, "vectors differ in dimension");
    // <f, k> linear in f: Σ f conj(k)
    const std::complex<double> ip = k.dot(vectors[j]);
    double th = ip == 0.0 ? 0.0 : -std::arg(ip);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    theta.push_back(th);
    k += std::polar(1.0, th) * vectors[j];
  }
  return theta;
}

BallDecomposition decompose_by_balls(const KlausSparsePresentation& p, const Function& psi) {
  const auto& g = *p.window;
  if (static_cast<std::size_t>(psi.size()) != g.size())
    throw Error(ErrorCode::BadParameter, "psi must live on the window");
  BallDecomposition out;
  out.remainder = psi;
  std::vector<bool> taken(g.size(), false);
  for (std::size_t a = 0; a < p.placements.size(); ++a) {
    const auto& pl = p.placements[a];
    Function part = Function::Zero(psi.size());
    if (pl.r_ext >= 2)
      for (auto v : window_ball(p, a, pl.r_ext - 2)) {
        const auto i = g.index_of(v);
        if (taken[i]) throw Error(ErrorCode::OverlappingBalls, "balls overlap at " + std::to_string(raw(v)));
        taken[i] = true;
        part(i) = psi(i);
        out.remainder(i) = 0.0;
      }
    out.norms.push_back(norm_m(g, part));
    out.parts.push_back(std::move(part));
  }
  out.remainder_norm = norm_m(g, out.remainder);

  const auto cut = build_cutoff(p);
  Function inside(psi.size()), outside(psi.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    inside(i) = cut.chi[i] * psi(i);
    outside(i) = (1.0 - cut.chi[i]) * psi(i);
  }
  out.chi_norm = norm_m(g, inside);
  out.complement_norm = norm_m(g, outside);
  return out;
}

}  // namespace ksparse
