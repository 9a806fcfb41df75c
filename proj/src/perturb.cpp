#include "ksparse/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <random>

#include "ksparse/error.hpp"

namespace ksparse {

namespace {

// Non-increasing over indices >= n/2.
bool tail_non_increasing(const std::vector<double>& v) {
  for (std::size_t r = v.size() / 2 + 1; r < v.size(); ++r)
    if (v[r] > v[r - 1]) return false;
  return true;
}

std::size_t tilde_index(const PerturbationPair& p, std::size_t i) {
  return p.g_tilde.index_of(p.g.id(i));
}

}  // namespace

PerturbationPair make_pair(WeightedGraph g, WeightedGraph g_tilde, VertexId base) {
  if (g.size() != g_tilde.size())
    throw Error(ErrorCode::BadParameter, "graphs have different vertex sets");
  for (auto v : g.vertices())
    if (!g_tilde.contains(v))
      throw Error(ErrorCode::BadParameter, "vertex " + std::to_string(raw(v)) + " missing from g~");
  g.index_of(base);
  double c = 0.0;
  for (std::size_t j = 0; j < g_tilde.size(); ++j) {
    const auto i = g.index_of(g_tilde.id(j));
    for (const auto& nb : g_tilde.neighbors(j)) {
      const double e = g.weight(i, g.index_of(g_tilde.id(nb.index)));
      if (nb.weight > 0.0 && e == 0.0)
        throw Error(ErrorCode::DominationFailure,
                    "edge {" + std::to_string(raw(g_tilde.id(j))) + "," +
                        std::to_string(raw(g_tilde.id(nb.index))) + "} present only in g~");
      c = std::max(c, nb.weight / e);
    }
  }
  return {std::move(g), std::move(g_tilde), c, base};
}

WeightedGraph scale_measure(const WeightedGraph& g, VertexId base,
                            const std::function<double(std::size_t)>& factor) {
  const auto d = bfs_distances(g, g.index_of(base));
  auto parts = g.to_parts();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (d[i] < 0) throw Error(ErrorCode::BadParameter, "graph is not connected to the base");
    parts.measure[i] *= factor(static_cast<std::size_t>(d[i]));
  }
  return WeightedGraph::from_parts(std::move(parts));
}

HypothesisReport check_hypotheses(const PerturbationPair& pair, std::size_t shells) {
  const auto& g = pair.g;
  const auto& gt = pair.g_tilde;
  const auto d = bfs_distances(g, g.index_of(pair.base));
  const int ecc = *std::max_element(d.begin(), d.end());
  if (static_cast<std::size_t>(ecc) < shells)
    throw Error(ErrorCode::BadParameter, "window radius " + std::to_string(ecc) + " < shells");
  HypothesisReport rep;
  rep.measure_sups.assign(shells + 1, 0.0);
  rep.edge_sups.assign(shells + 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (d[i] < 0 || d[i] > static_cast<int>(shells)) continue;
    const auto r = static_cast<std::size_t>(d[i]);
    const auto j = tilde_index(pair, i);
    rep.measure_sups[r] = std::max(rep.measure_sups[r], std::abs(g.measure(i) / gt.measure(j) - 1.0));
    // union of both neighbourhoods
    for (const auto& nb : g.neighbors(i)) {
      const double et = gt.weight(j, gt.index_of(g.id(nb.index)));
      rep.edge_sups[r] = std::max(rep.edge_sups[r], std::abs(nb.weight - et));
    }
    for (const auto& nb : gt.neighbors(j)) {
      const double e = g.weight(i, g.index_of(gt.id(nb.index)));
      rep.edge_sups[r] = std::max(rep.edge_sups[r], std::abs(e - nb.weight));
    }
  }
  rep.measure_decreasing = tail_non_increasing(rep.measure_sups);
  rep.edge_decreasing = tail_non_increasing(rep.edge_sups);
  rep.c_bound = pair.c_bound;
  rep.pass = rep.measure_decreasing && rep.edge_decreasing;
  return rep;
}

Eigen::MatrixXd transported_matrix(const PerturbationPair& pair, Boundary boundary) {
  const auto& g = pair.g;
  const auto& gt = pair.g_tilde;
  const auto n = static_cast<Eigen::Index>(g.size());
  if (boundary == Boundary::dirichlet && !gt.has_boundary_data())
    throw Error(ErrorCode::MissingBoundaryData, "dirichlet needs exterior weights on g~");
  // L~ in g's index order
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd m(n), mt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = tilde_index(pair, static_cast<std::size_t>(i));
    m(i) = g.measure(static_cast<std::size_t>(i));
    mt(i) = gt.measure(j);
    double diag = gt.weight_sum(j);
    if (boundary == Boundary::dirichlet) diag += gt.exterior_weight(j);
    L(i, i) = diag;
    for (const auto& nb : gt.neighbors(j)) L(i, static_cast<Eigen::Index>(g.index_of(gt.id(nb.index)))) = -nb.weight;
  }
  const Eigen::VectorXd D = (mt.array() / m.array()).sqrt();
  const Eigen::VectorXd m_half = m.array().sqrt();
  // right to left: M^{-1/2}, D^{-1}, L~, M~^{-1}, D, M^{1/2}
  Eigen::MatrixXd A = L * m_half.cwiseInverse().asDiagonal();
  A = A * D.cwiseInverse().asDiagonal();
  A = mt.cwiseInverse().asDiagonal() * A;
  A = D.asDiagonal() * A;
  A = m_half.asDiagonal() * A;
  // exact symmetry is lost only to rounding
  return 0.5 * (A + A.transpose());
}

FDomination F_domination(const PerturbationPair& pair, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::BadParameter, "trials must be >= 1");
  const auto& g = pair.g;
  const auto& gt = pair.g_tilde;
  const std::size_t n = g.size();
  std::vector<double> ratio(n);  // m / m~
  for (std::size_t i = 0; i < n; ++i) ratio[i] = g.measure(i) / gt.measure(tilde_index(pair, i));

  FDomination out;
  out.F.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = tilde_index(pair, i);
    double sum = 0.0;
    auto add = [&](std::size_t y, double e, double et) {
      sum += std::abs(e - ratio[i] * et) + std::abs(e - ratio[y] * et);
    };
    for (const auto& nb : g.neighbors(i)) add(nb.index, nb.weight, gt.weight(j, gt.index_of(g.id(nb.index))));
    for (const auto& nb : gt.neighbors(j)) {
      const auto y = g.index_of(gt.id(nb.index));
      if (g.weight(i, y) == 0.0) add(y, 0.0, nb.weight);
    }
    out.F[i] = std::abs(g.degree(i) - gt.degree(j)) + sum / (2.0 * g.measure(i));
  }

  // Δ~ acts pointwise with its own measure; the pairing uses m.
  std::vector<std::size_t> to_g(n);
  for (std::size_t j = 0; j < n; ++j) to_g[j] = g.index_of(gt.id(j));
  auto apply_tilde = [&](const Function& f) {
    Function out_f = Function::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      const auto x = to_g[j];
      for (const auto& nb : gt.neighbors(j)) acc += nb.weight * (f(x) - f(to_g[nb.index]));
      out_f(x) = acc / gt.measure(j);
    }
    return out_f;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const double bound = norm_bound(g);
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    Function f(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) f(i) = {gauss(rng), gauss(rng)};
    Function diff = apply_laplacian(g, f) - apply_tilde(f);
    const double lhs = std::abs(inner_m(g, f, diff));
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) rhs += g.measure(i) * out.F[i] * std::norm(f(i));
    const double nf = norm_m(g, f);
    out.max_excess = std::max(out.max_excess, lhs - rhs);
    out.scale = std::max(out.scale, nf * nf * (1.0 + bound));
  }
  out.ok = out.max_excess <= 1e-10 * out.scale;

  const auto d = bfs_distances(g, g.index_of(pair.base));
  const int ecc = *std::max_element(d.begin(), d.end());
  out.shell_ratio.assign(static_cast<std::size_t>(std::max(ecc, 0)) + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] >= 0)
      out.shell_ratio[d[i]] = std::max(out.shell_ratio[d[i]], out.F[i] / (1.0 + g.degree(i)));
  out.decreasing = tail_non_increasing(out.shell_ratio);
  return out;
}

SpectraComparison compare_spectra(const PerturbationPair& pair, Boundary boundary,
                                  std::size_t margin, double threshold) {
  const auto es = eigensystem(pair.g, boundary);
  const auto et = eigensystem(pair.g_tilde, boundary);
  std::vector<double> all_g(es.values.begin(), es.values.end());
  std::vector<double> all_t(et.values.begin(), et.values.end());
  SpectraComparison out;
  out.raw = hausdorff(SpectralSet::from_points(all_g), SpectralSet::from_points(all_t));
  const auto fg = filter_boundary_states(pair.g, es, margin, threshold);
  const auto ft = filter_boundary_states(pair.g_tilde, et, margin, threshold);
  out.kept_g = fg.kept.size();
  out.kept_g_tilde = ft.kept.size();
  if (fg.kept.empty() || ft.kept.empty())
    throw Error(ErrorCode::EmptySet, "boundary filter removed every eigenvalue");
  out.filtered = hausdorff(SpectralSet::from_points(fg.kept), SpectralSet::from_points(ft.kept));
  return out;
}

}  // namespace ksparse
