#include "ksparse/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ksparse/error.hpp"

namespace ksparse {

const char* to_string(Boundary b) { return b == Boundary::neumann ? "neumann" : "dirichlet"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "neumann") return Boundary::neumann;
  if (s == "dirichlet") return Boundary::dirichlet;
  throw Error(ErrorCode::BadParameter, "boundary must be neumann or dirichlet, got '" + s + "'");
}

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g, Boundary boundary) {
  if (boundary == Boundary::dirichlet && !g.has_boundary_data())
    throw Error(ErrorCode::MissingBoundaryData, "dirichlet Laplacian needs exterior weights");
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd inv_sqrt_m(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt_m(i) = 1.0 / std::sqrt(g.measure(i));
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = g.weight_sum(i);
    if (boundary == Boundary::dirichlet) diag += g.exterior_weight(i);
    a(i, i) = diag * inv_sqrt_m(i) * inv_sqrt_m(i);
    for (const auto& nb : g.neighbors(i)) {
      const auto j = static_cast<Eigen::Index>(nb.index);
      a(i, j) = -nb.weight * inv_sqrt_m(i) * inv_sqrt_m(j);
    }
  }
  return a;
}

Function apply_laplacian(const WeightedGraph& g, const Function& f) {
  Function out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (const auto& nb : g.neighbors(i)) acc += nb.weight * (f(i) - f(nb.index));
    out(i) = acc / g.measure(i);
  }
  return out;
}

double quadratic_form(const WeightedGraph& g, const Function& f) {
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& nb : g.neighbors(i)) q += nb.weight * std::norm(f(i) - f(nb.index));
  return 0.5 * q;
}

std::complex<double> inner_m(const WeightedGraph& g, const Function& f, const Function& h) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.measure(i) * std::conj(f(i)) * h(i);
  return s;
}

double norm_m(const WeightedGraph& g, const Function& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.measure(i) * std::norm(f(i));
  return std::sqrt(s);
}

double norm_bound(const WeightedGraph& g) {
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, g.degree(i));
  return 2.0 * d;
}

namespace {

void check_cap(Eigen::Index n, const SpectralOptions& opts) {
  if (static_cast<std::size_t>(n) > opts.dense_cap)
    throw Error(ErrorCode::SizeCapExceeded, "dense eigensolve of size " + std::to_string(n) +
                                                " exceeds cap " + std::to_string(opts.dense_cap));
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a, const SpectralOptions& opts) {
  check_cap(a.rows(), opts);
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::BadParameter, "eigensolver failed");
  std::vector<double> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(out.begin(), out.end());
  return out;
}

Eigensystem symmetric_eigensystem(const Eigen::MatrixXd& a, const SpectralOptions& opts) {
  check_cap(a.rows(), opts);
  Eigensystem es;
  if (a.rows() == 0) return es;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::BadParameter, "eigensolver failed");
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  return es;
}

SpectrumApprox spectrum(const WeightedGraph& g, Boundary boundary, std::size_t truncation_radius,
                        const std::string& source, const SpectralOptions& opts) {
  check_cap(static_cast<Eigen::Index>(g.size()), opts);
  SpectrumApprox s;
  s.eigenvalues = symmetric_eigenvalues(laplacian_matrix(g, boundary), opts);
  s.boundary = boundary;
  s.truncation_radius = truncation_radius;
  s.source = source;
  return s;
}

Eigensystem eigensystem(const WeightedGraph& g, Boundary boundary, const SpectralOptions& opts) {
  check_cap(static_cast<Eigen::Index>(g.size()), opts);
  return symmetric_eigensystem(laplacian_matrix(g, boundary), opts);
}

Function eigenfunction(const WeightedGraph& g, const Eigensystem& es, std::size_t j) {
  Function f(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    f(i) = es.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
           std::sqrt(g.measure(i));
  return f;
}

}  // namespace ksparse
