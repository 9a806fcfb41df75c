#pragma once

// Laplacian of a weighted graph acting on l2(V, m):
//
//   (Δf)(x) = (1/m(x)) Σ_y E(x,y) (f(x) - f(y))
//
// Matrices are returned in the symmetrized frame A = M^{-1/2} L M^{-1/2},
// which is unitarily equivalent to Δ (u = M^{1/2} f).

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "ksparse/graph.hpp"

namespace ksparse {

enum class Boundary { neumann, dirichlet };

const char* to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

/// Functions on a graph, indexed by vertex index.
using Function = Eigen::VectorXcd;

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g, Boundary boundary);

/// Pointwise action of the (Neumann) Laplacian of g.
Function apply_laplacian(const WeightedGraph& g, const Function& f);

/// (1/2) Σ_{x,y} E(x,y) |f(x) - f(y)|^2
double quadratic_form(const WeightedGraph& g, const Function& f);

/// <f, h>_m = Σ m(x) conj(f(x)) h(x)
std::complex<double> inner_m(const WeightedGraph& g, const Function& f, const Function& h);
double norm_m(const WeightedGraph& g, const Function& f);

/// 2 sup_x deg(x); bounds the operator norm.
double norm_bound(const WeightedGraph& g);

struct SpectrumApprox {
  std::vector<double> eigenvalues;  // ascending
  Boundary boundary = Boundary::neumann;
  std::size_t truncation_radius = 0;
  std::string source;
};

struct SpectralOptions {
  std::size_t dense_cap = 4000;
};

/// All eigenvalues of laplacian_matrix(g, boundary). Throws SizeCapExceeded.
SpectrumApprox spectrum(const WeightedGraph& g, Boundary boundary, std::size_t truncation_radius = 0,
                        const std::string& source = "", const SpectralOptions& opts = {});

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, symmetrized frame
};

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a, const SpectralOptions& opts = {});
Eigensystem symmetric_eigensystem(const Eigen::MatrixXd& a, const SpectralOptions& opts = {});
Eigensystem eigensystem(const WeightedGraph& g, Boundary boundary, const SpectralOptions& opts = {});

/// Column j of the eigensystem mapped back to l2(V, m): f = M^{-1/2} u.
Function eigenfunction(const WeightedGraph& g, const Eigensystem& es, std::size_t j);

}  // namespace ksparse
