#pragma once

// Test-only reference computations. These deliberately avoid the library's
// in-place kernels and build every operator as a full dense matrix.

#include <complex>
#include <random>
#include <vector>

#include <pathoam/clements.hpp>

namespace oracle {

using pathoam::CMatrix;
using pathoam::Complex;
using pathoam::Index;

/// Full-matrix product D · T_K ··· T_1 built from t_matrix.
inline CMatrix mesh_product(const pathoam::ClementsMesh& mesh) {
  CMatrix u = CMatrix::Identity(mesh.dim, mesh.dim);
  for (const auto& layer : mesh.layers)
    for (const auto& op : layer) u = pathoam::t_matrix(mesh.dim, op) * u;
  CMatrix d = CMatrix::Zero(mesh.dim, mesh.dim);
  for (Index k = 0; k < mesh.dim; ++k) d(k, k) = std::polar(1.0, mesh.output_phases[k]);
  return d * u;
}

/// Entry (r, c) of R(θ, φ) written out longhand.
inline Complex r_entry(double theta, double phi, int r, int c) {
  const Complex e = std::polar(1.0, phi);
  if (r == 0 && c == 0) return e * std::cos(theta);
  if (r == 0 && c == 1) return -std::sin(theta);
  if (r == 1 && c == 0) return e * std::sin(theta);
  return std::cos(theta);
}

inline CMatrix diag_phases(const std::vector<double>& phases) {
  CMatrix d = CMatrix::Zero(static_cast<Index>(phases.size()), static_cast<Index>(phases.size()));
  for (std::size_t k = 0; k < phases.size(); ++k)
    d(static_cast<Index>(k), static_cast<Index>(k)) = std::polar(1.0, phases[k]);
  return d;
}

/// True iff every off-diagonal entry is below tol.
inline bool is_diagonal(const CMatrix& m, double tol) {
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      if (r != c && std::abs(m(r, c)) > tol) return false;
  return true;
}

}  // namespace oracle
