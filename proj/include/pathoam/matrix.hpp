#pragma once

// Dense complex matrices, unitarity and distance metrics, Haar sampling and
// the canonical unitary JSON document.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "json_format.hpp"

namespace pathoam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default unitarity tolerance for an N-dimensional matrix.
inline double unitarity_tol(Index dim) { return 1e-9 * static_cast<double>(dim); }

/// Wraps an angle into [0, 2π).
inline double wrap_phase(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod rounding can land exactly on 2π
  return r;
}

/// ‖M†M − I‖_F.
inline double unitarity_defect(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).norm();
}

inline bool is_unitary(const CMatrix& m, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  return unitarity_defect(m) <= tol;
}

inline double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("frobenius_distance: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  return (a - b).norm();
}

/// A square complex matrix that passed a unitarity check on construction.
/// Entry (r, c) is the amplitude from input mode c to output mode r.
class UnitaryMatrix {
 public:
  static UnitaryMatrix from_matrix(CMatrix m, double tol) {
    if (m.rows() == 0) throw DimensionError("unitary must have dim >= 1");
    if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
    const double defect = unitarity_defect(m);
    if (!(defect <= tol))
      throw ValidationError("matrix is not unitary: ||U^dag U - I||_F = " +
                                std::to_string(defect),
                            defect);
    return UnitaryMatrix(std::move(m));
  }

  static UnitaryMatrix from_matrix(CMatrix m) {
    const double tol = unitarity_tol(m.rows());
    return from_matrix(std::move(m), tol);
  }

  static UnitaryMatrix identity(Index dim) {
    if (dim < 1) throw DomainError("identity dimension must be >= 1");
    return UnitaryMatrix(CMatrix::Identity(dim, dim));
  }

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

 private:
  explicit UnitaryMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of R's diagonal moved into Q.
inline UnitaryMatrix haar_random_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("haar_random_unitary: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  CMatrix z(dim, dim);
  for (Index c = 0; c < dim; ++c)
    for (Index r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix& r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0 ? d / mag : Complex(1.0);
  }
  return UnitaryMatrix::from_matrix(std::move(q));
}

// ---------------------------------------------------------------------------
// JSON: {"dim": N, "re": [[...]], "im": [[...]]}

inline json matrix_to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline json to_json(const UnitaryMatrix& u) { return matrix_to_json(u.matrix()); }

/// Parses the square matrix document; rejects ragged rows and non-finite values.
inline CMatrix matrix_from_json(const json& doc, const std::string& path = "$") {
  const long long dim = require_int(doc, "dim", path);
  if (dim < 1) throw ParseError(path + ".dim", "must be >= 1");
  const json& re = require_array(doc, "re", path);
  const json& im = require_array(doc, "im", path);
  CMatrix m(dim, dim);
  auto read_part = [&](const json& rows, const char* name, bool imag) {
    const std::string base = path + "." + name;
    if (static_cast<long long>(rows.size()) != dim)
      throw ParseError(base, "expected " + std::to_string(dim) + " rows, got " +
                                 std::to_string(rows.size()));
    for (long long r = 0; r < dim; ++r) {
      const std::string row_path = base + "[" + std::to_string(r) + "]";
      const json& row = rows[r];
      if (!row.is_array() || static_cast<long long>(row.size()) != dim)
        throw ParseError(row_path, "ragged row, expected " + std::to_string(dim) +
                                       " entries");
      for (long long c = 0; c < dim; ++c) {
        const json& v = row[c];
        if (!v.is_number())
          throw ParseError(row_path + "[" + std::to_string(c) + "]", "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
          throw ParseError(row_path + "[" + std::to_string(c) + "]", "non-finite value");
        if (imag)
          m(r, c).imag(x);
        else
          m(r, c).real(x);
      }
    }
  };
  read_part(re, "re", false);
  read_part(im, "im", true);
  return m;
}

/// Parses and checks unitarity at `unitarity_tol(dim)`.
inline UnitaryMatrix unitary_from_json(const json& doc, const std::string& path = "$") {
  return UnitaryMatrix::from_matrix(matrix_from_json(doc, path));
}

}  // namespace pathoam
