#pragma once

// Rectangular mesh decomposition U = D · T_K ··· T_2 · T_1 of an N×N
// unitary into N(N−1)/2 two-mode splitting operations, each
//
//            | e^{iφ} cosθ   −sinθ |
//   R(θ,φ) = |                     |   on modes (m, m+1),
//            | e^{iφ} sinθ    cosθ |
//
// followed by a diagonal phase layer D.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "json_format.hpp"
#include "matrix.hpp"

namespace pathoam {

/// Two-mode splitting operation on modes (m, m+1).
struct TOp {
  int m = 0;
  double theta = 0.0;  // [0, π/2]
  double phi = 0.0;    // [0, 2π)
};

enum class LayerParity { omega1, omega2 };

inline const char* to_string(LayerParity p) {
  return p == LayerParity::omega1 ? "omega1" : "omega2";
}

/// Mesh in application order: layers[0] acts first, output_phases last.
/// Layer k only couples pairs with m ≡ k (mod 2).
struct ClementsMesh {
  Index dim = 0;
  std::vector<std::vector<TOp>> layers;
  std::vector<double> output_phases;

  std::size_t op_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
  }
};

inline std::size_t clements_op_count(Index dim) {
  return static_cast<std::size_t>(dim * (dim - 1) / 2);
}

/// The 2×2 block R(θ, φ).
inline Eigen::Matrix2cd splitter_block(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd r;
  r << e * c, -s, e * s, c;
  return r;
}

inline CMatrix t_matrix(Index dim, const TOp& op) {
  if (op.m < 0 || op.m + 1 >= dim)
    throw IndexError("t_matrix: mode " + std::to_string(op.m) + " out of range for dim " +
                     std::to_string(dim));
  CMatrix t = CMatrix::Identity(dim, dim);
  t.block<2, 2>(op.m, op.m) = splitter_block(op.theta, op.phi);
  return t;
}

/// Checks mode ranges, angle ranges, pair disjointness and layer parity.
inline void validate(const ClementsMesh& mesh) {
  if (mesh.dim < 1) throw ValidationError("mesh dim must be >= 1");
  if (static_cast<Index>(mesh.output_phases.size()) != mesh.dim)
    throw ValidationError("mesh has " + std::to_string(mesh.output_phases.size()) +
                          " output phases for dim " + std::to_string(mesh.dim));
  for (double p : mesh.output_phases)
    if (!std::isfinite(p)) throw ValidationError("non-finite output phase");
  for (std::size_t k = 0; k < mesh.layers.size(); ++k) {
    std::vector<bool> used(mesh.dim, false);
    const std::string where = "layer " + std::to_string(k);
    for (const TOp& op : mesh.layers[k]) {
      if (op.m < 0 || op.m + 1 >= mesh.dim)
        throw ValidationError(where + ": mode " + std::to_string(op.m) + " out of range");
      if (static_cast<std::size_t>(op.m % 2) != k % 2)
        throw ValidationError(where + ": mode " + std::to_string(op.m) +
                              " has the wrong parity for this layer");
      if (used[op.m] || used[op.m + 1])
        throw ValidationError(where + ": overlapping mode pairs at m=" + std::to_string(op.m));
      used[op.m] = used[op.m + 1] = true;
      if (!(op.theta >= 0.0 && op.theta <= std::numbers::pi / 2))
        throw ValidationError(where + ": theta outside [0, pi/2]");
      if (!(op.phi >= 0.0 && op.phi < kTwoPi))
        throw ValidationError(where + ": phi outside [0, 2pi)");
    }
  }
}

/// Ω1 when every operation in layer k acts on an even mode, Ω2 when every one
/// acts on an odd mode. An empty layer takes the parity of its position.
inline LayerParity layer_parity(const ClementsMesh& mesh, std::size_t k) {
  if (k >= mesh.layers.size())
    throw IndexError("layer " + std::to_string(k) + " out of range");
  const auto& layer = mesh.layers[k];
  if (layer.empty()) return k % 2 == 0 ? LayerParity::omega1 : LayerParity::omega2;
  const bool all_even =
      std::all_of(layer.begin(), layer.end(), [](const TOp& op) { return op.m % 2 == 0; });
  const bool all_odd =
      std::all_of(layer.begin(), layer.end(), [](const TOp& op) { return op.m % 2 == 1; });
  if (all_even) return LayerParity::omega1;
  if (all_odd) return LayerParity::omega2;
  throw ValidationError("layer " + std::to_string(k) + " mixes even and odd modes");
}

namespace detail {

inline constexpr double kNullThreshold = 1e-14;

// Chooses (θ, φ) so that column m of U·T⁻¹ vanishes in row `row`.
inline TOp null_from_right(CMatrix& u, Index row, int m) {
  const Complex a = u(row, m);
  const Complex b = u(row, m + 1);
  TOp op{m, 0.0, 0.0};
  if (std::abs(a) >= kNullThreshold) {
    op.theta = std::atan2(std::abs(a), std::abs(b));
    op.phi = wrap_phase(std::arg(a) - std::arg(b));
  }
  const Eigen::Matrix2cd r = splitter_block(op.theta, op.phi);
  u.middleCols<2>(m) = u.middleCols<2>(m) * r.adjoint();
  u(row, m) = 0.0;
  return op;
}

// Chooses (θ, φ) so that row m+1 of T·U vanishes in column `col`.
inline TOp null_from_left(CMatrix& u, Index col, int m) {
  const Complex a = u(m, col);
  const Complex b = u(m + 1, col);
  TOp op{m, 0.0, 0.0};
  if (std::abs(b) >= kNullThreshold) {
    op.theta = std::atan2(std::abs(b), std::abs(a));
    op.phi = wrap_phase(std::arg(b) - std::arg(a) + std::numbers::pi);
  }
  const Eigen::Matrix2cd r = splitter_block(op.theta, op.phi);
  u.middleRows<2>(m) = r * u.middleRows<2>(m);
  u(m + 1, col) = 0.0;
  return op;
}

// Rewrites T⁻¹·D as D'·T' in place: d holds D on entry and D' on exit.
inline TOp commute_inverse_through_diagonal(const TOp& op, std::vector<Complex>& d) {
  Complex& d1 = d[op.m];
  Complex& d2 = d[op.m + 1];
  if (op.theta == 0.0) {
    d1 *= std::polar(1.0, -op.phi);
    return TOp{op.m, 0.0, 0.0};
  }
  const TOp out{op.m, op.theta, wrap_phase(std::arg(-d1 / d2))};
  d1 = -std::polar(1.0, -op.phi) * d2;
  return out;
}

// Places each operation (in application order) in the earliest layer of the
// right parity after every earlier operation sharing one of its modes.
inline std::vector<std::vector<TOp>> schedule_layers(const std::vector<TOp>& ops, Index dim) {
  std::vector<std::vector<TOp>> layers(static_cast<std::size_t>(dim));
  std::vector<long> last(static_cast<std::size_t>(dim), -1);
  for (const TOp& op : ops) {
    long k = std::max(last[op.m], last[op.m + 1]) + 1;
    if ((k - op.m) % 2 != 0) ++k;
    if (k >= dim) throw Error("mesh scheduling exceeded the rectangular layout");
    layers[k].push_back(op);
    last[op.m] = last[op.m + 1] = k;
  }
  for (auto& layer : layers)
    std::sort(layer.begin(), layer.end(), [](const TOp& a, const TOp& b) { return a.m < b.m; });
  return layers;
}

}  // namespace detail

/// Nulls the anti-diagonals of U alternately from the right (column
/// operations) and from the left (row operations), then moves the left
/// factors through the residual diagonal so that U = D · ∏ T.
inline ClementsMesh decompose(const UnitaryMatrix& u) {
  const Index n = u.dim();
  CMatrix w = u.matrix();
  std::vector<TOp> right_ops;  // application order
  std::vector<TOp> left_ops;   // order found: L_1, L_2, ...
  for (Index i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (Index j = 0; j <= i; ++j)
        right_ops.push_back(detail::null_from_right(w, n - 1 - j, static_cast<int>(i - j)));
    } else {
      for (Index j = 1; j <= i + 1; ++j)
        left_ops.push_back(detail::null_from_left(w, j - 1, static_cast<int>(n + j - i - 3)));
    }
  }

  // L_k ··· L_1 · U · R_1⁻¹ ··· R_p⁻¹ = D
  //   ⇒ U = L_1⁻¹ ··· L_k⁻¹ · D · R_p ··· R_1.
  std::vector<Complex> d(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) d[k] = w(k, k);
  std::vector<TOp> commuted(left_ops.size());
  for (std::size_t idx = left_ops.size(); idx-- > 0;)
    commuted[idx] = detail::commute_inverse_through_diagonal(left_ops[idx], d);

  std::vector<TOp> sequence = right_ops;
  for (std::size_t idx = commuted.size(); idx-- > 0;) sequence.push_back(commuted[idx]);

  ClementsMesh mesh;
  mesh.dim = n;
  mesh.layers = detail::schedule_layers(sequence, n);
  mesh.output_phases.reserve(static_cast<std::size_t>(n));
  for (const Complex& z : d) mesh.output_phases.push_back(wrap_phase(std::arg(z)));
  return mesh;
}

/// Validates the input and rejects non-unitary matrices.
inline ClementsMesh decompose(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("decompose: matrix is not square");
  const double defect = unitarity_defect(m);
  if (!(defect <= unitarity_tol(m.rows())))
    throw ValidationError("decompose: input is not unitary, ||U^dag U - I||_F = " +
                              std::to_string(defect),
                          defect);
  return decompose(UnitaryMatrix::from_matrix(m));
}

/// diag(e^{i·phases}) · T_K ··· T_1, applying each 2×2 block in place.
inline UnitaryMatrix reconstruct(const ClementsMesh& mesh) {
  validate(mesh);
  CMatrix u = CMatrix::Identity(mesh.dim, mesh.dim);
  for (const auto& layer : mesh.layers)
    for (const TOp& op : layer)
      u.middleRows<2>(op.m) = splitter_block(op.theta, op.phi) * u.middleRows<2>(op.m);
  for (Index k = 0; k < mesh.dim; ++k) u.row(k) *= std::polar(1.0, mesh.output_phases[k]);
  return UnitaryMatrix::from_matrix(std::move(u), 1e-12 * static_cast<double>(mesh.dim));
}

// ---------------------------------------------------------------------------
// JSON: {"dim":N,"layers":[[{"m":int,"theta":f,"phi":f},...],...],"phases":[...]}

inline json to_json(const ClementsMesh& mesh) {
  json layers = json::array();
  for (const auto& layer : mesh.layers) {
    json l = json::array();
    for (const TOp& op : layer) l.push_back({{"m", op.m}, {"theta", op.theta}, {"phi", op.phi}});
    layers.push_back(std::move(l));
  }
  return json{{"dim", mesh.dim}, {"layers", std::move(layers)}, {"phases", mesh.output_phases}};
}

inline ClementsMesh mesh_from_json(const json& doc, const std::string& path = "$") {
  ClementsMesh mesh;
  mesh.dim = require_int(doc, "dim", path);
  if (mesh.dim < 1) throw ParseError(path + ".dim", "must be >= 1");
  const json& layers = require_array(doc, "layers", path);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string lp = path + ".layers[" + std::to_string(k) + "]";
    if (!layers[k].is_array()) throw ParseError(lp, "expected an array");
    std::vector<TOp> layer;
    for (std::size_t i = 0; i < layers[k].size(); ++i) {
      const std::string op_path = lp + "[" + std::to_string(i) + "]";
      const json& o = layers[k][i];
      layer.push_back(TOp{static_cast<int>(require_int(o, "m", op_path)),
                          require_double(o, "theta", op_path), require_double(o, "phi", op_path)});
    }
    mesh.layers.push_back(std::move(layer));
  }
  const json& phases = require_array(doc, "phases", path);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    if (!phases[k].is_number())
      throw ParseError(path + ".phases[" + std::to_string(k) + "]", "expected a number");
    mesh.output_phases.push_back(phases[k].get<double>());
  }
  validate(mesh);
  return mesh;
}

}  // namespace pathoam
