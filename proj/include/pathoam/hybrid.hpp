#pragma once

// Path-OAM hybrid compiler. A 4n-dimensional mesh is mapped onto 2n paths,
// each carrying the OAM pair ±L. Logical mode q of subspace k = q / 4 sits at
//
//   q = 4k   -> (2k,   +L)      q = 4k+2 -> (2k,   -L)
//   q = 4k+1 -> (2k+1, +L)      q = 4k+3 -> (2k+1, -L)
//
// Ω1 layers fuse the two same-OAM couplings of a subspace into one
// OAM-dependent beam splitter (OBS). Ω2 layers are bracketed by OAM swaps on
// every even path; inside the bracket a first step of OBSes on (2k, 2k+1)
// acts at +L and a second step on (2k+1, 2k+2) acts at -L.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "clements.hpp"
#include "errors.hpp"
#include "json_format.hpp"
#include "matrix.hpp"

namespace pathoam {

/// One basis state |path, ℓ⟩ of the hybrid space.
struct ModeLabel {
  int path = 0;
  int ell = 0;
  auto operator<=>(const ModeLabel&) const = default;
};

class LogicalEncoding {
 public:
  LogicalEncoding(int n, int L) : n_(n), L_(L) {
    if (n < 1) throw DomainError("encoding needs n >= 1 subspaces");
    if (L < 1) throw DomainError("OAM magnitude L must be >= 1");
  }

  int n() const { return n_; }
  int L() const { return L_; }
  Index dim() const { return 4 * static_cast<Index>(n_); }
  int path_count() const { return 2 * n_; }

  ModeLabel label_of(Index q) const {
    if (q < 0 || q >= dim()) throw IndexError("logical index " + std::to_string(q) + " out of range");
    const int k = static_cast<int>(q / 4);
    const int r = static_cast<int>(q % 4);
    return ModeLabel{2 * k + (r & 1), r < 2 ? L_ : -L_};
  }

  Index logical_of(ModeLabel label) const {
    if (label.path < 0 || label.path >= path_count() || (label.ell != L_ && label.ell != -L_))
      throw IndexError("label (" + std::to_string(label.path) + ", " +
                       std::to_string(label.ell) + ") is not in the encoding");
    const Index k = label.path / 2;
    return 4 * k + (label.path % 2) + (label.ell == L_ ? 0 : 2);
  }

 private:
  int n_;
  int L_;
};

inline LogicalEncoding encode(int n, int L = 1) { return LogicalEncoding(n, L); }

// ---------------------------------------------------------------------------
// OAM-dependent beam splitter

/// Splitting angles of R(θ, φ).
struct SplitAngles {
  double theta = 0.0;
  double phi = 0.0;
};

/// Phase-shifter settings α and dove-prism orientations β of one OBS. At OAM ℓ
/// the outer phase is φ = α₁ + 2β₁ℓ and the inner one 2θ = α₂ + 2β₂ℓ.
struct ObsParams {
  int path_a = 0;
  int path_b = 1;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  int L = 1;
};

struct ObsAngles {
  double theta = 0.0;
  double phi = 0.0;
  double theta_canonical = 0.0;  // [0, 2π)
  double phi_canonical = 0.0;    // [0, 2π)
};

namespace detail {

inline double outer_phase(double alpha, double beta, int ell) {
  return alpha + 2.0 * beta * static_cast<double>(ell);
}

inline double step_ulps(double x, int k) {
  const double dir = k > 0 ? INFINITY : -INFINITY;
  for (int i = 0; i < std::abs(k); ++i) x = std::nextafter(x, dir);
  return x;
}

// Solves α + 2βL = plus, α − 2βL = minus. The closed form is perturbed by a
// few ulps when that makes both equations hold exactly in binary64; such a
// pair does not exist for every input.
inline std::pair<double, double> solve_linear_phase(double plus, double minus, int L) {
  const double alpha = (plus + minus) / 2.0;
  const double beta = (plus - minus) / (4.0 * L);
  auto exact = [&](double a, double b) {
    return outer_phase(a, b, L) == plus && outer_phase(a, b, -L) == minus;
  };
  if (exact(alpha, beta)) return {alpha, beta};
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) {
      const double a = step_ulps(alpha, i);
      const double b = step_ulps(beta, j);
      if (exact(a, b)) return {a, b};
    }
  return {alpha, beta};
}

}  // namespace detail

/// Calibrates an OBS on paths (path_a, path_a+1) so that OAM +L sees `plus`
/// and OAM −L sees `minus`.
inline ObsParams synthesize_obs(SplitAngles plus, SplitAngles minus, int path_a, int L) {
  if (L < 1) throw DomainError("OAM magnitude L must be >= 1");
  ObsParams p;
  p.path_a = path_a;
  p.path_b = path_a + 1;
  p.L = L;
  std::tie(p.alpha1, p.beta1) = detail::solve_linear_phase(plus.phi, minus.phi, L);
  std::tie(p.alpha2, p.beta2) =
      detail::solve_linear_phase(2.0 * plus.theta, 2.0 * minus.theta, L);
  return p;
}

/// Splitting angles the OBS applies to OAM ℓ. Linear in ℓ, so a third OAM
/// value gets an operation fixed by the two calibrated ones.
inline ObsAngles obs_forward(const ObsParams& p, int ell) {
  ObsAngles a;
  a.phi = detail::outer_phase(p.alpha1, p.beta1, ell);
  a.theta = detail::outer_phase(p.alpha2, p.beta2, ell) / 2.0;
  a.phi_canonical = wrap_phase(a.phi);
  a.theta_canonical = wrap_phase(a.theta);
  return a;
}

// ---------------------------------------------------------------------------
// Other elements

/// Exchanges (path, +L) and (path, −L). S and S† share the same action.
struct SwapGate {
  int path = 0;
  int L = 1;
  bool inverse = false;
};

/// Applies e^{i(α + 2βℓ)} to OAM ℓ on one path.
struct OamPhaseShifter {
  int path = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

using HybridElement = std::variant<ObsParams, SwapGate, OamPhaseShifter>;

struct ElementStats {
  long long obs_count = 0;
  long long swap_count = 0;
  long long phase_count = 0;
  long long optical_depth = 0;
  long long clements_mzi_count = 0;
  long long mzi_reduction = 0;
  bool operator==(const ElementStats&) const = default;
};

struct HybridNetlist {
  int n = 0;
  Index dim = 0;
  int L = 1;
  Index original_dim = 0;  // dimension before padding
  std::vector<HybridElement> elements;
  ElementStats stats;

  int path_count() const { return 2 * n; }
};

/// Counts by enumeration. Optical depth is the longest chain of OBSes a photon
/// can traverse: an OBS on (a, b) leaves both paths at max(depth[a], depth[b]) + 1.
inline ElementStats stats_of(const HybridNetlist& net) {
  ElementStats s;
  std::vector<long long> depth(static_cast<std::size_t>(std::max(net.path_count(), 0)), 0);
  auto depth_at = [&](int p) -> long long& {
    if (p < 0 || static_cast<std::size_t>(p) >= depth.size()) depth.resize(static_cast<std::size_t>(p) + 1, 0);
    return depth[static_cast<std::size_t>(p)];
  };
  for (const auto& e : net.elements) {
    if (const auto* obs = std::get_if<ObsParams>(&e)) {
      ++s.obs_count;
      const long long d = std::max(depth_at(obs->path_a), depth_at(obs->path_b)) + 1;
      depth_at(obs->path_a) = d;
      depth_at(obs->path_b) = d;
    } else if (std::holds_alternative<SwapGate>(e)) {
      ++s.swap_count;
    } else {
      ++s.phase_count;
    }
  }
  for (long long d : depth) s.optical_depth = std::max(s.optical_depth, d);
  s.clements_mzi_count = static_cast<long long>(net.dim) * (static_cast<long long>(net.dim) - 1) / 2;
  s.mzi_reduction = s.clements_mzi_count - s.obs_count;
  return s;
}

/// Paths in range, OBSes on adjacent paths, swaps at the netlist's L and
/// balanced per path by the end of the list.
inline void validate(const HybridNetlist& net) {
  if (net.n < 1 || net.dim != 4 * static_cast<Index>(net.n))
    throw ValidationError("hybrid netlist needs dim = 4n with n >= 1");
  if (net.L < 1) throw ValidationError("hybrid netlist needs L >= 1");
  const int paths = net.path_count();
  std::vector<int> open_swaps(static_cast<std::size_t>(paths), 0);
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const std::string where = "element " + std::to_string(i);
    const auto& e = net.elements[i];
    if (const auto* obs = std::get_if<ObsParams>(&e)) {
      if (obs->path_a < 0 || obs->path_b != obs->path_a + 1 || obs->path_b >= paths)
        throw ValidationError(where + ": OBS must act on adjacent paths in range");
      if (obs->L != net.L) throw ValidationError(where + ": OBS calibrated for a different L");
    } else if (const auto* sw = std::get_if<SwapGate>(&e)) {
      if (sw->path < 0 || sw->path >= paths) throw ValidationError(where + ": swap path out of range");
      if (sw->L != net.L) throw ValidationError(where + ": swap acts on a different L");
      open_swaps[static_cast<std::size_t>(sw->path)] ^= 1;
    } else {
      const auto& ps = std::get<OamPhaseShifter>(e);
      if (ps.path < 0 || ps.path >= paths) throw ValidationError(where + ": phase shifter path out of range");
    }
  }
  for (int p = 0; p < paths; ++p)
    if (open_swaps[static_cast<std::size_t>(p)])
      throw ValidationError("unbalanced swaps on path " + std::to_string(p));
}

// ---------------------------------------------------------------------------
// Compilation

namespace detail {

// Mesh so far M and netlist so far A satisfy M = F·A with F diagonal; F is
// realized by the final phase shifters. Each mesh coupling T is rewritten as
// T·F = F'·B where B is what the OBS branch implements.
class FrameTracker {
 public:
  explicit FrameTracker(Index dim) : frame_(static_cast<std::size_t>(dim), Complex(1.0)) {}

  // The OBS branch holds mode m on path_a and m+1 on path_b.
  SplitAngles forward(const TOp& op) {
    Complex& p1 = frame_[op.m];
    Complex& p2 = frame_[op.m + 1];
    const SplitAngles out{op.theta, wrap_phase(op.phi + std::arg(p1) - std::arg(p2))};
    p1 = p2;
    return out;
  }

  // The OBS branch holds mode m+1 on path_a and m on path_b.
  SplitAngles reversed(const TOp& op) {
    Complex& p1 = frame_[op.m];
    Complex& p2 = frame_[op.m + 1];
    const Complex q1 = std::polar(1.0, op.phi) * p1;
    const SplitAngles out{op.theta, wrap_phase(std::arg(-p2 / q1))};
    p1 = q1;
    p2 = -q1;
    return out;
  }

  Complex operator[](Index q) const { return frame_[static_cast<std::size_t>(q)]; }

 private:
  std::vector<Complex> frame_;
};

inline const TOp* find_op(const std::vector<TOp>& layer, int m) {
  for (const TOp& op : layer)
    if (op.m == m) return &op;
  return nullptr;
}

}  // namespace detail

/// Compiles a 4n-dimensional mesh. Every one of the dim rectangular layers is
/// emitted, with identity branches wherever the mesh has no coupling.
inline HybridNetlist compile(const ClementsMesh& mesh, int L = 1) {
  if (L < 1) throw DomainError("OAM magnitude L must be >= 1");
  if (mesh.dim < 4 || mesh.dim % 4 != 0)
    throw PreconditionError("hybrid compile needs dim = 4n, got " + std::to_string(mesh.dim) +
                            "; pad the unitary first (pad_unitary)");
  validate(mesh);
  if (mesh.layers.size() > static_cast<std::size_t>(mesh.dim))
    throw ValidationError("mesh has more layers than modes");

  const int n = static_cast<int>(mesh.dim / 4);
  HybridNetlist net;
  net.n = n;
  net.dim = mesh.dim;
  net.L = L;
  net.original_dim = mesh.dim;
  detail::FrameTracker frame(mesh.dim);
  static const std::vector<TOp> kEmpty;
  const SplitAngles identity{0.0, 0.0};

  for (Index k = 0; k < mesh.dim; ++k) {
    const auto& layer = static_cast<std::size_t>(k) < mesh.layers.size() ? mesh.layers[k] : kEmpty;
    if (k % 2 == 0) {
      // Ω1: couplings (4j, 4j+1) at +L and (4j+2, 4j+3) at −L on paths (2j, 2j+1).
      for (int j = 0; j < n; ++j) {
        const TOp* plus = detail::find_op(layer, 4 * j);
        const TOp* minus = detail::find_op(layer, 4 * j + 2);
        const SplitAngles ap = plus ? frame.forward(*plus) : identity;
        const SplitAngles am = minus ? frame.forward(*minus) : identity;
        net.elements.emplace_back(synthesize_obs(ap, am, 2 * j, L));
      }
    } else {
      // Ω2 inside a swap bracket on the even paths. Step 1: coupling
      // (4j+1, 4j+2) now lives at +L on (2j, 2j+1), with mode 4j+2 on the
      // upper path. Step 2: coupling (4j+3, 4j+4) lives at −L on (2j+1, 2j+2).
      for (int j = 0; j < n; ++j) net.elements.emplace_back(SwapGate{2 * j, L, false});
      for (int j = 0; j < n; ++j) {
        const TOp* op = detail::find_op(layer, 4 * j + 1);
        const SplitAngles ap = op ? frame.reversed(*op) : identity;
        net.elements.emplace_back(synthesize_obs(ap, identity, 2 * j, L));
      }
      for (int j = 0; j + 1 < n; ++j) {
        const TOp* op = detail::find_op(layer, 4 * j + 3);
        const SplitAngles am = op ? frame.forward(*op) : identity;
        net.elements.emplace_back(synthesize_obs(identity, am, 2 * j + 1, L));
      }
      for (int j = 0; j < n; ++j) net.elements.emplace_back(SwapGate{2 * j, L, true});
    }
  }

  // Output phases D·F, one OAM-dependent shifter per path.
  const LogicalEncoding enc(n, L);
  for (int p = 0; p < 2 * n; ++p) {
    const Index qp = enc.logical_of({p, L});
    const Index qm = enc.logical_of({p, -L});
    const double plus = wrap_phase(mesh.output_phases[qp] + std::arg(frame[qp]));
    const double minus = wrap_phase(mesh.output_phases[qm] + std::arg(frame[qm]));
    const auto [alpha, beta] = detail::solve_linear_phase(plus, minus, L);
    net.elements.emplace_back(OamPhaseShifter{p, alpha, beta});
  }
  net.stats = stats_of(net);
  return net;
}

/// U ⊕ I, embedding U in the top-left block.
inline UnitaryMatrix pad_unitary(const UnitaryMatrix& u, Index target_dim) {
  if (target_dim < u.dim())
    throw DomainError("cannot pad dim " + std::to_string(u.dim()) + " down to " +
                      std::to_string(target_dim));
  CMatrix m = CMatrix::Identity(target_dim, target_dim);
  m.topLeftCorner(u.dim(), u.dim()) = u.matrix();
  return UnitaryMatrix::from_matrix(std::move(m));
}

inline Index next_multiple_of_four(Index dim) { return std::max<Index>(4, (dim + 3) / 4 * 4); }

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const ElementStats& s) {
  return json{{"obs_count", s.obs_count},         {"swap_count", s.swap_count},
              {"phase_count", s.phase_count},     {"optical_depth", s.optical_depth},
              {"clements_mzi_count", s.clements_mzi_count}, {"mzi_reduction", s.mzi_reduction}};
}

inline json to_json(const HybridElement& e) {
  if (const auto* o = std::get_if<ObsParams>(&e))
    return json{{"type", "obs"},       {"path_a", o->path_a}, {"path_b", o->path_b},
                {"alpha1", o->alpha1}, {"alpha2", o->alpha2}, {"beta1", o->beta1},
                {"beta2", o->beta2},   {"L", o->L}};
  if (const auto* s = std::get_if<SwapGate>(&e))
    return json{{"type", "swap"}, {"path", s->path}, {"L", s->L}, {"inverse", s->inverse}};
  const auto& p = std::get<OamPhaseShifter>(e);
  return json{{"type", "phase"}, {"path", p.path}, {"alpha", p.alpha}, {"beta", p.beta}};
}

inline json to_json(const HybridNetlist& net) {
  json elements = json::array();
  for (const auto& e : net.elements) elements.push_back(to_json(e));
  return json{{"kind", "hybrid"},
              {"n", net.n},
              {"dim", net.dim},
              {"L", net.L},
              {"original_dim", net.original_dim},
              {"elements", std::move(elements)},
              {"stats", to_json(net.stats)}};
}

inline HybridElement element_from_json(const json& o, const std::string& path) {
  const std::string type = require_string(o, "type", path);
  if (type == "obs") {
    ObsParams p;
    p.path_a = static_cast<int>(require_int(o, "path_a", path));
    p.path_b = static_cast<int>(require_int(o, "path_b", path));
    p.alpha1 = require_double(o, "alpha1", path);
    p.alpha2 = require_double(o, "alpha2", path);
    p.beta1 = require_double(o, "beta1", path);
    p.beta2 = require_double(o, "beta2", path);
    p.L = static_cast<int>(require_int(o, "L", path));
    return p;
  }
  if (type == "swap")
    return SwapGate{static_cast<int>(require_int(o, "path", path)),
                    static_cast<int>(require_int(o, "L", path)), require_bool(o, "inverse", path)};
  if (type == "phase")
    return OamPhaseShifter{static_cast<int>(require_int(o, "path", path)),
                           require_double(o, "alpha", path), require_double(o, "beta", path)};
  throw ParseError(path + ".type", "unknown element type '" + type + "'");
}

/// Parses and validates; the stats block is recomputed from the elements.
inline HybridNetlist hybrid_from_json(const json& doc, const std::string& path = "$") {
  if (require_string(doc, "kind", path) != "hybrid")
    throw ParseError(path + ".kind", "expected \"hybrid\"");
  HybridNetlist net;
  net.n = static_cast<int>(require_int(doc, "n", path));
  net.dim = require_int(doc, "dim", path);
  net.L = static_cast<int>(require_int(doc, "L", path));
  net.original_dim = doc.contains("original_dim") ? require_int(doc, "original_dim", path) : net.dim;
  const json& elements = require_array(doc, "elements", path);
  for (std::size_t i = 0; i < elements.size(); ++i)
    net.elements.push_back(
        element_from_json(elements[i], path + ".elements[" + std::to_string(i) + "]"));
  validate(net);
  if (net.original_dim < 1 || net.original_dim > net.dim)
    throw ValidationError("original_dim must lie in [1, dim]");
  net.stats = stats_of(net);
  return net;
}

}  // namespace pathoam
