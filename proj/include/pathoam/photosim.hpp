#pragma once

// Netlist simulation and verification. Two independent routes are provided
// for hybrid netlists: the ordered product of full element matrices, and
// element-by-element propagation of state vectors.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "hybrid.hpp"
#include "json_format.hpp"
#include "matrix.hpp"
#include "oamnet.hpp"
#include "sim_basis.hpp"

namespace pathoam {

inline SimBasis simulation_basis(const HybridNetlist& net) {
  return SimBasis::hybrid(LogicalEncoding(net.n, net.L));
}

/// Full-basis matrix of one element; identity on labels it does not touch.
inline CMatrix element_matrix(const HybridElement& element, const SimBasis& basis) {
  CMatrix m = CMatrix::Identity(basis.dim(), basis.dim());
  if (const auto* obs = std::get_if<ObsParams>(&element)) {
    bool touched = false;
    for (Index i = 0; i < basis.dim(); ++i) {
      const ModeLabel a = basis[i];
      if (a.path != obs->path_a) continue;
      const Index j = basis.index_of({obs->path_b, a.ell});
      const ObsAngles ang = obs_forward(*obs, a.ell);
      const Eigen::Matrix2cd r = splitter_block(ang.theta, ang.phi);
      m(i, i) = r(0, 0);
      m(i, j) = r(0, 1);
      m(j, i) = r(1, 0);
      m(j, j) = r(1, 1);
      touched = true;
    }
    for (Index i = 0; i < basis.dim(); ++i)
      if (basis[i].path == obs->path_b && !basis.find({obs->path_a, basis[i].ell}))
        throw BasisError("OBS partner of " + to_string(basis[i]) + " missing from basis");
    if (!touched)
      throw BasisError("OBS on paths " + std::to_string(obs->path_a) + "," +
                       std::to_string(obs->path_b) + " touches no basis label");
  } else if (const auto* sw = std::get_if<SwapGate>(&element)) {
    const Index i = basis.index_of({sw->path, sw->L});
    const Index j = basis.index_of({sw->path, -sw->L});
    m(i, i) = m(j, j) = 0.0;
    m(i, j) = m(j, i) = 1.0;
  } else {
    const auto& ps = std::get<OamPhaseShifter>(element);
    bool touched = false;
    for (Index i = 0; i < basis.dim(); ++i)
      if (basis[i].path == ps.path) {
        m(i, i) = std::polar(1.0, detail::outer_phase(ps.alpha, ps.beta, basis[i].ell));
        touched = true;
      }
    if (!touched) throw BasisError("phase shifter path " + std::to_string(ps.path) + " not in basis");
  }
  return m;
}

/// E_K ··· E_1 over a given basis.
inline CMatrix element_product(const std::vector<HybridElement>& elements, const SimBasis& basis) {
  CMatrix u = CMatrix::Identity(basis.dim(), basis.dim());
  for (const auto& e : elements) u = element_matrix(e, basis) * u;
  return u;
}

/// Matrix of the netlist in logical order.
inline UnitaryMatrix simulate_netlist(const HybridNetlist& net) {
  validate(net);
  CMatrix u = element_product(net.elements, simulation_basis(net));
  return UnitaryMatrix::from_matrix(std::move(u), 1e-10 * static_cast<double>(net.dim));
}

/// Pushes one state through the elements without forming any operator.
inline CVector propagate_state(const HybridNetlist& net, CVector psi) {
  const SimBasis basis = simulation_basis(net);
  if (psi.size() != basis.dim()) throw DimensionError("state has the wrong dimension");
  for (const auto& e : net.elements) {
    if (const auto* obs = std::get_if<ObsParams>(&e)) {
      for (const int ell : {net.L, -net.L}) {
        const Index i = basis.index_of({obs->path_a, ell});
        const Index j = basis.index_of({obs->path_b, ell});
        const ObsAngles ang = obs_forward(*obs, ell);
        const Complex x = psi(i);
        const Complex y = psi(j);
        const Complex e_phi = std::polar(1.0, ang.phi);
        const double c = std::cos(ang.theta);
        const double s = std::sin(ang.theta);
        psi(i) = e_phi * c * x - s * y;
        psi(j) = e_phi * s * x + c * y;
      }
    } else if (const auto* sw = std::get_if<SwapGate>(&e)) {
      std::swap(psi(basis.index_of({sw->path, sw->L})), psi(basis.index_of({sw->path, -sw->L})));
    } else {
      const auto& ps = std::get<OamPhaseShifter>(e);
      for (const int ell : {net.L, -net.L})
        psi(basis.index_of({ps.path, ell})) *= std::polar(1.0, ps.alpha + 2.0 * ps.beta * ell);
    }
  }
  return psi;
}

/// Column j is the propagated basis vector e_j.
inline CMatrix propagate_columns(const HybridNetlist& net) {
  validate(net);
  CMatrix out(net.dim, net.dim);
  for (Index j = 0; j < net.dim; ++j)
    out.col(j) = propagate_state(net, CVector::Unit(net.dim, j));
  return out;
}

// ---------------------------------------------------------------------------
// Pure OAM networks

/// Basis of the OAM input port: |0, ℓ⟩ for ℓ = 1 … 2ⁿ.
inline SimBasis oam_port_basis(int n) {
  std::vector<ModeLabel> labels;
  for (int ell = 1; ell <= (1 << n); ++ell) labels.push_back({0, ell});
  return SimBasis(std::move(labels));
}

namespace detail {

struct OamStage {
  CMatrix op;
  SimBasis basis;
};

inline void apply(OamStage& st, const Transfer& t) {
  st.op = t.matrix * st.op;
  st.basis = t.output;
}

// Input interface and SPPs. The returned basis lists the labels reaching the
// unit.
inline OamStage run_input_side(const OamNetlist& net) {
  OamStage st{CMatrix::Identity(net.dim, net.dim), oam_port_basis(net.n)};
  for (const auto& node : net.interface_in) apply(st, sorter_matrix(node, st.basis, false));
  for (const auto& spp : net.spp_in) apply(st, spp_matrix(spp, st.basis));
  return st;
}

}  // namespace detail

/// Labels on each path right after the input-side plates.
inline SimBasis unit_entry_basis(const OamNetlist& net) { return detail::run_input_side(net).basis; }

/// Matrix of the whole network in OAM order (row/column j ↔ ℓ = j + 1).
inline UnitaryMatrix simulate_netlist(const OamNetlist& net) {
  validate(net);
  detail::OamStage st = detail::run_input_side(net);

  // Enter the unit's logical ordering, apply it, and come back.
  const SimBasis logical = simulation_basis(net.unit);
  CMatrix to_logical = CMatrix::Zero(net.dim, net.dim);
  for (Index i = 0; i < st.basis.dim(); ++i) to_logical(logical.index_of(st.basis[i]), i) = 1.0;
  const CMatrix unit = element_product(net.unit.elements, logical);
  st.op = to_logical.transpose() * unit * to_logical * st.op;

  for (const auto& spp : net.spp_out) apply(st, spp_matrix(spp, st.basis));
  for (const auto& node : net.interface_out) apply(st, sorter_matrix(node, st.basis, true));
  if (!(st.basis == oam_port_basis(net.n)))
    throw BasisError("output stage does not recombine every OAM onto the output port");
  return UnitaryMatrix::from_matrix(std::move(st.op), 1e-10 * static_cast<double>(net.dim));
}

// ---------------------------------------------------------------------------
// Verification

struct ConformanceRow {
  std::string law;
  long long expected = 0;
  long long actual = 0;
  bool pass = false;
};

struct VerificationReport {
  double frobenius_error = 0.0;
  double fidelity = 0.0;
  json counts;
  std::vector<ConformanceRow> conformance;
  Index dim = 0;

  bool laws_pass() const {
    for (const auto& row : conformance)
      if (!row.pass) return false;
    return true;
  }
};

inline ConformanceRow law(std::string name, long long expected, long long actual) {
  return ConformanceRow{std::move(name), expected, actual, expected == actual};
}

/// Count laws for a 4n-dimensional hybrid netlist.
inline std::vector<ConformanceRow> hybrid_laws(long long n, const ElementStats& s) {
  std::vector<ConformanceRow> rows{
      law("obs_count = 6n^2 - 2n", 6 * n * n - 2 * n, s.obs_count),
      law("swap_count = 4n^2", 4 * n * n, s.swap_count),
      law("clements_mzi_count = 2n(4n - 1)", 2 * n * (4 * n - 1), s.clements_mzi_count),
      law("mzi_reduction = 2n^2", 2 * n * n, s.mzi_reduction),
      law("phase_count = 2n", 2 * n, s.phase_count)};
  if (n >= 2)
    rows.push_back(law("optical_depth = 6n", 6 * n, s.optical_depth));
  else
    rows.push_back(law("optical_depth = 4 (n = 1)", 4, s.optical_depth));
  return rows;
}

/// Element-count laws for a 2ⁿ-dimensional OAM network.
inline std::vector<ConformanceRow> oam_laws(long long n, const OamStats& s) {
  const long long p = 1LL << n;
  return {law("spp_count = 2^n", p, s.spp_count),
          law("sorter_count = 2^n - 2", p - 2, s.sorter_count),
          law("swap_count = 2^(2n-2)", 1LL << (2 * n - 2), s.swap_count),
          law("obs_count = 3*2^(2n-3) - 2^(n-1)", 3 * (1LL << (2 * n - 3)) - (1LL << (n - 1)),
              s.obs_count)};
}

namespace detail {

// Reference of the original dimension is compared against its padded form.
inline CMatrix aligned_reference(const UnitaryMatrix& reference, Index net_dim, Index original_dim) {
  if (reference.dim() == net_dim) return reference.matrix();
  if (reference.dim() == original_dim) return pad_unitary(reference, net_dim).matrix();
  throw DimensionError("reference dim " + std::to_string(reference.dim()) +
                       " matches neither the netlist dim " + std::to_string(net_dim) +
                       " nor its unpadded dim " + std::to_string(original_dim));
}

inline void fill_errors(VerificationReport& r, const CMatrix& sim, const CMatrix& ref) {
  r.frobenius_error = frobenius_distance(sim, ref);
  r.fidelity = std::abs((ref.adjoint() * sim).trace()) / static_cast<double>(ref.rows());
  r.dim = ref.rows();
}

}  // namespace detail

inline VerificationReport verify(const HybridNetlist& net, const UnitaryMatrix& reference) {
  VerificationReport r;
  const CMatrix ref = detail::aligned_reference(reference, net.dim, net.original_dim);
  detail::fill_errors(r, simulate_netlist(net).matrix(), ref);
  const ElementStats s = stats_of(net);
  r.counts = to_json(s);
  r.conformance = hybrid_laws(net.n, s);
  return r;
}

inline VerificationReport verify(const OamNetlist& net, const UnitaryMatrix& reference) {
  VerificationReport r;
  const CMatrix ref = detail::aligned_reference(reference, net.dim, net.original_dim);
  detail::fill_errors(r, simulate_netlist(net).matrix(), ref);
  const OamStats s = stats_of(net);
  r.counts = to_json(s);
  r.conformance = oam_laws(net.n, s);
  for (auto& row : hybrid_laws(net.unit.n, stats_of(net.unit))) {
    row.law = "unit " + row.law;
    r.conformance.push_back(std::move(row));
  }
  return r;
}

inline json to_json(const VerificationReport& r) {
  json rows = json::array();
  for (const auto& row : r.conformance)
    rows.push_back({{"law", row.law}, {"expected", row.expected}, {"actual", row.actual}, {"pass", row.pass}});
  return json{{"frobenius_error", r.frobenius_error},
              {"fidelity", r.fidelity},
              {"counts", r.counts},
              {"conformance", std::move(rows)},
              {"dim", r.dim}};
}

}  // namespace pathoam
