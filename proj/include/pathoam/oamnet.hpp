#pragma once

// Unitaries on the pure OAM space {|1⟩, …, |2ⁿ⟩}. A cascade of OAM sorters
// sends |ℓ⟩ to path (ℓ−1) mod 2^{n−1}; a spiral phase plate on path i then
// shifts the pair {i+1, i+1+2^{n−1}} onto {−2^{n−2}, +2^{n−2}}, where a hybrid
// unit with L = 2^{n−2} does the work. A mirrored stage undoes the mapping.

#include <bit>
#include <string>
#include <utility>
#include <vector>

#include "clements.hpp"
#include "errors.hpp"
#include "hybrid.hpp"
#include "json_format.hpp"
#include "matrix.hpp"
#include "sim_basis.hpp"

namespace pathoam {

/// One OAM sorter. Input beams on `input_path` hold (ℓ−1) ≡ input_path
/// (mod modulus/2); the sorter splits them by (ℓ−1) mod modulus.
struct SorterNode {
  int stage = 1;
  int input_path = 0;
  std::pair<int, int> output_paths{0, 1};
  int modulus = 2;
  bool operator==(const SorterNode&) const = default;
};

enum class SppSide { input, output };

struct SppElement {
  int path = 0;
  int shift = 0;
  SppSide position = SppSide::input;
  bool operator==(const SppElement&) const = default;
};

struct OamStats {
  long long spp_count = 0;
  long long sorter_count = 0;
  long long swap_count = 0;
  long long obs_count = 0;
  bool operator==(const OamStats&) const = default;
};

struct OamNetlist {
  int n = 0;
  Index dim = 0;
  Index original_dim = 0;
  std::vector<SorterNode> interface_in;
  std::vector<SppElement> spp_in;
  HybridNetlist unit;
  std::vector<SppElement> spp_out;
  std::vector<SorterNode> interface_out;
  OamStats stats;
};

inline int oam_path_count(int n) { return 1 << (n - 1); }
inline int oam_unit_L(int n) { return 1 << (n - 2); }

/// Path the interface delivers |ℓ⟩ to.
inline int interface_route(int n, int ell) {
  if (n < 1 || n > 30) throw DomainError("n out of range");
  if (ell < 1 || ell > (1 << n))
    throw DomainError("OAM " + std::to_string(ell) + " outside 1.." + std::to_string(1 << n));
  return (ell - 1) % oam_path_count(n);
}

/// Output port of a sorter for OAM ℓ arriving on its input path.
inline int sorter_route(const SorterNode& node, int ell) {
  const int half = node.modulus / 2;
  const int residue = ((ell - 1) % node.modulus + node.modulus) % node.modulus;
  if (residue % half != node.input_path % half)
    throw BasisError("OAM " + std::to_string(ell) + " cannot reach the stage-" +
                     std::to_string(node.stage) + " sorter on path " +
                     std::to_string(node.input_path));
  return residue < half ? node.output_paths.first : node.output_paths.second;
}

/// Stage s holds 2^{s−1} sorters; the one fed by path r splits it into r and
/// r + 2^{s−1}.
inline std::vector<SorterNode> build_interface(int n) {
  if (n < 2) throw DomainError("an OAM-to-path interface needs n >= 2");
  std::vector<SorterNode> nodes;
  for (int s = 1; s <= n - 1; ++s) {
    const int half = 1 << (s - 1);
    for (int r = 0; r < half; ++r) nodes.push_back(SorterNode{s, r, {r, r + half}, 1 << s});
  }
  return nodes;
}

/// Combining stage: same sorters traversed from the last stage back.
inline std::vector<SorterNode> mirror_interface(const std::vector<SorterNode>& nodes) {
  return {nodes.rbegin(), nodes.rend()};
}

/// Follows ℓ through the sorter tree starting on path 0.
inline int route_through(const std::vector<SorterNode>& nodes, int ell) {
  int path = 0;
  int routed_stage = 0;
  int prev_stage = 0;
  for (const auto& node : nodes) {
    if (node.stage < prev_stage) throw ValidationError("sorter stages must not decrease");
    prev_stage = node.stage;
    if (node.stage == routed_stage || node.input_path != path) continue;
    path = sorter_route(node, ell);
    routed_stage = node.stage;
  }
  return path;
}

inline std::vector<SppElement> build_spps(int n, SppSide side) {
  std::vector<SppElement> spps;
  const int sign = side == SppSide::input ? -1 : 1;
  for (int i = 0; i < oam_path_count(n); ++i)
    spps.push_back(SppElement{i, sign * (oam_unit_L(n) + i + 1), side});
  return spps;
}

/// Shifts ℓ by `shift` on the SPP's path. The output basis is the sorted image.
inline Transfer spp_matrix(const SppElement& spp, const SimBasis& basis) {
  return relabel_transfer(basis, [&](ModeLabel l) {
    if (l.path == spp.path) l.ell += spp.shift;
    return l;
  });
}

/// Forward: splits beams on the input path. Combining: merges both output
/// paths onto the input path.
inline Transfer sorter_matrix(const SorterNode& node, const SimBasis& basis, bool combine) {
  return relabel_transfer(basis, [&](ModeLabel l) {
    if (!combine && l.path == node.input_path) {
      l.path = sorter_route(node, l.ell);
    } else if (combine && (l.path == node.output_paths.first || l.path == node.output_paths.second)) {
      if (sorter_route(node, l.ell) != l.path)
        throw BasisError("OAM " + std::to_string(l.ell) + " on path " + std::to_string(l.path) +
                         " does not belong to that sorter port");
      l.path = node.input_path;
    }
    return l;
  });
}

/// Label of |ℓ⟩ after the input interface and SPPs.
inline ModeLabel unit_label_of_oam(int n, int ell) {
  const int path = interface_route(n, ell);
  return ModeLabel{path, ell - (oam_unit_L(n) + path + 1)};
}

/// P with P(q, ℓ−1) = 1 when |ℓ⟩ enters the unit as logical mode q.
inline CMatrix oam_to_logical_permutation(int n) {
  const LogicalEncoding enc(oam_path_count(n) / 2, oam_unit_L(n));
  const Index dim = Index{1} << n;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (int ell = 1; ell <= dim; ++ell) p(enc.logical_of(unit_label_of_oam(n, ell)), ell - 1) = 1.0;
  return p;
}

inline OamStats stats_of(const OamNetlist& net) {
  const ElementStats unit = stats_of(net.unit);
  return OamStats{static_cast<long long>(net.spp_in.size() + net.spp_out.size()),
                  static_cast<long long>(net.interface_in.size() + net.interface_out.size()),
                  unit.swap_count, unit.obs_count};
}

inline int oam_order(Index dim) {
  if (dim < 4 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
    throw PreconditionError("OAM compile needs a power-of-two dim >= 4, got " +
                            std::to_string(dim) + "; pad the unitary first (pad_unitary)");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

inline Index next_power_of_two(Index dim) {
  return std::max<Index>(4, static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(dim))));
}

inline OamNetlist compile_oam(const UnitaryMatrix& u) {
  const int n = oam_order(u.dim());
  const CMatrix p = oam_to_logical_permutation(n);
  const auto unit_target = UnitaryMatrix::from_matrix(p * u.matrix() * p.transpose());

  OamNetlist net;
  net.n = n;
  net.dim = u.dim();
  net.original_dim = u.dim();
  net.interface_in = build_interface(n);
  net.spp_in = build_spps(n, SppSide::input);
  net.unit = compile(decompose(unit_target), oam_unit_L(n));
  net.spp_out = build_spps(n, SppSide::output);
  net.interface_out = mirror_interface(net.interface_in);
  net.stats = stats_of(net);
  return net;
}

/// Structural checks on a parsed or hand-built network.
inline void validate(const OamNetlist& net) {
  if (net.n < 2 || net.dim != (Index{1} << net.n))
    throw ValidationError("OAM netlist needs n >= 2 and dim = 2^n");
  validate(net.unit);
  if (net.unit.dim != net.dim || net.unit.L != oam_unit_L(net.n))
    throw ValidationError("unit must have dim 2^n and L = 2^(n-2)");
  if (net.original_dim < 1 || net.original_dim > net.dim)
    throw ValidationError("original_dim must lie in [1, dim]");
  for (const auto& s : net.spp_in)
    if (s.position != SppSide::input) throw ValidationError("spp_in holds an output-side plate");
  for (const auto& s : net.spp_out)
    if (s.position != SppSide::output) throw ValidationError("spp_out holds an input-side plate");
  for (const auto* nodes : {&net.interface_in, &net.interface_out})
    for (const auto& node : *nodes)
      if (node.modulus < 2 || node.modulus % 2 != 0)
        throw ValidationError("sorter modulus must be an even number >= 2");
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const SorterNode& s) {
  return json{{"stage", s.stage},
              {"input_path", s.input_path},
              {"output_paths", {s.output_paths.first, s.output_paths.second}},
              {"modulus", s.modulus}};
}

inline json to_json(const SppElement& s) {
  return json{{"path", s.path},
              {"shift", s.shift},
              {"position", s.position == SppSide::input ? "input" : "output"}};
}

inline json to_json(const OamStats& s) {
  return json{{"spp_count", s.spp_count},
              {"sorter_count", s.sorter_count},
              {"swap_count", s.swap_count},
              {"obs_count", s.obs_count}};
}

inline json to_json(const OamNetlist& net) {
  auto list = [](const auto& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
  };
  return json{{"kind", "oam"},
              {"n", net.n},
              {"dim", net.dim},
              {"original_dim", net.original_dim},
              {"interface_in", list(net.interface_in)},
              {"spp_in", list(net.spp_in)},
              {"unit", to_json(net.unit)},
              {"spp_out", list(net.spp_out)},
              {"interface_out", list(net.interface_out)},
              {"stats", to_json(net.stats)}};
}

inline SorterNode sorter_from_json(const json& o, const std::string& path) {
  SorterNode s;
  s.stage = static_cast<int>(require_int(o, "stage", path));
  s.input_path = static_cast<int>(require_int(o, "input_path", path));
  const json& outs = require_array(o, "output_paths", path);
  if (outs.size() != 2 || !outs[0].is_number_integer() || !outs[1].is_number_integer())
    throw ParseError(path + ".output_paths", "expected two integers");
  s.output_paths = {outs[0].get<int>(), outs[1].get<int>()};
  s.modulus = static_cast<int>(require_int(o, "modulus", path));
  return s;
}

inline SppElement spp_from_json(const json& o, const std::string& path) {
  SppElement s;
  s.path = static_cast<int>(require_int(o, "path", path));
  s.shift = static_cast<int>(require_int(o, "shift", path));
  const std::string pos = require_string(o, "position", path);
  if (pos == "input")
    s.position = SppSide::input;
  else if (pos == "output")
    s.position = SppSide::output;
  else
    throw ParseError(path + ".position", "expected \"input\" or \"output\"");
  return s;
}

inline OamNetlist oam_from_json(const json& doc, const std::string& path = "$") {
  if (require_string(doc, "kind", path) != "oam") throw ParseError(path + ".kind", "expected \"oam\"");
  OamNetlist net;
  net.n = static_cast<int>(require_int(doc, "n", path));
  net.dim = require_int(doc, "dim", path);
  net.original_dim = doc.contains("original_dim") ? require_int(doc, "original_dim", path) : net.dim;
  auto read_list = [&](const char* key, auto parse, auto& out) {
    const json& arr = require_array(doc, key, path);
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(parse(arr[i], path + "." + key + "[" + std::to_string(i) + "]"));
  };
  read_list("interface_in", sorter_from_json, net.interface_in);
  read_list("spp_in", spp_from_json, net.spp_in);
  net.unit = hybrid_from_json(require_field(doc, "unit", path), path + ".unit");
  read_list("spp_out", spp_from_json, net.spp_out);
  read_list("interface_out", sorter_from_json, net.interface_out);
  validate(net);
  net.stats = stats_of(net);
  return net;
}

}  // namespace pathoam
