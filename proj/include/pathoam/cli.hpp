#pragma once

// Command-line front end. `run` executes one parsed command against explicit
// streams so it can be driven in-process; `main_with_args` adds the argv
// parsing used by the pathoam executable.
//
// Exit codes: 0 success, 1 verification failed, 2 bad arguments or
// unparseable input, 3 input violates a precondition (dimension, unitarity,
// padding).

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "clements.hpp"
#include "diagram.hpp"
#include "errors.hpp"
#include "hybrid.hpp"
#include "json_format.hpp"
#include "matrix.hpp"
#include "oamnet.hpp"
#include "photosim.hpp"

namespace pathoam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;

enum class Format { json, ascii };

struct CommandConfig {
  std::string command;
  std::string input_path;      // empty: read stdin
  std::string output_path;     // empty: write stdout
  std::string reference_path;  // verify only
  std::optional<std::uint64_t> seed;
  std::optional<long long> dim;
  std::optional<double> tol;
  std::optional<Format> format;
  bool no_pad = false;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"decompose", "compile-hybrid", "compile-oam", "simulate",
                                              "verify",    "stats",          "random",      "diagram"};
  return names;
}

namespace detail {

using AnyCircuit = std::variant<ClementsMesh, HybridNetlist, OamNetlist>;

inline std::string read_text(const std::string& path, std::istream& in, const std::string& what) {
  if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(what, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline json read_json(const std::string& path, std::istream& in, const std::string& what) {
  return parse_json_text(read_text(path, in, what), what);
}

inline void write_text(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("--output", "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ParseError("--output", "write to '" + path + "' failed");
}

// Meshes carry "layers"; netlists carry "kind".
inline AnyCircuit parse_circuit(const json& doc) {
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  if (doc.contains("kind")) {
    const std::string kind = require_string(doc, "kind", "$");
    if (kind == "hybrid") return hybrid_from_json(doc);
    if (kind == "oam") return oam_from_json(doc);
    throw ParseError("$.kind", "unknown netlist kind '" + kind + "'");
  }
  if (doc.contains("layers")) return mesh_from_json(doc);
  throw ParseError("$", "expected a mesh (\"layers\") or a netlist (\"kind\")");
}

inline UnitaryMatrix simulate_any(const AnyCircuit& c) {
  return std::visit(
      [](const auto& x) -> UnitaryMatrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ClementsMesh>)
          return reconstruct(x);
        else
          return simulate_netlist(x);
      },
      c);
}

inline Format format_or(const CommandConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

inline long long require_dim(const CommandConfig& cfg) {
  if (!cfg.dim) throw ParseError("--dim", "required for '" + cfg.command + "'");
  if (*cfg.dim < 1) throw DomainError("--dim must be >= 1, got " + std::to_string(*cfg.dim));
  return *cfg.dim;
}

// Pads `u` to `target` (when given) or to `rounded`, reporting on `err`.
inline UnitaryMatrix padded_input(const UnitaryMatrix& u, Index rounded, const CommandConfig& cfg,
                                  std::ostream& err) {
  const Index target = cfg.dim ? static_cast<Index>(*cfg.dim) : rounded;
  if (target == u.dim()) return u;
  if (cfg.no_pad)
    throw PreconditionError("input dim " + std::to_string(u.dim()) + " needs padding to " +
                            std::to_string(target) + " but --no-pad was given");
  UnitaryMatrix p = pad_unitary(u, target);
  err << "padded dim " << u.dim() << " to " << target << " with a " << (target - u.dim())
      << "-mode identity block\n";
  return p;
}

struct StatsRow {
  Index dim = 0;
  int n = 0;
  ElementStats s;
};

inline std::string stats_table(const std::vector<StatsRow>& rows) {
  std::ostringstream o;
  auto line = [&](auto dim, auto n, auto mzi, auto obs, auto red, auto swap, auto depth) {
    o << std::setw(5) << dim << std::setw(4) << n << std::setw(14) << mzi << std::setw(8) << obs
      << std::setw(11) << red << std::setw(7) << swap << std::setw(7) << depth << "\n";
  };
  line("dim", "n", "clements_mzi", "obs", "reduction", "swap", "depth");
  for (const auto& r : rows)
    line(r.dim, r.n, r.s.clements_mzi_count, r.s.obs_count, r.s.mzi_reduction, r.s.swap_count,
         r.s.optical_depth);
  return o.str();
}

inline json stats_json(const std::vector<StatsRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    json j = to_json(r.s);
    j["dim"] = r.dim;
    j["n"] = r.n;
    a.push_back(std::move(j));
  }
  return a;
}

inline int cmd_stats(const CommandConfig& cfg, std::istream& in, std::ostream& out) {
  const Format fmt = format_or(cfg, Format::ascii);
  std::string text;
  if (cfg.input_path.empty() && cfg.dim) {
    // Sweep every multiple of four up to --dim; counts do not depend on U.
    std::vector<StatsRow> rows;
    for (Index d = 4; d <= *cfg.dim; d += 4) {
      const HybridNetlist net = compile(decompose(haar_random_unitary(d, cfg.seed.value_or(0))));
      rows.push_back({d, net.n, net.stats});
    }
    if (rows.empty()) throw DomainError("--dim must be >= 4 for a stats sweep");
    text = fmt == Format::json ? dump_pretty(stats_json(rows)) : stats_table(rows);
  } else {
    const AnyCircuit c = parse_circuit(read_json(cfg.input_path, in, "--input"));
    if (const auto* h = std::get_if<HybridNetlist>(&c)) {
      const std::vector<StatsRow> rows{{h->dim, h->n, h->stats}};
      text = fmt == Format::json ? dump_pretty(stats_json(rows)) : stats_table(rows);
    } else if (const auto* o = std::get_if<OamNetlist>(&c)) {
      const std::vector<StatsRow> rows{{o->unit.dim, o->unit.n, o->unit.stats}};
      if (fmt == Format::json) {
        text = dump_pretty(json{{"network", to_json(o->stats)}, {"unit", stats_json(rows)[0]}});
      } else {
        std::ostringstream s;
        s << "oam network dim " << o->dim << ": spp " << o->stats.spp_count << ", sorter "
          << o->stats.sorter_count << ", swap " << o->stats.swap_count << ", obs " << o->stats.obs_count
          << "\nunit:\n"
          << stats_table(rows);
        text = s.str();
      }
    } else {
      const auto& m = std::get<ClementsMesh>(c);
      const json j{{"dim", m.dim}, {"clements_mzi_count", m.op_count()}, {"layers", m.layers.size()}};
      if (fmt == Format::json) {
        text = dump_pretty(j);
      } else {
        std::ostringstream s;
        s << "mesh dim " << m.dim << ": " << m.op_count() << " couplers in " << m.layers.size()
          << " layers\n";
        text = s.str();
      }
    }
  }
  write_text(cfg.output_path, out, text);
  return kExitOk;
}

inline int cmd_verify(const CommandConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  if (cfg.reference_path.empty()) throw ParseError("--reference", "required for 'verify'");
  const AnyCircuit c = parse_circuit(read_json(cfg.input_path, in, "--input"));
  const UnitaryMatrix ref = unitary_from_json(read_json(cfg.reference_path, in, "--reference"));

  VerificationReport report;
  if (const auto* h = std::get_if<HybridNetlist>(&c))
    report = verify(*h, ref);
  else if (const auto* o = std::get_if<OamNetlist>(&c))
    report = verify(*o, ref);
  else {
    const auto& m = std::get<ClementsMesh>(c);
    const CMatrix sim = reconstruct(m).matrix();
    if (ref.dim() != m.dim) throw DimensionError("reference dim does not match the mesh");
    report.frobenius_error = frobenius_distance(sim, ref.matrix());
    report.fidelity = std::abs((ref.matrix().adjoint() * sim).trace()) / static_cast<double>(m.dim);
    report.dim = m.dim;
    report.counts = json{{"clements_mzi_count", m.op_count()}};
  }
  const double tol = cfg.tol.value_or(1e-7 * static_cast<double>(report.dim));
  if (!(tol > 0.0)) throw DomainError("--tol must be positive");
  const bool pass = report.frobenius_error <= tol && report.laws_pass();

  json j = to_json(report);
  j["tol"] = tol;
  j["pass"] = pass;
  write_text(cfg.output_path, out, dump_pretty(j));
  if (!pass) err << "verification failed: error " << report.frobenius_error << " vs tol " << tol
                 << (report.laws_pass() ? "" : ", conformance law violated") << "\n";
  return pass ? kExitOk : kExitVerifyFailed;
}

inline int dispatch(const CommandConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  const std::string& cmd = cfg.command;
  if (cmd == "random") {
    const UnitaryMatrix u = haar_random_unitary(require_dim(cfg), cfg.seed.value_or(0));
    write_text(cfg.output_path, out, dump_pretty(to_json(u)));
    return kExitOk;
  }
  if (cmd == "decompose") {
    const UnitaryMatrix u = unitary_from_json(read_json(cfg.input_path, in, "--input"));
    write_text(cfg.output_path, out, dump_pretty(to_json(decompose(u))));
    return kExitOk;
  }
  if (cmd == "compile-hybrid") {
    const UnitaryMatrix u = unitary_from_json(read_json(cfg.input_path, in, "--input"));
    if (cfg.dim && *cfg.dim % 4 != 0)
      throw PreconditionError("--dim must be a multiple of 4 for a hybrid netlist");
    const UnitaryMatrix p = padded_input(u, next_multiple_of_four(u.dim()), cfg, err);
    HybridNetlist net = compile(decompose(p));
    net.original_dim = u.dim();
    write_text(cfg.output_path, out, dump_pretty(to_json(net)));
    return kExitOk;
  }
  if (cmd == "compile-oam") {
    const UnitaryMatrix u = unitary_from_json(read_json(cfg.input_path, in, "--input"));
    const UnitaryMatrix p = padded_input(u, next_power_of_two(u.dim()), cfg, err);
    OamNetlist net = compile_oam(p);
    net.original_dim = u.dim();
    write_text(cfg.output_path, out, dump_pretty(to_json(net)));
    return kExitOk;
  }
  if (cmd == "simulate") {
    const AnyCircuit c = parse_circuit(read_json(cfg.input_path, in, "--input"));
    write_text(cfg.output_path, out, dump_pretty(to_json(simulate_any(c))));
    return kExitOk;
  }
  if (cmd == "verify") return cmd_verify(cfg, in, out, err);
  if (cmd == "stats") return cmd_stats(cfg, in, out);
  if (cmd == "diagram") {
    if (format_or(cfg, Format::ascii) != Format::ascii)
      throw ParseError("--format", "diagram renders ascii only");
    const AnyCircuit c = parse_circuit(read_json(cfg.input_path, in, "--input"));
    write_text(cfg.output_path, out, std::visit([](const auto& x) { return render_diagram(x); }, c));
    return kExitOk;
  }
  throw ParseError("command", "unknown command '" + cmd + "'");
}

}  // namespace detail

/// Runs one command. Library errors become exit codes with a one-line
/// diagnostic on `err`.
inline int run(const CommandConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    return detail::dispatch(cfg, in, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

inline int run(const CommandConfig& cfg) { return run(cfg, std::cin, std::cout, std::cerr); }

/// argv parsing plus `run`.
inline int main_with_args(int argc, const char* const* argv, std::istream& in, std::ostream& out,
                          std::ostream& err) {
  CLI::App app{"Compile and verify path-OAM hybrid and pure-OAM photonic netlists", "pathoam"};
  app.require_subcommand(1);

  CommandConfig cfg;
  std::string format;
  const std::vector<std::pair<std::string, std::string>> help{
      {"decompose", "Unitary JSON -> rectangular coupler mesh JSON"},
      {"compile-hybrid", "Unitary JSON -> path-OAM hybrid netlist JSON (pads to a multiple of 4)"},
      {"compile-oam", "Unitary JSON -> pure OAM netlist JSON (pads to a power of two >= 4)"},
      {"simulate", "Mesh or netlist JSON -> unitary JSON"},
      {"verify", "Netlist JSON + reference unitary -> verification report"},
      {"stats", "Element counts of a netlist, or a sweep up to --dim"},
      {"random", "Haar-random unitary JSON"},
      {"diagram", "ASCII layout of a mesh or netlist"}};
  for (const auto& [name, desc] : help) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-i,--input", cfg.input_path, "Input JSON (default stdin)");
    sub->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");
    if (name == "verify") sub->add_option("-r,--reference", cfg.reference_path, "Reference unitary JSON");
    if (name == "random" || name == "stats") sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    if (name == "random" || name == "stats" || name == "compile-hybrid" || name == "compile-oam")
      sub->add_option("--dim", cfg.dim, "Dimension (target dim when compiling)");
    if (name == "verify") sub->add_option("--tol", cfg.tol, "Frobenius tolerance (default 1e-7*dim)");
    if (name == "compile-hybrid" || name == "compile-oam")
      sub->add_flag("--no-pad", cfg.no_pad, "Fail instead of padding");
    sub->add_option("--format", format, "json or ascii")->check(CLI::IsMember({"json", "ascii"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (!format.empty()) cfg.format = format == "json" ? Format::json : Format::ascii;
  return run(cfg, in, out, err);
}

}  // namespace pathoam::cli
