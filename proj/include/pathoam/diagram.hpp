#pragma once

// ASCII layouts: one horizontal line per mode or path, one column per group
// of non-overlapping elements. Couplers draw as X with a vertical bar to
// their partner line; S / S' are OAM swaps; P a phase shifter; Y a sorter;
// [+k] a spiral phase plate.

#include <algorithm>
#include <string>
#include <vector>

#include "clements.hpp"
#include "hybrid.hpp"
#include "oamnet.hpp"

namespace pathoam {

class AsciiCanvas {
 public:
  explicit AsciiCanvas(std::vector<std::string> row_labels)
      : labels_(std::move(row_labels)),
        lines_(labels_.size()),
        gaps_(labels_.size() > 0 ? labels_.size() - 1 : 0),
        active_(labels_.size(), true) {}

  std::size_t rows() const { return labels_.size(); }
  void set_active(std::size_t row, bool on) { active_[row] = on; }

  /// cells[r] empty means a plain wire (or nothing on an inactive row);
  /// links[r] draws a bar between rows r and r+1. edges[r] = +1 starts the
  /// wire at the glyph, -1 ends it there.
  void add_column(const std::vector<std::string>& cells, const std::vector<bool>& links,
                  const std::vector<int>& edges = {}) {
    std::size_t width = 1;
    for (const auto& c : cells) width = std::max(width, c.size());
    width += 4;
    for (std::size_t r = 0; r < rows(); ++r) {
      const std::string& c = cells[r];
      const int edge = edges.empty() ? 0 : edges[r];
      const char fill = active_[r] ? '-' : ' ';
      const char lfill = edge > 0 ? ' ' : edge < 0 ? '-' : fill;
      const char rfill = edge > 0 ? '-' : edge < 0 ? ' ' : fill;
      const std::size_t left = (width - c.size()) / 2;
      lines_[r] += std::string(left, lfill) + c + std::string(width - left - c.size(), rfill);
    }
    for (std::size_t r = 0; r + 1 < rows(); ++r) {
      std::string g(width, ' ');
      if (links[r]) g[width / 2] = '|';
      gaps_[r] += g;
    }
  }

  std::string render() const {
    std::size_t label_width = 0;
    for (const auto& l : labels_) label_width = std::max(label_width, l.size());
    std::string out;
    for (std::size_t r = 0; r < rows(); ++r) {
      out += labels_[r] + std::string(label_width - labels_[r].size(), ' ') + " " + lines_[r] + "\n";
      if (r + 1 < rows()) {
        std::string gap = std::string(label_width + 1, ' ') + gaps_[r];
        gap.erase(gap.find_last_not_of(' ') + 1);
        out += gap + "\n";
      }
    }
    return out;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> lines_;
  std::vector<std::string> gaps_;
  std::vector<bool> active_;
};

namespace detail {

// Greedy packing that keeps element order on every line.
class ColumnPacker {
 public:
  explicit ColumnPacker(AsciiCanvas& canvas) : canvas_(canvas) { reset(); }

  void place(std::size_t lo, std::size_t hi, const std::string& glyph_lo,
             const std::string& glyph_hi = "") {
    for (std::size_t r = lo; r <= hi; ++r)
      if (used_[r]) {
        flush();
        break;
      }
    cells_[lo] = glyph_lo;
    if (hi != lo) cells_[hi] = glyph_hi;
    for (std::size_t r = lo; r <= hi; ++r) used_[r] = true;
    for (std::size_t r = lo; r < hi; ++r) links_[r] = true;
    dirty_ = true;
  }

  void flush() {
    if (dirty_) canvas_.add_column(cells_, links_);
    reset();
  }

 private:
  void reset() {
    cells_.assign(canvas_.rows(), "");
    links_.assign(canvas_.rows(), false);
    used_.assign(canvas_.rows(), false);
    dirty_ = false;
  }

  AsciiCanvas& canvas_;
  std::vector<std::string> cells_;
  std::vector<bool> links_;
  std::vector<bool> used_;
  bool dirty_ = false;
};

inline void draw_hybrid_elements(const HybridNetlist& net, AsciiCanvas& canvas) {
  ColumnPacker pack(canvas);
  for (const auto& e : net.elements) {
    if (const auto* obs = std::get_if<ObsParams>(&e))
      pack.place(static_cast<std::size_t>(obs->path_a), static_cast<std::size_t>(obs->path_b), "X", "X");
    else if (const auto* sw = std::get_if<SwapGate>(&e))
      pack.place(static_cast<std::size_t>(sw->path), static_cast<std::size_t>(sw->path),
                 sw->inverse ? "S'" : "S");
    else {
      const auto p = static_cast<std::size_t>(std::get<OamPhaseShifter>(e).path);
      pack.place(p, p, "P");
    }
  }
  pack.flush();
}

inline std::vector<std::string> numbered(const char* prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace detail

inline std::string render_diagram(const ClementsMesh& mesh) {
  AsciiCanvas canvas(detail::numbered("m", static_cast<int>(mesh.dim)));
  detail::ColumnPacker pack(canvas);
  for (const auto& layer : mesh.layers) {
    for (const auto& op : layer)
      pack.place(static_cast<std::size_t>(op.m), static_cast<std::size_t>(op.m) + 1, "X", "X");
    pack.flush();
  }
  canvas.add_column(std::vector<std::string>(canvas.rows(), "D"),
                    std::vector<bool>(canvas.rows(), false));
  return canvas.render();
}

inline std::string render_diagram(const HybridNetlist& net) {
  AsciiCanvas canvas(detail::numbered("p", net.path_count()));
  detail::draw_hybrid_elements(net, canvas);
  return canvas.render();
}

inline std::string render_diagram(const OamNetlist& net) {
  const int paths = oam_path_count(net.n);
  AsciiCanvas canvas(detail::numbered("p", paths));
  const std::vector<bool> no_links(canvas.rows(), false);
  auto blank = [&] { return std::vector<std::string>(canvas.rows(), ""); };

  for (std::size_t r = 1; r < canvas.rows(); ++r) canvas.set_active(r, false);
  int stage = 0;
  std::vector<std::string> cells = blank();
  std::vector<bool> links = no_links;
  std::vector<int> edges(canvas.rows(), 0);
  auto flush_stage = [&] {
    if (stage == 0) return;
    canvas.add_column(cells, links, edges);
    cells = blank();
    links = no_links;
    edges.assign(canvas.rows(), 0);
  };
  // Splitting tree; the branch line lights up after its sorter.
  std::vector<std::size_t> lit;
  for (const auto& node : net.interface_in) {
    if (node.stage != stage) {
      flush_stage();
      for (auto r : lit) canvas.set_active(r, true);
      lit.clear();
      stage = node.stage;
    }
    const auto a = static_cast<std::size_t>(node.output_paths.first);
    const auto b = static_cast<std::size_t>(node.output_paths.second);
    cells[a] = "Y";
    cells[b] = "\\";
    edges[b] = 1;
    for (std::size_t r = std::min(a, b); r < std::max(a, b); ++r) links[r] = true;
    lit.push_back(b);
  }
  flush_stage();
  for (auto r : lit) canvas.set_active(r, true);

  cells = blank();
  for (const auto& s : net.spp_in)
    cells[static_cast<std::size_t>(s.path)] = "[" + std::to_string(s.shift) + "]";
  canvas.add_column(cells, no_links);
  canvas.add_column(std::vector<std::string>(canvas.rows(), "|"), no_links);
  detail::draw_hybrid_elements(net.unit, canvas);
  canvas.add_column(std::vector<std::string>(canvas.rows(), "|"), no_links);
  cells = blank();
  for (const auto& s : net.spp_out)
    cells[static_cast<std::size_t>(s.path)] = "[+" + std::to_string(s.shift) + "]";
  canvas.add_column(cells, no_links);

  // Combining tree, last stage first; the merged-away line goes dark.
  stage = 0;
  cells = blank();
  links = no_links;
  std::vector<std::size_t> dark;
  for (const auto& node : net.interface_out) {
    if (node.stage != stage) {
      flush_stage();
      for (auto r : dark) canvas.set_active(r, false);
      dark.clear();
      stage = node.stage;
    }
    const auto a = static_cast<std::size_t>(node.output_paths.first);
    const auto b = static_cast<std::size_t>(node.output_paths.second);
    cells[a] = "Y";
    cells[b] = "/";
    edges[b] = -1;
    for (std::size_t r = std::min(a, b); r < std::max(a, b); ++r) links[r] = true;
    dark.push_back(b);
  }
  flush_stage();
  for (auto r : dark) canvas.set_active(r, false);
  canvas.add_column(blank(), no_links);
  return canvas.render();
}

}  // namespace pathoam
