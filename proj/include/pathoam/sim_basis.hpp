#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hybrid.hpp"
#include "matrix.hpp"

namespace pathoam {

inline std::string to_string(ModeLabel l) {
  return "(" + std::to_string(l.path) + ", " + std::to_string(l.ell) + ")";
}

/// Ordered list of |path, ℓ⟩ labels giving the meaning of matrix rows/columns.
class SimBasis {
 public:
  SimBasis() = default;
  explicit SimBasis(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw BasisError("basis labels are not unique");
  }

  /// Logical order of the hybrid encoding.
  static SimBasis hybrid(const LogicalEncoding& enc) {
    std::vector<ModeLabel> labels;
    for (Index q = 0; q < enc.dim(); ++q) labels.push_back(enc.label_of(q));
    return SimBasis(std::move(labels));
  }

  Index dim() const { return static_cast<Index>(labels_.size()); }
  const std::vector<ModeLabel>& labels() const { return labels_; }
  const ModeLabel& operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  std::optional<Index> find(ModeLabel l) const {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<Index>(it - labels_.begin());
  }

  Index index_of(ModeLabel l) const {
    if (auto i = find(l)) return *i;
    throw BasisError("label " + to_string(l) + " is not in the simulation basis");
  }

  bool operator==(const SimBasis&) const = default;

 private:
  std::vector<ModeLabel> labels_;
};

/// An operator that may relabel modes: `matrix` maps amplitudes over the
/// input basis onto amplitudes over `output`.
struct Transfer {
  CMatrix matrix;
  SimBasis output;
};

/// Applies `relabel` to every label and returns the permutation onto the
/// sorted image. Colliding images raise BasisError.
template <class F>
Transfer relabel_transfer(const SimBasis& in, F&& relabel) {
  std::vector<ModeLabel> image;
  image.reserve(in.labels().size());
  for (const auto& l : in.labels()) image.push_back(relabel(l));
  std::vector<ModeLabel> sorted = image;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
    throw BasisError("relabeling maps two modes onto " + to_string(*it));
  Transfer t{CMatrix::Zero(in.dim(), in.dim()), SimBasis(sorted)};
  for (Index i = 0; i < in.dim(); ++i) t.matrix(t.output.index_of(image[i]), i) = 1.0;
  return t;
}

}  // namespace pathoam
