#pragma once

// Exact domain model: discrete necklaces, piecewise-constant grid colorings,
// axis-aligned splittings and their fairness evaluation.
//
// Conventions: axes are 0-based in the C++ API (files and the CLI use
// 1-based axes); colors are 1..k with color 1 the "white" background of
// adversarial constructions; part labels are 1..q. Cells and pieces are
// indexed lexicographically with axis 0 most significant.

#include <cstdint>
#include <span>
#include <vector>

#include "necklace/rational.hpp"

namespace necklace {

using ColorId = int;

/// Axis-aligned cuboid [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}].
struct Box {
  RatVec lo;
  RatVec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Rat volume() const;
  Rat extent(int axis) const { return hi[axis] - lo[axis]; }
  bool contains(const Box& inner) const;
  bool operator==(const Box&) const = default;
};

/// Axis-aligned cube with a corner and a positive side length.
struct NecklaceBox {
  RatVec corner;
  Rat side;

  /// Throws InputError if side <= 0.
  NecklaceBox(RatVec corner, Rat side);
  Box to_box() const;
};

struct AxisCut {
  int axis = 0;
  Rat at;

  auto operator<=>(const AxisCut& other) const {
    if (axis != other.axis) return axis <=> other.axis;
    if (at < other.at) return std::strong_ordering::less;
    if (at > other.at) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const AxisCut& other) const { return axis == other.axis && at == other.at; }
};

/// Colored integer cuboid {1..n_0} x ... x {1..n_{d-1}}.
///
/// Colors listed in `exempt` take no part in fairness (and need not be
/// divisible by q); every other color class must have cardinality
/// divisible by q.
class DiscreteNecklace {
 public:
  DiscreteNecklace(std::vector<int> sides, std::vector<ColorId> cells, int k, int q,
                   std::vector<ColorId> exempt = {});

  int dim() const { return static_cast<int>(sides_.size()); }
  int k() const { return k_; }
  int q() const { return q_; }
  const std::vector<int>& sides() const { return sides_; }
  const std::vector<ColorId>& cells() const { return cells_; }
  const std::vector<ColorId>& exempt() const { return exempt_; }
  std::size_t cell_count() const { return cells_.size(); }
  ColorId color(std::size_t flat) const { return cells_[flat]; }
  bool tracked(ColorId c) const;

  /// Cardinality of each color, index c-1.
  std::vector<long> color_counts() const;
  /// Number of colors with at least one cell.
  int colors_present() const;

  /// 1-based lattice coordinates of a flat (lexicographic) index.
  std::vector<int> coords(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> coords) const;

  /// Lattice-frame bounding box [1/2, n_i + 1/2]; cuts between layers sit
  /// at half-integers.
  Box box() const;

  bool operator==(const DiscreteNecklace&) const = default;

 private:
  std::vector<int> sides_;
  std::vector<ColorId> cells_;
  int k_;
  int q_;
  std::vector<ColorId> exempt_;
};

/// Piecewise-constant coloring on a box grid. Per axis, strictly increasing
/// breakpoints b_0 < ... < b_m define m half-open intervals; each grid cell
/// carries one color.
class GridColoring {
 public:
  GridColoring(std::vector<RatVec> breakpoints, std::vector<ColorId> colors, int k);

  int dim() const { return static_cast<int>(breakpoints_.size()); }
  int k() const { return k_; }
  const RatVec& breakpoints(int axis) const { return breakpoints_[axis]; }
  const std::vector<RatVec>& all_breakpoints() const { return breakpoints_; }
  int intervals(int axis) const { return static_cast<int>(breakpoints_[axis].size()) - 1; }
  const std::vector<ColorId>& colors() const { return colors_; }
  std::size_t cell_count() const { return colors_.size(); }
  ColorId color(std::size_t flat) const { return colors_[flat]; }
  ColorId color_at(std::span<const int> cell) const;
  Box domain() const;

  bool operator==(const GridColoring&) const = default;

 private:
  std::vector<RatVec> breakpoints_;
  std::vector<ColorId> colors_;
  int k_;
};

/// Axis-aligned cuts of a box plus a q-labeling of the induced cuboids.
class Splitting {
 public:
  /// Cuts are stored sorted by (axis, coordinate). `labeling` has one entry
  /// in 1..q per piece, pieces in lexicographic slab order.
  Splitting(Box box, std::vector<AxisCut> cuts, std::vector<int> labeling, int q);

  const Box& box() const { return box_; }
  const std::vector<AxisCut>& cuts() const { return cuts_; }
  const std::vector<int>& labeling() const { return labeling_; }
  int q() const { return q_; }
  int dim() const { return box_.dim(); }
  int cut_count() const { return static_cast<int>(cuts_.size()); }

  RatVec cuts_on(int axis) const;
  std::vector<int> slab_counts() const;
  std::size_t piece_count() const { return labeling_.size(); }
  std::vector<Box> pieces() const;

  bool operator==(const Splitting&) const = default;

 private:
  Box box_;
  std::vector<AxisCut> cuts_;
  std::vector<int> labeling_;
  int q_;
};

/// q x k matrix: amount of each color captured by each part.
class PartMeasures {
 public:
  PartMeasures(int q, int k) : q_(q), k_(k), values_(static_cast<std::size_t>(q) * k) {}

  int q() const { return q_; }
  int k() const { return k_; }
  /// part in [0, q), color index in [0, k) (color id - 1).
  Rat& at(int part, int color) { return values_[static_cast<std::size_t>(part) * k_ + color]; }
  const Rat& at(int part, int color) const {
    return values_[static_cast<std::size_t>(part) * k_ + color];
  }
  Rat column_total(int color) const;

 private:
  int q_;
  int k_;
  RatVec values_;
};

/// Exact measure of each color inside `box`, index c-1. Throws DomainError
/// if the box leaves the coloring's domain.
RatVec measure_vector(const GridColoring& coloring, const Box& box);

PartMeasures part_measures(const GridColoring& coloring, const Splitting& splitting);

bool is_fair(const PartMeasures& pm);

/// Shortest gap between consecutive cut coordinates on any axis, box faces
/// included.
Rat granularity_axis(const Splitting& splitting);

/// Unit-cell embedding: lattice cell x becomes [x_0-1, x_0] x ... on [0, n].
GridColoring discrete_to_grid(const DiscreteNecklace& necklace);

/// Moves a lattice-frame splitting of `necklace` (cuts at half-integers in
/// [1/2, n+1/2]) to the frame of discrete_to_grid (shift by -1/2).
Splitting to_grid_frame(const Splitting& lattice_splitting);

/// Per part, per color cell counts of a lattice-frame splitting (index
/// [part][color-1]). Cells lying exactly on a cut are rejected.
std::vector<std::vector<long>> discrete_part_counts(const DiscreteNecklace& necklace,
                                                    const Splitting& splitting);

/// Fairness on the tracked colors of a discrete necklace.
bool is_fair_discrete(const DiscreteNecklace& necklace, const Splitting& splitting);

/// Number of pieces for given per-axis cut counts.
std::size_t piece_count_for(std::span<const int> cuts_per_axis);

}  // namespace necklace
