#pragma once

// Multidimensional splitting: the lexicographic-lift construction for
// discrete necklaces, an exact minimum-cut oracle, and a numerical search
// for grid colorings whose reported witnesses are always exact.

#include <cstdint>
#include <optional>
#include <vector>

#include "necklace/core.hpp"
#include "necklace/splitter1d.hpp"

namespace necklace {

/// Flattening of a discrete necklace along the lexicographic order. Flat
/// cell indices are already lexicographic, so the bijection between a cell
/// and its 1-D bead is the identity on flat indices.
struct LexLift {
  DiscreteNecklace source;
  DiscreteNecklace line;

  std::size_t bead_of(std::span<const int> cell) const { return source.flat_index(cell); }
  std::vector<int> cell_of(std::size_t bead) const { return source.coords(bead); }
};

LexLift lex_lift(const DiscreteNecklace& necklace);

/// Axis cuts separating the lex prefix ending at x from the suffix starting
/// at y (1-based coordinates). With j the first axis where they differ
/// (0-based), the cuts are x_i - 1/2 and x_i + 1/2 on every axis i < j and
/// (x_j + y_j)/2 on axis j: 2j + 1 cuts, in that order. Throws InputError
/// unless y is the lexicographic successor of x inside `sides`.
std::vector<AxisCut> realize_cut(const std::vector<int>& sides, const std::vector<int>& x,
                                 const std::vector<int>& y);

/// Fair splitting via the 1-D lift: at most (2d-1) k (q-1) cuts, boundary
/// and repeated cuts removed, verified fair before returning.
Splitting split_via_lift(const DiscreteNecklace& necklace, int jobs = 1);

/// min_cuts_discrete with optional per-axis budgets (one per axis).
std::optional<MinCutsResult> min_cuts_discrete_md(const DiscreteNecklace& necklace, int t_cap,
                                                  const std::vector<int>& per_axis_budget = {},
                                                  int jobs = 1);

struct MdSearchBudget {
  std::size_t max_patterns = 20000;  // per cut distribution; sampled beyond this
  int seeds_per_pattern = 4;
  int lm_iterations = 60;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct MdSearchResult {
  std::optional<Splitting> witness;
  std::uint64_t patterns_explored = 0;  // (pattern, labeling) pairs
  std::uint64_t seeds_run = 0;
  double best_residual = 0;             // smallest max-abs residual seen
  bool sampled = false;                 // some distribution exceeded max_patterns
};

/// Searches fair q-splittings of `box` with t axis cuts and granularity
/// >= gamma. `per_axis` fixes the cut count on each axis; when empty every
/// distribution of t over the axes is tried. For every cut-to-interval
/// pattern and labeling, the multilinear fairness system is solved by
/// projected Levenberg-Marquardt from seeds (interval midpoints, lower
/// ends, upper ends, then random points). Candidates are snapped to
/// rationals and accepted only after exact revalidation. An empty witness
/// is a report, not a proof of absence.
MdSearchResult solve_grid_axis_cuts_md(const GridColoring& coloring, const Box& box, int q, int t,
                                       const Rat& gamma, const MdSearchBudget& budget = {},
                                       const std::vector<int>& per_axis = {});

/// Residual tolerance before snapping: 1e-12 * max(1, volume).
double md_residual_tolerance(double volume);

}  // namespace necklace
