#pragma once

// Exact fair-splitting solvers. The discrete minimum-cut search is shared
// with the multidimensional splitter; the continuous solver handles
// one-dimensional grid colorings by enumerating cut patterns and solving
// one exact linear program per (pattern, labeling).

#include <cstdint>
#include <optional>
#include <vector>

#include "necklace/core.hpp"
#include "necklace/linprog.hpp"

namespace necklace {

struct MinCutsResult {
  int t_min = 0;
  Splitting witness;  // lattice frame, see DiscreteNecklace::box()
  std::uint64_t cut_sets_tried = 0;
};

/// Exhaustive minimum over distinct cut sets at half-integer positions, any
/// dimension. t = 0, 1, ... up to t_cap; cut sets in lexicographic order of
/// (axis, coordinate), labelings by branch-and-bound in restricted-growth
/// order, so the witness is the lexicographically least one. An optional
/// per-axis budget caps the number of cuts on each axis. nullopt means no
/// fair splitting with at most t_cap cuts.
std::optional<MinCutsResult> min_cuts_discrete(const DiscreteNecklace& necklace, int t_cap,
                                               const std::vector<int>& per_axis_budget = {},
                                               int jobs = 1);

/// d = 1 front end of min_cuts_discrete.
std::optional<MinCutsResult> min_cuts_discrete_1d(const DiscreteNecklace& necklace, int t_cap,
                                                  int jobs = 1);

/// Alon bound k(q-1), with k the number of tracked colors that occur.
int alon_cap(const DiscreteNecklace& necklace);

/// Fair splitting of a 1-D necklace with at most alon_cap cuts.
Splitting solve_discrete_1d(const DiscreteNecklace& necklace, int jobs = 1);

/// A one-dimensional search problem. With fixed endpoints the necklace is
/// [lo, hi]; otherwise its endpoints are unknowns inside the window [lo, hi].
struct Line1DProblem {
  GridColoring coloring;
  int q = 2;
  int t = 0;
  Rat gamma = 0;  // granularity: every gap between consecutive points >= gamma
  Rat lo;
  Rat hi;
  bool free_endpoints = false;
  bool boundary_cuts_only = false;  // cuts restricted to grid breakpoints
};

/// One refuted region of the search. A prefix entry covers every pattern
/// that extends `slots` (any labeling); a leaf entry covers one full
/// pattern with one labeling.
struct RefutationEntry {
  std::vector<int> slots;
  std::vector<int> labeling;  // empty for prefix entries
  std::uint64_t system_hash = 0;
  FarkasCertificate farkas;
  std::optional<LinearProgram> system;  // kept in verbose mode
  bool is_prefix() const { return labeling.empty(); }
};

/// Exhaustive infeasibility certificate: every (pattern, labeling) pair is
/// covered by exactly one entry whose linear system is infeasible.
struct Certificate1D {
  Line1DProblem problem;
  mpz_class patterns;            // number of monotone slot sequences
  mpz_class labelings;           // canonical labelings per pattern
  std::vector<RefutationEntry> entries;
};

struct Line1DStats {
  std::uint64_t lps_solved = 0;
  std::uint64_t prefixes_refuted = 0;
  std::uint64_t leaves = 0;
};

struct Line1DResult {
  std::optional<Splitting> witness;
  std::optional<Certificate1D> certificate;
  Line1DStats stats;
};

struct Line1DOptions {
  int jobs = 1;
  bool keep_systems = false;
};

/// Runs the pattern search. Returns a witness (revalidated exactly:
/// fairness, granularity, containment) or a full certificate.
Line1DResult search_line_1d(const Line1DProblem& problem, const Line1DOptions& options = {});

/// Fixed box [lo, hi].
Line1DResult solve_continuous_1d(const GridColoring& coloring, const Rat& lo, const Rat& hi, int q,
                                 int t, const Rat& gamma, const Line1DOptions& options = {});

/// Independent check of a certificate: rebuilds every system from the
/// problem, checks its hash and Farkas multipliers, and checks that the
/// entries are disjoint and cover patterns x labelings exactly.
bool verify_certificate(const Certificate1D& cert);

/// Stirling number of the second kind S(n, k).
mpz_class stirling2(int n, int k);

/// All restricted-growth labelings of `pieces` pieces using exactly q labels.
std::vector<std::vector<int>> canonical_labelings(int pieces, int q);

}  // namespace necklace
