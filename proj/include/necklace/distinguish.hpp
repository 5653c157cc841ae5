#pragma once

// Pairs of axis-aligned cubes with identical color-measure vectors, and the
// color-count thresholds above which distinguishing colorings exist.

#include <cstdint>
#include <optional>
#include <string>

#include "necklace/core.hpp"

namespace necklace {

struct CubePair {
  NecklaceBox a;
  NecklaceBox b;
  RatVec measures;  // shared measure vector, index c-1
};

struct DistinguishOptions {
  std::uint64_t seed = 0;
  int starts = 256;  // d >= 2 only
  int lm_iterations = 80;
  int jobs = 1;
};

struct DistinguishResult {
  std::optional<CubePair> pair;
  std::uint64_t tried = 0;   // slot patterns (d = 1) or numeric starts
  bool exhaustive = false;   // true for d = 1: "not found" is then exact
};

/// Cubes A, B inside `window` with measure_vector(A) = measure_vector(B)
/// and A \ B containing a cube of side sigma. For d = 1 every assignment
/// of the four endpoints to grid intervals is tried in lexicographic order
/// with one exact LP each; for d >= 2 multistart Levenberg-Marquardt runs
/// are snapped to rationals, repaired by an exact linear solve in the axis-0
/// corners when k <= 3, and validated exactly.
DistinguishResult find_equal_cubes(const GridColoring& coloring, const Box& window,
                                   const Rat& sigma, const DistinguishOptions& options = {});

/// Exact check of a pair: containment, equal measure vectors and the
/// sigma-separation of A from B.
bool verify_equal_cubes(const GridColoring& coloring, const Box& window, const Rat& sigma,
                        const CubePair& pair);

/// Side of the largest cube inside A \ B (0 if none).
Rat separation(const NecklaceBox& a, const NecklaceBox& b);

enum class Shape { Cube, Cuboid };

struct DistinguishAudit {
  int d = 0;
  int k = 0;
  Shape shape = Shape::Cube;
  int unknowns = 0;   // 2(d+1) for two cubes, 4d for two cuboids
  int equations = 0;  // k
  int threshold = 0;  // 2d+3 or 4d+1
  bool verdict = false;  // distinguishing colorings are guaranteed to exist
};

DistinguishAudit audit_distinguish(int d, int k, Shape shape);

}  // namespace necklace
