#pragma once

// Exact convex polytopes given by halfspaces: vertex enumeration, volume by
// pulling triangulation, intersection with grid colorings, inscribed axis
// cubes, and verification of splittings by arbitrary hyperplanes.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "necklace/core.hpp"

namespace necklace {

/// {x : normal . x = offset}, normalized so the first nonzero normal entry
/// is 1. Orientation is relative to the normalized normal.
class Hyperplane {
 public:
  Hyperplane(RatVec normal, Rat offset);

  const RatVec& normal() const { return normal_; }
  const Rat& offset() const { return offset_; }
  int dim() const { return static_cast<int>(normal_.size()); }
  bool operator==(const Hyperplane&) const = default;

 private:
  RatVec normal_;
  Rat offset_;
};

/// {x : normal . x <= bound}.
struct Halfspace {
  RatVec normal;
  Rat bound;
};

/// Side of a hyperplane: Below is normal.x <= offset, Above is >=.
enum class Side { Below, Above };
Halfspace halfspace(const Hyperplane& h, Side side);
std::vector<Halfspace> box_halfspaces(const Box& box);

/// Intersection of finitely many halfspaces. The vertex list is computed on
/// first use and shared between copies.
class Polytope {
 public:
  Polytope(int dim, std::vector<Halfspace> halfspaces);

  int dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  /// Exact vertices in lexicographic order; empty iff the polytope is
  /// empty. Throws DomainError if the polytope is unbounded.
  const std::vector<RatVec>& vertices() const;
  bool contains(const RatVec& point) const;

 private:
  struct Cache {
    std::once_flag once;
    std::vector<RatVec> vertices;
  };
  int dim_;
  std::vector<Halfspace> halfspaces_;
  std::shared_ptr<Cache> cache_;
};

std::vector<RatVec> vertex_enumeration(int dim, const std::vector<Halfspace>& halfspaces);

/// Exact d-volume; 0 for empty or lower-dimensional polytopes.
Rat polytope_volume(const Polytope& p);

/// Exact color measures of the polytope, index c-1; sums to its volume.
RatVec box_polytope_color_measures(const GridColoring& coloring, const Polytope& p);

/// Largest side of an axis-aligned cube inside p (exact LP). Throws
/// DomainError for an empty polytope.
Rat inscribed_cube_side(const Polytope& p);

/// Cells of a hyperplane arrangement are named by sign strings: character
/// i is '-' for the Below side of hyperplane i and '+' for Above.
class ArbitrarySplitting {
 public:
  ArbitrarySplitting(Box box, std::vector<Hyperplane> hyperplanes,
                     std::map<std::string, int> labeling, int q);

  const Box& box() const { return box_; }
  const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  const std::map<std::string, int>& labeling() const { return labeling_; }
  int q() const { return q_; }

  Polytope cell(const std::string& signs) const;
  /// Sign strings of all cells with positive volume, in all_sign_strings order.
  std::vector<std::string> nonempty_cells() const;

 private:
  Box box_;
  std::vector<Hyperplane> hyperplanes_;
  std::map<std::string, int> labeling_;
  int q_;
};

struct ArbitraryVerification {
  PartMeasures parts;
  Rat granularity;
  bool fair = false;
};

/// Exact part measures over nonempty cells, granularity as the minimum
/// inscribed-cube side over those cells. Labels on empty cells are ignored;
/// an unlabeled nonempty cell is an InputError.
ArbitraryVerification verify_arbitrary_splitting(const GridColoring& coloring,
                                                 const ArbitrarySplitting& s);

/// Every sign string of length t, '-' before '+'.
std::vector<std::string> all_sign_strings(std::size_t t);

}  // namespace necklace
