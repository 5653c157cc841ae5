#pragma once

// Lower-bound experiments for discrete necklaces: exhaustive counts of
// fairly splittable subsets, the double-counting estimate they are
// compared with, hard single-color instances and their multicolor
// composition.
//
// A subset N of {1..n}^d is encoded as the necklace with N in color 2 and
// the rest in color 1, color 1 exempt from fairness.

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "necklace/core.hpp"

namespace necklace {

/// Largest cell count accepted by the exhaustive subset enumerations.
inline constexpr int kMaxSubsetCells = 16;

/// Necklace of a subset given as a bitmask over flat cell indices.
DiscreteNecklace subset_necklace(int n, int d, int q, std::uint64_t mask);

struct SubsetCount {
  int n = 0, d = 0, q = 0, t = 0;
  std::uint64_t splittable = 0;  // |N| divisible by q and <= t cuts suffice
  std::uint64_t divisible = 0;   // subsets with |N| divisible by q
  mpz_class total;               // 2^(n^d)
};

/// Throws InputError unless 1 <= n^d <= kMaxSubsetCells.
SubsetCount count_splittable_subsets(int n, int d, int q, int t, int jobs = 1);

struct CountingBound {
  int n = 0, d = 0, q = 0, t = 0;
  mpz_class cut_choices;   // (dn)^t
  mpz_class labelings;     // q^((t+1)^d)
  mpz_class max_sum;       // max over a_1 + ... + a_q = n^d of sum_i prod_r C(a_r, i)
  mpz_class balanced_sum;  // the same sum at the balanced a
  std::vector<int> argmax; // first maximizing a in lexicographic order
  mpz_class estimate;      // cut_choices * labelings * max_sum
  mpz_class total;         // 2^(n^d)
};

/// sum_i prod_r C(a_r, i).
mpz_class equal_count_sum(const std::vector<int>& a);

/// Exact estimate; max_sum is found by exhaustive search over compositions.
CountingBound counting_bound_report(int n, int d, int q, int t);

struct HardSubset {
  DiscreteNecklace necklace;
  int min_cuts = 0;
  int target = 0;  // ceil(d q / 2)
};

/// First subset, by increasing size and then lexicographically, whose exact
/// minimum cut count reaches ceil(d q / 2).
std::optional<HardSubset> find_hard_subset(int n, int d, int q, int jobs = 1);

/// k-1 copies of the color-2 set of `base` on the diagonal of a cuboid with
/// sides (k-1) n_i, colored 2..k; everything else color 1 (exempt).
DiscreteNecklace compose_multicolor_hard_instance(const DiscreteNecklace& base, int k);

}  // namespace necklace
