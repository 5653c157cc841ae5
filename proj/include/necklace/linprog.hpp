#pragma once

// Exact linear programming over the rationals: dense two-phase tableau
// simplex with Bland's rule. Infeasible programs come with a Farkas
// certificate that can be checked independently of the solver.

#include <string>
#include <vector>

#include "necklace/rational.hpp"

namespace necklace {

struct LinearRow {
  RatVec coeffs;
  Rat rhs;
};

/// maximize objective . x  subject to  equalities (a.x = b),
/// inequalities (a.x <= b), and x_i >= 0 where nonnegative[i].
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;
  std::vector<bool> nonnegative;  // empty means all variables free
  RatVec objective;               // empty means pure feasibility

  explicit LinearProgram(std::size_t vars = 0) : num_vars(vars) {}

  void add_equality(RatVec coeffs, Rat rhs);
  void add_inequality(RatVec coeffs, Rat rhs);
  /// a.x >= b, stored as -a.x <= -b.
  void add_at_least(RatVec coeffs, Rat rhs);
  bool is_nonnegative(std::size_t var) const {
    return !nonnegative.empty() && nonnegative[var];
  }

  /// Canonical text (one row per line, "p/q" entries) used for hashing and
  /// verbose dumps.
  std::string canonical_text() const;
  std::uint64_t hash() const;
};

/// Multipliers u (equalities, free sign) and v (inequalities, v >= 0) with
///   u.A_eq + v.A_le = w,   w_i >= 0 for nonnegative vars, w_i = 0 otherwise,
///   u.b_eq + v.b_le < 0.
/// Any such pair proves that no feasible x exists.
struct FarkasCertificate {
  RatVec eq_multipliers;
  RatVec le_multipliers;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec x;
  Rat value;
  FarkasCertificate farkas;  // filled when Infeasible
};

LpResult solve_lp(const LinearProgram& lp);

/// Exact check of a Farkas certificate against the program.
bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert);

/// Exact check that x satisfies every constraint of the program.
bool is_feasible_point(const LinearProgram& lp, const RatVec& x);

}  // namespace necklace
