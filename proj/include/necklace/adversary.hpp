#pragma once

// Adversarial colorings and the degrees-of-freedom machinery around them:
// construction of generic cube colorings, threshold audits, the fairness
// equation systems with their Jacobian ranks, exact non-existence
// certificates in dimension one and stochastic probes in higher dimension.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "necklace/core.hpp"
#include "necklace/numeric.hpp"
#include "necklace/splitter1d.hpp"
#include "necklace/splitter_md.hpp"

namespace necklace {

/// Parameters of the adversarial construction. N = 0 and delta = 0 select
/// the defaults N = 4n^2 + 1 and delta = 1/(5N).
struct AdversaryParams {
  int d = 1;
  int k = 4;
  int q = 2;
  int t = 1;
  int n = 1;
  int N = 0;
  Rat delta = 0;
  Rat epsilon = Rat(1, 2);
  int bits = 32;
  std::uint64_t seed = 0;

  /// Copy with defaults filled in; throws InputError if any inequality
  /// N > 4n^2, delta^d < min(eps / (2 N^d), (2n/N)^d) fails.
  AdversaryParams resolved() const;
};

/// Cube [-n, n]^d.
Box window_box(int d, int n);

/// Coloring of [-n, n]^d: N^d background cells; inside each, a centered
/// delta-cube holds k-1 disjoint cubes of colors 2..k placed in slots of
/// width delta/(k-1) along axis 0. Cube sides are (delta/(k-1)) m / 2^bits
/// with m a random bits-bit integer. Everything else is color 1.
GridColoring generate_bad_coloring(const AdversaryParams& params);

enum class CutKind { Axis, Arbitrary };
enum class Target { Window, Fixed };

struct DofAudit {
  int d = 0, k = 0, q = 0, t = 0;
  CutKind cuts = CutKind::Axis;
  Target target = Target::Window;
  long unknowns = 0;          // t+d+1, dt+d+1, t or dt
  long color_equations = 0;   // (k-1)(q-1)
  long volume_equations = 0;  // q-1
  long dependent = 0;         // c: q-1 for the d=1 axis window case, else 1
  long lhs = 0;               // k(q-1)
  long rhs = 0;               // threshold of the regime
  bool verdict = false;       // lhs > rhs: no fair splitting for generic colorings
  std::string regime;
};

DofAudit audit_dof(int d, int k, int q, int t, CutKind cuts, Target target);

enum class EquationMode { Full, VolumeOnly };

/// Cut counts per axis, the piece labeling, and optionally the grid interval
/// of every cut (axis by axis), which restricts the validity region.
struct EquationPattern {
  std::vector<int> cuts_per_axis;
  std::vector<int> labeling;
  std::vector<int> cut_cells;
};

/// Fairness residuals in the unknowns (alpha_0, alpha_1..alpha_d, cuts):
/// alpha_0 is the side, alpha_1..d the corner, cuts listed axis by axis.
/// Full mode: W_{j,1} - W_{j,l} for colors j = 2..k and parts l = 2..q, then
/// vol_1 - vol_l. Volume mode: the volume differences only.
class EquationSystem {
 public:
  EquationSystem(std::optional<GridColoring> coloring, int d, EquationPattern pattern, int q,
                 EquationMode mode);

  int dim() const { return d_; }
  int q() const { return q_; }
  int unknowns() const { return d_ + 1 + t_; }
  int equations() const;
  const EquationPattern& pattern() const { return pattern_; }

  /// True iff the side is positive, each axis's cuts are nondecreasing
  /// inside the box, and each cut lies in its pattern cell if given.
  bool in_region(const RatVec& point) const;
  bool in_region(const Eigen::VectorXd& point) const;

  /// Exact residual at a rational point; DomainError outside the region.
  RatVec residual(const RatVec& point) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& point) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& point) const;

  Splitting splitting_at(const RatVec& point) const;

 private:
  std::optional<GridColoring> coloring_;
  std::optional<MeasureTable> table_;
  int d_;
  int t_;
  EquationPattern pattern_;
  int q_;
  EquationMode mode_;
};

EquationSystem build_equation_system(const GridColoring& coloring, const EquationPattern& pattern,
                                     int q, EquationMode mode = EquationMode::Full);

/// Volume-only system, which needs no coloring.
EquationSystem build_volume_system(int d, const EquationPattern& pattern, int q);

/// Unknown vector of a concrete splitting of a cube.
RatVec point_of(const Splitting& splitting);

struct RankReport {
  std::vector<int> ranks;  // one per trial
  int max_rank = 0;
  int equations = 0;
  int unknowns = 0;
  int unprojected = 0;     // trials where projection onto the zero set failed
};

/// Numeric Jacobian rank (singular values above cutoff * max(1, sigma_max))
/// at `trials` points near `point`: each trial perturbs the point at random
/// and projects it back onto the zero set of the residual by Gauss-Newton,
/// so the ranks are those of the system along its fair configurations.
RankReport jacobian_rank_check(const EquationSystem& es, const RatVec& point, int trials,
                               std::uint64_t seed, double cutoff = 1e-8);

/// Window [-n, n]: necklace endpoints are unknowns unless fixed_endpoints,
/// in which case the necklace is the whole window.
Line1DResult certify_no_split_1d(const GridColoring& coloring, int q, int t, const Rat& gamma,
                                 int n, bool fixed_endpoints = false,
                                 const Line1DOptions& options = {});

struct ProbeBudget {
  int trials = 16;
  MdSearchBudget search;
  std::uint64_t seed = 0;
};

struct ProbeTrial {
  Box box;
  bool found = false;
  double best_residual = 0;
  std::uint64_t patterns = 0;
  std::uint64_t seeds = 0;
};

struct ProbeReport {
  std::vector<ProbeTrial> trials;
  std::optional<Splitting> witness;
  double best_residual = 0;  // running minimum over trials
};

/// Random cubes inside [-n, n]^d with side >= gamma, each searched by
/// solve_grid_axis_cuts_md. Stops at the first witness. Not a certificate.
ProbeReport probe_no_split_md(const GridColoring& coloring, int q, int t, const Rat& gamma, int n,
                              const ProbeBudget& budget);

}  // namespace necklace
