#pragma once

// Floating-point helpers for the stochastic searches: a prefix-sum measure
// table over a grid coloring, a box-constrained Levenberg-Marquardt solver
// and an SVD rank. Nothing here produces a reported result on its own;
// every candidate found numerically is snapped and revalidated exactly.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "necklace/core.hpp"

namespace necklace {

/// Cumulative color measures F_c(x) = measure of color c in
/// [domain.lo, x], tabulated at grid vertices. F_c is multilinear inside
/// each grid cell, so interpolating the vertex table is exact.
class MeasureTable {
 public:
  explicit MeasureTable(const GridColoring& coloring);

  int dim() const { return d_; }
  int k() const { return k_; }

  /// Color measures of the box [lo, hi]; coordinates are clamped to the
  /// domain. Adds into `out` (size k).
  void accumulate(std::span<const double> lo, std::span<const double> hi,
                  std::span<double> out) const;
  std::vector<double> measure(std::span<const double> lo, std::span<const double> hi) const;

  const std::vector<double>& breakpoints(int axis) const { return bps_[axis]; }

 private:
  void cumulative(std::span<const double> x, std::span<double> out) const;

  int d_;
  int k_;
  std::vector<std::vector<double>> bps_;
  std::vector<std::size_t> stride_;  // vertex strides
  std::vector<double> table_;        // vertex-major, k values per vertex
};

struct LeastSquaresOptions {
  int max_iterations = 60;
  double tolerance = 1e-13;  // stop when ||r||_inf falls below
  double fd_step = 1e-7;     // relative central-difference step
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_inf = 0;
  int iterations = 0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central-difference Jacobian of `f` at x.
Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, double step);

/// Projected Levenberg-Marquardt: iterates are clamped into [lower, upper].
LeastSquaresResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x,
                                       const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                       const LeastSquaresOptions& options = {});

/// Number of singular values above cutoff * max(1, sigma_max).
int numeric_rank(const Eigen::MatrixXd& m, double cutoff);

}  // namespace necklace
