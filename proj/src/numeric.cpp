#include "necklace/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace necklace {

MeasureTable::MeasureTable(const GridColoring& coloring) : d_(coloring.dim()), k_(coloring.k()) {
  bps_.resize(d_);
  for (int i = 0; i < d_; ++i)
    for (const auto& b : coloring.breakpoints(i)) bps_[i].push_back(to_double(b));

  stride_.assign(d_, 1);
  std::size_t vertices = 1;
  for (int i = d_ - 1; i >= 0; --i) {
    stride_[i] = vertices;
    vertices *= bps_[i].size();
  }
  table_.assign(vertices * k_, 0.0);

  // Seed vertex (c+1) with the measure of cell c, then prefix-sum per axis.
  std::vector<int> cell(d_, 0);
  for (std::size_t flat = 0; flat < coloring.cell_count(); ++flat) {
    double vol = 1;
    std::size_t v = 0;
    for (int i = 0; i < d_; ++i) {
      vol *= bps_[i][cell[i] + 1] - bps_[i][cell[i]];
      v += static_cast<std::size_t>(cell[i] + 1) * stride_[i];
    }
    table_[v * k_ + coloring.color(flat) - 1] += vol;
    for (int i = d_ - 1; i >= 0; --i) {
      if (++cell[i] < coloring.intervals(i)) break;
      cell[i] = 0;
    }
  }
  for (int axis = 0; axis < d_; ++axis) {
    const std::size_t n_axis = bps_[axis].size();
    for (std::size_t v = 0; v < vertices; ++v) {
      const std::size_t coord = (v / stride_[axis]) % n_axis;
      if (coord == 0) continue;
      const std::size_t prev = v - stride_[axis];
      for (int c = 0; c < k_; ++c) table_[v * k_ + c] += table_[prev * k_ + c];
    }
  }
}

void MeasureTable::cumulative(std::span<const double> x, std::span<double> out) const {
  std::vector<std::size_t> base(d_);
  std::vector<double> theta(d_);
  for (int i = 0; i < d_; ++i) {
    const auto& bp = bps_[i];
    const double xi = std::clamp(x[i], bp.front(), bp.back());
    std::size_t c = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), xi) - bp.begin());
    c = std::clamp<std::size_t>(c, 1, bp.size() - 1) - 1;
    base[i] = c;
    theta[i] = (xi - bp[c]) / (bp[c + 1] - bp[c]);
  }
  std::fill(out.begin(), out.end(), 0.0);
  const unsigned corners = 1u << d_;
  for (unsigned mask = 0; mask < corners; ++mask) {
    double w = 1;
    std::size_t v = 0;
    for (int i = 0; i < d_; ++i) {
      const bool up = (mask >> i) & 1u;
      w *= up ? theta[i] : 1 - theta[i];
      v += (base[i] + (up ? 1 : 0)) * stride_[i];
    }
    if (w == 0) continue;
    for (int c = 0; c < k_; ++c) out[c] += w * table_[v * k_ + c];
  }
}

void MeasureTable::accumulate(std::span<const double> lo, std::span<const double> hi,
                              std::span<double> out) const {
  std::vector<double> corner(d_), f(k_);
  const unsigned corners = 1u << d_;
  for (unsigned mask = 0; mask < corners; ++mask) {
    int lows = 0;
    for (int i = 0; i < d_; ++i) {
      const bool up = (mask >> i) & 1u;
      corner[i] = up ? hi[i] : lo[i];
      if (!up) ++lows;
    }
    cumulative(corner, f);
    const double sign = (lows % 2 == 0) ? 1.0 : -1.0;
    for (int c = 0; c < k_; ++c) out[c] += sign * f[c];
  }
}

std::vector<double> MeasureTable::measure(std::span<const double> lo,
                                          std::span<const double> hi) const {
  std::vector<double> out(k_, 0.0);
  accumulate(lo, hi, out);
  return out;
}

Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, double step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac;
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    Eigen::VectorXd col = (f(xp) - f(xm)) / (2 * h);
    if (jac.size() == 0) jac.resize(col.size(), n);
    jac.col(i) = col;
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return jac;
}

LeastSquaresResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x,
                                       const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                       const LeastSquaresOptions& options) {
  auto clamp = [&](Eigen::VectorXd& v) { v = v.cwiseMax(lower).cwiseMin(upper); };
  clamp(x);
  Eigen::VectorXd r = f(x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  LeastSquaresResult out;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (r.size() == 0 || r.cwiseAbs().maxCoeff() < options.tolerance) break;
    const Eigen::MatrixXd jac = numeric_jacobian(f, x, options.fd_step);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      Eigen::VectorXd step = a.ldlt().solve(-jtr);
      if (!step.allFinite()) break;
      Eigen::VectorXd candidate = x + step;
      clamp(candidate);
      Eigen::VectorXd rc = f(candidate);
      const double c = rc.squaredNorm();
      if (c < cost) {
        x = candidate;
        r = rc;
        cost = c;
        lambda = std::max(lambda * 0.2, 1e-12);
        improved = true;
        break;
      }
      lambda *= 8;
    }
    if (!improved) break;
  }
  out.x = x;
  out.residual_inf = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
  out.iterations = it;
  return out;
}

int numeric_rank(const Eigen::MatrixXd& m, double cutoff) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff * scale) ++rank;
  return rank;
}

}  // namespace necklace
