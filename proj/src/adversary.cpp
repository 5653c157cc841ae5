#include "necklace/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "necklace/errors.hpp"
#include "necklace/random.hpp"

namespace necklace {

namespace {

Rat rat_pow(const Rat& base, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

mpz_class floor_rat(const Rat& x) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

}  // namespace

AdversaryParams AdversaryParams::resolved() const {
  AdversaryParams p = *this;
  if (p.d < 1 || p.k < 1 || p.q < 2 || p.t < 0 || p.n < 1)
    throw InputError("adversary needs d >= 1, k >= 1, q >= 2, t >= 0, n >= 1");
  if (p.bits < 1 || p.bits > 62) throw InputError("bits must be in 1..62");
  if (p.N == 0) p.N = 4 * p.n * p.n + 1;
  if (p.delta == 0) p.delta = Rat(1, 5 * p.N);
  if (p.N <= 4 * p.n * p.n) throw InputError("N must exceed 4n^2");
  if (p.epsilon <= 0) throw InputError("epsilon must be positive");
  if (p.delta <= 0) throw InputError("delta must be positive");
  const Rat Nd = rat_pow(Rat(p.N), p.d);
  const Rat a = p.epsilon / (2 * Nd);
  const Rat b = rat_pow(ratio(2 * p.n, p.N), p.d);
  const Rat dd = rat_pow(p.delta, p.d);
  if (!(dd < a && dd < b)) throw InputError("delta^d must be below min(eps/(2N^d), (2n/N)^d)");
  return p;
}

Box window_box(int d, int n) {
  Box b;
  for (int i = 0; i < d; ++i) {
    b.lo.emplace_back(-n);
    b.hi.emplace_back(n);
  }
  return b;
}

GridColoring generate_bad_coloring(const AdversaryParams& params) {
  const AdversaryParams p = params.resolved();
  const int d = p.d;
  const Rat w = ratio(2 * p.n, p.N);
  const Rat slot = p.delta / std::max(1, p.k - 1);
  const mpz_class scale = mpz_class(1) << p.bits;
  RandomStream rng(p.seed);

  std::size_t background = 1;
  for (int i = 0; i < d; ++i) background *= static_cast<std::size_t>(p.N);

  struct Cube {
    RatVec lo;
    Rat side;
  };
  // cubes[cell * (k-1) + (j-2)]
  std::vector<Cube> cubes;
  cubes.reserve(background * (p.k - 1));
  std::vector<std::set<Rat>> bps(d);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c <= p.N; ++c) bps[i].insert(Rat(-p.n) + c * w);

  std::vector<int> cell(d, 0);
  for (std::size_t f = 0; f < background; ++f) {
    RatVec dlo(d);
    for (int i = 0; i < d; ++i) dlo[i] = Rat(-p.n) + cell[i] * w + (w - p.delta) / 2;
    for (int j = 2; j <= p.k; ++j) {
      const auto m = rng.uniform_int(std::int64_t{1} << (p.bits - 1), (std::int64_t{1} << p.bits) - 1);
      Rat side = slot * ratio(mpz_class(static_cast<long>(m)), scale);
      side.canonicalize();
      Cube c{dlo, side};
      c.lo[0] += (j - 2) * slot;
      for (int i = 0; i < d; ++i) {
        bps[i].insert(c.lo[i]);
        bps[i].insert(c.lo[i] + side);
      }
      cubes.push_back(std::move(c));
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++cell[i] < p.N) break;
      cell[i] = 0;
    }
  }

  std::vector<RatVec> breakpoints(d);
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) {
    breakpoints[i].assign(bps[i].begin(), bps[i].end());
    cells *= breakpoints[i].size() - 1;
  }
  std::vector<ColorId> colors(cells, 1);
  if (p.k > 1) {
    std::vector<int> g(d, 0);
    RatVec mid(d);
    for (std::size_t f = 0; f < cells; ++f) {
      std::size_t bg = 0;
      for (int i = 0; i < d; ++i) {
        mid[i] = (breakpoints[i][g[i]] + breakpoints[i][g[i] + 1]) / 2;
        const long c = std::min<long>(floor_rat((mid[i] + p.n) / w).get_si(), p.N - 1);
        bg = bg * static_cast<std::size_t>(p.N) + static_cast<std::size_t>(c);
      }
      for (int j = 2; j <= p.k; ++j) {
        const Cube& cube = cubes[bg * (p.k - 1) + (j - 2)];
        bool inside = true;
        for (int i = 0; i < d && inside; ++i)
          inside = cube.lo[i] < mid[i] && mid[i] < cube.lo[i] + cube.side;
        if (inside) {
          colors[f] = j;
          break;
        }
      }
      for (int i = d - 1; i >= 0; --i) {
        if (++g[i] < static_cast<int>(breakpoints[i].size()) - 1) break;
        g[i] = 0;
      }
    }
  }
  return GridColoring(std::move(breakpoints), std::move(colors), p.k);
}

// ---------------------------------------------------------------------------

DofAudit audit_dof(int d, int k, int q, int t, CutKind cuts, Target target) {
  if (d < 1 || k < 1 || q < 2 || t < 0) throw InputError("audit needs d, k >= 1, q >= 2, t >= 0");
  DofAudit a;
  a.d = d;
  a.k = k;
  a.q = q;
  a.t = t;
  a.cuts = cuts;
  a.target = target;
  a.color_equations = static_cast<long>(k - 1) * (q - 1);
  a.volume_equations = q - 1;
  a.lhs = static_cast<long>(k) * (q - 1);
  a.dependent = 1;
  if (cuts == CutKind::Axis && target == Target::Window) {
    if (d == 1) {
      a.unknowns = t + 2;
      a.dependent = q - 1;
      a.rhs = t + 2;
      a.regime = "axis-window-d1";
    } else {
      a.unknowns = t + d + 1;
      a.rhs = t + d + q - 1;
      a.regime = "axis-window";
    }
  } else if (cuts == CutKind::Axis) {
    a.unknowns = t;
    a.rhs = t + q - 2;
    a.regime = "axis-fixed";
  } else if (target == Target::Window) {
    a.unknowns = static_cast<long>(d) * t + d + 1;
    a.rhs = static_cast<long>(d) * t + d + q - 1;
    a.regime = "arbitrary-window";
  } else {
    a.unknowns = static_cast<long>(d) * t;
    a.rhs = static_cast<long>(d) * t + q - 2;
    a.regime = "arbitrary-fixed";
  }
  a.verdict = a.lhs > a.rhs;
  return a;
}

// ---------------------------------------------------------------------------
// Equation systems

EquationSystem::EquationSystem(std::optional<GridColoring> coloring, int d, EquationPattern pattern,
                               int q, EquationMode mode)
    : coloring_(std::move(coloring)), d_(d), t_(0), pattern_(std::move(pattern)), q_(q), mode_(mode) {
  if (d < 1 || q < 1) throw InputError("equation system needs d >= 1 and q >= 1");
  if (static_cast<int>(pattern_.cuts_per_axis.size()) != d)
    throw InputError("pattern needs one cut count per axis");
  for (int c : pattern_.cuts_per_axis) {
    if (c < 0) throw InputError("negative cut count in pattern");
    t_ += c;
  }
  if (pattern_.labeling.size() != piece_count_for(pattern_.cuts_per_axis))
    throw InputError("pattern labeling does not match the piece count");
  for (int l : pattern_.labeling)
    if (l < 1 || l > q) throw InputError("pattern label outside 1..q");
  if (mode_ == EquationMode::Full && !coloring_)
    throw InputError("full equation system needs a coloring");
  if (coloring_ && coloring_->dim() != d) throw InputError("coloring dimension mismatch");
  if (!pattern_.cut_cells.empty()) {
    if (!coloring_) throw InputError("pattern cells need a coloring");
    if (static_cast<int>(pattern_.cut_cells.size()) != t_)
      throw InputError("pattern needs one cell per cut");
    int v = 0;
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < pattern_.cuts_per_axis[i]; ++c, ++v) {
        const int cell = pattern_.cut_cells[v];
        if (cell < 0 || cell >= coloring_->intervals(i)) throw InputError("pattern cell out of range");
        if (c > 0 && cell < pattern_.cut_cells[v - 1])
          throw InputError("pattern cells must be nondecreasing per axis");
      }
  }
  if (coloring_) table_.emplace(*coloring_);
}

int EquationSystem::equations() const {
  const int k = coloring_ ? coloring_->k() : 1;
  return mode_ == EquationMode::Full ? (k - 1) * (q_ - 1) + (q_ - 1) : q_ - 1;
}

namespace {

template <typename T>
bool region_check(const std::vector<T>& lo_dom, const std::vector<T>& hi_dom,
                  const std::vector<std::vector<T>>* cells, const EquationPattern& pat, int d,
                  const std::vector<T>& x, const std::vector<const std::vector<T>*>& axis_bps) {
  if (!(x[0] > 0)) return false;
  int v = d + 1;
  for (int i = 0; i < d; ++i) {
    const T lo = x[1 + i];
    const T hi = x[1 + i] + x[0];
    if (cells && (lo < lo_dom[i] || hi > hi_dom[i])) return false;
    T prev = lo;
    for (int c = 0; c < pat.cuts_per_axis[i]; ++c, ++v) {
      if (x[v] < prev || x[v] > hi) return false;
      if (!pat.cut_cells.empty()) {
        const auto& bp = *axis_bps[i];
        const int cell = pat.cut_cells[v - d - 1];
        if (x[v] < bp[cell] || x[v] > bp[cell + 1]) return false;
      }
      prev = x[v];
    }
  }
  return true;
}

}  // namespace

bool EquationSystem::in_region(const RatVec& point) const {
  if (static_cast<int>(point.size()) != unknowns()) return false;
  RatVec lo, hi;
  std::vector<const RatVec*> bps(d_, nullptr);
  if (coloring_) {
    const Box dom = coloring_->domain();
    lo = dom.lo;
    hi = dom.hi;
    for (int i = 0; i < d_; ++i) bps[i] = &coloring_->breakpoints(i);
  }
  std::vector<RatVec> dummy;
  return region_check<Rat>(lo, hi, coloring_ ? &dummy : nullptr, pattern_, d_, point, bps);
}

bool EquationSystem::in_region(const Eigen::VectorXd& point) const {
  if (point.size() != unknowns()) return false;
  std::vector<double> x(point.data(), point.data() + point.size());
  std::vector<double> lo, hi;
  std::vector<std::vector<double>> bp_store(d_);
  std::vector<const std::vector<double>*> bps(d_, nullptr);
  if (coloring_) {
    const Box dom = coloring_->domain();
    for (int i = 0; i < d_; ++i) {
      lo.push_back(to_double(dom.lo[i]));
      hi.push_back(to_double(dom.hi[i]));
      for (const auto& b : coloring_->breakpoints(i)) bp_store[i].push_back(to_double(b));
      bps[i] = &bp_store[i];
    }
  }
  std::vector<std::vector<double>> dummy;
  return region_check<double>(lo, hi, coloring_ ? &dummy : nullptr, pattern_, d_, x, bps);
}

Splitting EquationSystem::splitting_at(const RatVec& point) const {
  if (!in_region(point)) throw DomainError("point outside the pattern region");
  Box box;
  for (int i = 0; i < d_; ++i) {
    box.lo.push_back(point[1 + i]);
    box.hi.push_back(point[1 + i] + point[0]);
  }
  std::vector<AxisCut> cuts;
  int v = d_ + 1;
  for (int i = 0; i < d_; ++i)
    for (int c = 0; c < pattern_.cuts_per_axis[i]; ++c) cuts.push_back({i, point[v++]});
  return Splitting(std::move(box), std::move(cuts), pattern_.labeling, q_);
}

RatVec EquationSystem::residual(const RatVec& point) const {
  const Splitting s = splitting_at(point);
  RatVec vol(q_, 0);
  const auto pieces = s.pieces();
  for (std::size_t p = 0; p < pieces.size(); ++p) vol[s.labeling()[p] - 1] += pieces[p].volume();
  RatVec out;
  if (mode_ == EquationMode::Full) {
    const PartMeasures pm = part_measures(*coloring_, s);
    for (int j = 1; j < coloring_->k(); ++j)
      for (int l = 1; l < q_; ++l) out.push_back(pm.at(0, j) - pm.at(l, j));
  }
  for (int l = 1; l < q_; ++l) out.push_back(vol[0] - vol[l]);
  return out;
}

Eigen::VectorXd EquationSystem::residual(const Eigen::VectorXd& x) const {
  const int k = coloring_ ? coloring_->k() : 1;
  std::vector<std::vector<double>> bounds(d_);
  int v = d_ + 1;
  for (int i = 0; i < d_; ++i) {
    bounds[i].push_back(x[1 + i]);
    for (int c = 0; c < pattern_.cuts_per_axis[i]; ++c) bounds[i].push_back(x[v++]);
    bounds[i].push_back(x[1 + i] + x[0]);
  }
  std::vector<double> vol(q_, 0.0), parts(static_cast<std::size_t>(q_) * k, 0.0);
  std::vector<int> idx(d_, 0);
  std::vector<double> lo(d_), hi(d_);
  for (std::size_t p = 0; p < pattern_.labeling.size(); ++p) {
    double pv = 1;
    for (int i = 0; i < d_; ++i) {
      lo[i] = bounds[i][idx[i]];
      hi[i] = bounds[i][idx[i] + 1];
      pv *= hi[i] - lo[i];
    }
    const int l = pattern_.labeling[p] - 1;
    vol[l] += pv;
    if (mode_ == EquationMode::Full)
      table_->accumulate(lo, hi, std::span<double>(parts).subspan(static_cast<std::size_t>(l) * k, k));
    for (int i = d_ - 1; i >= 0; --i) {
      if (++idx[i] <= pattern_.cuts_per_axis[i]) break;
      idx[i] = 0;
    }
  }
  Eigen::VectorXd r(equations());
  int e = 0;
  if (mode_ == EquationMode::Full)
    for (int j = 1; j < k; ++j)
      for (int l = 1; l < q_; ++l) r[e++] = parts[j] - parts[static_cast<std::size_t>(l) * k + j];
  for (int l = 1; l < q_; ++l) r[e++] = vol[0] - vol[l];
  return r;
}

Eigen::MatrixXd EquationSystem::jacobian(const Eigen::VectorXd& x) const {
  return numeric_jacobian([this](const Eigen::VectorXd& y) { return residual(y); }, x, 1e-7);
}

EquationSystem build_equation_system(const GridColoring& coloring, const EquationPattern& pattern,
                                     int q, EquationMode mode) {
  return EquationSystem(coloring, coloring.dim(), pattern, q, mode);
}

EquationSystem build_volume_system(int d, const EquationPattern& pattern, int q) {
  return EquationSystem(std::nullopt, d, pattern, q, EquationMode::VolumeOnly);
}

RatVec point_of(const Splitting& s) {
  const Box& b = s.box();
  const Rat side = b.extent(0);
  for (int i = 1; i < s.dim(); ++i)
    if (b.extent(i) != side) throw InputError("point_of needs a cube");
  RatVec x{side};
  for (int i = 0; i < s.dim(); ++i) x.push_back(b.lo[i]);
  for (const auto& c : s.cuts()) x.push_back(c.at);
  return x;
}

RankReport jacobian_rank_check(const EquationSystem& es, const RatVec& point, int trials,
                               std::uint64_t seed, double cutoff) {
  if (!es.in_region(point)) throw DomainError("rank check point outside the pattern region");
  RankReport rep;
  rep.equations = es.equations();
  rep.unknowns = es.unknowns();
  const Eigen::Index n = es.unknowns();
  Eigen::VectorXd base(n);
  for (Eigen::Index i = 0; i < n; ++i) base[i] = to_double(point[i]);
  const double side = base[0];
  const double tol = 1e-13 * std::max(1.0, std::pow(side, es.dim()));
  RandomStream master(seed);

  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rs = master.child(static_cast<std::uint64_t>(trial));
    double mag = 1e-2 * side;
    Eigen::VectorXd x = base;
    bool projected = false;
    for (int attempt = 0; attempt < 20 && !projected; ++attempt, mag *= 0.5) {
      for (Eigen::Index i = 0; i < n; ++i) x[i] = base[i] + mag * rs.uniform(-1.0, 1.0);
      for (int it = 0; it < 100; ++it) {
        const Eigen::VectorXd r = es.residual(x);
        if (r.size() == 0 || r.cwiseAbs().maxCoeff() < tol) {
          projected = true;
          break;
        }
        const Eigen::MatrixXd jac = es.jacobian(x);
        x += jac.completeOrthogonalDecomposition().solve(-r);
      }
      if (projected && !es.in_region(x)) projected = false;
    }
    if (!projected) {
      ++rep.unprojected;
      for (Eigen::Index i = 0; i < n; ++i) x[i] = base[i] + 1e-6 * side * rs.uniform(-1.0, 1.0);
    }
    const int rank = numeric_rank(es.jacobian(x), cutoff);
    rep.ranks.push_back(rank);
    rep.max_rank = std::max(rep.max_rank, rank);
  }
  return rep;
}

Line1DResult certify_no_split_1d(const GridColoring& coloring, int q, int t, const Rat& gamma,
                                 int n, bool fixed_endpoints, const Line1DOptions& options) {
  if (n < 1) throw InputError("window half-extent must be >= 1");
  Line1DProblem p{coloring, q, t, gamma, Rat(-n), Rat(n), !fixed_endpoints, false};
  return search_line_1d(p, options);
}

ProbeReport probe_no_split_md(const GridColoring& coloring, int q, int t, const Rat& gamma, int n,
                              const ProbeBudget& budget) {
  const int d = coloring.dim();
  if (n < 1) throw InputError("window half-extent must be >= 1");
  if (!coloring.domain().contains(window_box(d, n))) throw DomainError("window outside coloring domain");
  ProbeReport rep;
  rep.best_residual = std::numeric_limits<double>::infinity();
  RandomStream master(budget.seed);
  const long grid = 1L << 16;
  const Rat unit(1, grid);
  const Rat span = Rat(2 * n) - gamma;
  if (span < 0) throw InputError("granularity exceeds the window");
  for (int trial = 0; trial < budget.trials; ++trial) {
    RandomStream rs = master.child(static_cast<std::uint64_t>(trial));
    const Rat side = gamma + unit * Rat(floor_rat(span * grid * from_double(rs.uniform01())));
    Box box;
    for (int i = 0; i < d; ++i) {
      const Rat room = Rat(2 * n) - side;
      const Rat lo = Rat(-n) + unit * Rat(floor_rat(room * grid * from_double(rs.uniform01())));
      box.lo.push_back(lo);
      box.hi.push_back(lo + side);
    }
    ProbeTrial pt;
    pt.box = box;
    if (side > 0) {
      MdSearchBudget sb = budget.search;
      sb.seed = rs.next();
      auto r = solve_grid_axis_cuts_md(coloring, box, q, t, gamma, sb);
      pt.found = r.witness.has_value();
      pt.best_residual = r.best_residual;
      pt.patterns = r.patterns_explored;
      pt.seeds = r.seeds_run;
      rep.best_residual = std::min(rep.best_residual, r.best_residual);
      if (r.witness) rep.witness = std::move(r.witness);
    } else {
      pt.best_residual = std::numeric_limits<double>::infinity();
    }
    rep.trials.push_back(std::move(pt));
    if (rep.witness) break;
  }
  return rep;
}

}  // namespace necklace
