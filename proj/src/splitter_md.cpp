#include "necklace/splitter_md.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "necklace/errors.hpp"
#include "necklace/numeric.hpp"
#include "necklace/parallel.hpp"
#include "necklace/random.hpp"

namespace necklace {

LexLift lex_lift(const DiscreteNecklace& n) {
  DiscreteNecklace line({static_cast<int>(n.cell_count())}, n.cells(), n.k(), n.q(), n.exempt());
  return LexLift{n, std::move(line)};
}

std::vector<AxisCut> realize_cut(const std::vector<int>& sides, const std::vector<int>& x,
                                 const std::vector<int>& y) {
  const int d = static_cast<int>(sides.size());
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw InputError("realize_cut: coordinate dimension mismatch");
  for (int i = 0; i < d; ++i)
    if (x[i] < 1 || x[i] > sides[i] || y[i] < 1 || y[i] > sides[i])
      throw InputError("realize_cut: cell outside the necklace");
  // Lexicographic successor of x.
  std::vector<int> succ = x;
  int i = d - 1;
  for (; i >= 0; --i) {
    if (succ[i] < sides[i]) {
      ++succ[i];
      break;
    }
    succ[i] = 1;
  }
  if (i < 0 || succ != y) throw InputError("realize_cut: cells are not lexicographically consecutive");
  int j = 0;
  while (x[j] == y[j]) ++j;
  std::vector<AxisCut> cuts;
  for (int a = 0; a < j; ++a) {
    cuts.push_back({a, Rat(2 * x[a] - 1, 2)});
    cuts.push_back({a, Rat(2 * x[a] + 1, 2)});
  }
  cuts.push_back({j, Rat(x[j] + y[j], 2)});
  return cuts;
}

Splitting split_via_lift(const DiscreteNecklace& necklace, int jobs) {
  const LexLift lift = lex_lift(necklace);
  const Splitting line = solve_discrete_1d(lift.line, jobs);
  const Box box = necklace.box();

  std::set<AxisCut> cuts;
  for (const auto& c : line.cuts()) {
    // 1-D cut at p + 1/2 sits between beads p and p + 1 (1-based).
    const mpz_class p = Rat(c.at - Rat(1, 2)).get_num();
    const std::size_t bead = p.get_ui();
    for (auto& r : realize_cut(necklace.sides(), lift.cell_of(bead - 1), lift.cell_of(bead)))
      if (r.at != box.lo[r.axis] && r.at != box.hi[r.axis]) cuts.insert(r);
  }

  // Each d-dimensional piece inherits the 1-D label of its cells' block.
  const int d = necklace.dim();
  std::vector<RatVec> per_axis(d);
  for (const auto& c : cuts) per_axis[c.axis].push_back(c.at);
  std::vector<int> slabs(d);
  for (int i = 0; i < d; ++i) slabs[i] = static_cast<int>(per_axis[i].size());
  std::vector<int> labeling(piece_count_for(slabs), 0);
  const RatVec line_cuts = line.cuts_on(0);
  for (std::size_t bead = 0; bead < necklace.cell_count(); ++bead) {
    const auto x = lift.cell_of(bead);
    std::size_t piece = 0;
    for (int i = 0; i < d; ++i) {
      const auto& cs = per_axis[i];
      const auto slab = std::lower_bound(cs.begin(), cs.end(), Rat(x[i])) - cs.begin();
      piece = piece * static_cast<std::size_t>(slabs[i] + 1) + static_cast<std::size_t>(slab);
    }
    const Rat pos(static_cast<long>(bead) + 1);
    const auto block = std::lower_bound(line_cuts.begin(), line_cuts.end(), pos) - line_cuts.begin();
    const int label = line.labeling()[block];
    if (labeling[piece] != 0 && labeling[piece] != label)
      throw std::logic_error("lifted piece mixes lexicographic blocks");
    labeling[piece] = label;
  }
  for (int& l : labeling)
    if (l == 0) throw std::logic_error("lifted piece contains no cell");
  Splitting out(box, {cuts.begin(), cuts.end()}, std::move(labeling), necklace.q());
  if (!is_fair_discrete(necklace, out)) throw std::logic_error("lifted splitting is not fair");
  return out;
}

std::optional<MinCutsResult> min_cuts_discrete_md(const DiscreteNecklace& necklace, int t_cap,
                                                  const std::vector<int>& per_axis_budget,
                                                  int jobs) {
  return min_cuts_discrete(necklace, t_cap, per_axis_budget, jobs);
}

double md_residual_tolerance(double volume) { return 1e-12 * std::max(1.0, volume); }

// ---------------------------------------------------------------------------
// Numerical search

namespace {

void compositions(int t, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(t);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= t; ++v) {
    cur.push_back(v);
    compositions(t - v, d, cur, out);
    cur.pop_back();
  }
}

mpz_class multisets(int m, int t) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m + t - 1), static_cast<unsigned long>(t));
  return r;
}

// A pattern lists, axis by axis, the interval index of every cut.
using Pattern = std::vector<int>;

void all_patterns(const std::vector<int>& dist, const std::vector<int>& m, Pattern& cur, int axis,
                  int remaining, int lower, std::vector<Pattern>& out) {
  if (axis == static_cast<int>(dist.size())) {
    out.push_back(cur);
    return;
  }
  if (remaining == 0) {
    all_patterns(dist, m, cur, axis + 1, axis + 1 < static_cast<int>(dist.size()) ? dist[axis + 1] : 0,
                 0, out);
    return;
  }
  for (int v = lower; v < m[axis]; ++v) {
    cur.push_back(v);
    all_patterns(dist, m, cur, axis, remaining - 1, v, out);
    cur.pop_back();
  }
}

struct Distribution {
  std::vector<int> cuts;
  std::vector<Pattern> patterns;
};

}  // namespace

MdSearchResult solve_grid_axis_cuts_md(const GridColoring& coloring, const Box& box, int q, int t,
                                       const Rat& gamma, const MdSearchBudget& budget,
                                       const std::vector<int>& per_axis) {
  const int d = coloring.dim();
  if (box.dim() != d) throw InputError("box dimension does not match coloring");
  if (!coloring.domain().contains(box)) throw DomainError("box outside coloring domain");
  for (int i = 0; i < d; ++i)
    if (!(box.lo[i] < box.hi[i])) throw InputError("box must have positive extent");
  if (q < 1 || t < 0) throw InputError("need q >= 1 and t >= 0");
  if (gamma < 0) throw InputError("granularity must be >= 0");

  // Interval structure of the grid clipped to the box.
  std::vector<std::vector<double>> iv(d);
  std::vector<int> m(d);
  for (int i = 0; i < d; ++i) {
    iv[i].push_back(to_double(box.lo[i]));
    for (const auto& b : coloring.breakpoints(i))
      if (box.lo[i] < b && b < box.hi[i]) iv[i].push_back(to_double(b));
    iv[i].push_back(to_double(box.hi[i]));
    m[i] = static_cast<int>(iv[i].size()) - 1;
  }

  std::vector<std::vector<int>> dists;
  if (!per_axis.empty()) {
    if (static_cast<int>(per_axis.size()) != d) throw InputError("per-axis counts need d entries");
    int sum = 0;
    for (int v : per_axis) {
      if (v < 0) throw InputError("per-axis counts must be >= 0");
      sum += v;
    }
    if (sum != t) throw InputError("per-axis counts must sum to t");
    dists.push_back(per_axis);
  } else {
    std::vector<int> cur;
    compositions(t, d, cur, dists);
  }

  MdSearchResult result;
  RandomStream master(budget.seed);
  std::vector<Distribution> plan;
  for (std::size_t di = 0; di < dists.size(); ++di) {
    const auto& dist = dists[di];
    bool room = true;
    for (int i = 0; i < d; ++i)
      if ((dist[i] + 1) * gamma > box.extent(i)) room = false;
    if (!room) continue;
    Distribution D{dist, {}};
    mpz_class count = 1;
    for (int i = 0; i < d; ++i) count *= multisets(m[i], dist[i]);
    if (count <= budget.max_patterns) {
      Pattern cur;
      all_patterns(dist, m, cur, 0, dist[0], 0, D.patterns);
    } else {
      result.sampled = true;
      RandomStream rs = master.child(0x5a3d0000ULL + di);
      std::set<Pattern> seen;
      for (std::size_t s = 0; s < budget.max_patterns; ++s) {
        Pattern p;
        for (int i = 0; i < d; ++i) {
          std::vector<int> axis_cells(dist[i]);
          for (auto& v : axis_cells) v = static_cast<int>(rs.uniform_int(0, m[i] - 1));
          std::sort(axis_cells.begin(), axis_cells.end());
          p.insert(p.end(), axis_cells.begin(), axis_cells.end());
        }
        if (seen.insert(p).second) D.patterns.push_back(std::move(p));
      }
    }
    plan.push_back(std::move(D));
  }

  const MeasureTable table(coloring);
  const double tol = md_residual_tolerance(to_double(box.volume()));
  std::vector<double> blo(d), bhi(d);
  for (int i = 0; i < d; ++i) {
    blo[i] = to_double(box.lo[i]);
    bhi[i] = to_double(box.hi[i]);
  }

  // Flatten (distribution, pattern, labeling) into one ordered item list.
  struct Block {
    std::size_t plan_index;
    std::vector<std::vector<int>> labelings;
    std::size_t first_item;
    std::size_t items;
  };
  std::vector<Block> blocks;
  std::size_t total_items = 0;
  for (std::size_t pi = 0; pi < plan.size(); ++pi) {
    Block b{pi, canonical_labelings(static_cast<int>(piece_count_for(plan[pi].cuts)), q),
            total_items, 0};
    b.items = plan[pi].patterns.size() * b.labelings.size();
    total_items += b.items;
    blocks.push_back(std::move(b));
  }

  std::vector<double> item_best(total_items, std::numeric_limits<double>::infinity());
  std::vector<int> item_seeds(total_items, 0);
  std::vector<std::optional<Splitting>> found(total_items);

  auto run_item = [&](std::size_t item) -> bool {
    auto bit = std::upper_bound(blocks.begin(), blocks.end(), item,
                                [](std::size_t v, const Block& b) { return v < b.first_item; });
    const Block& blk = *std::prev(bit);
    const std::size_t local = item - blk.first_item;
    const Distribution& D = plan[blk.plan_index];
    const Pattern& pat = D.patterns[local / blk.labelings.size()];
    const auto& labels = blk.labelings[local % blk.labelings.size()];
    const int nvars = static_cast<int>(pat.size());

    Eigen::VectorXd lower(nvars), upper(nvars);
    std::vector<int> axis_of(nvars);
    {
      int v = 0;
      for (int i = 0; i < d; ++i)
        for (int c = 0; c < D.cuts[i]; ++c, ++v) {
          axis_of[v] = i;
          lower[v] = iv[i][pat[v]];
          upper[v] = iv[i][pat[v] + 1];
        }
    }
    const int k = coloring.k();
    const std::size_t pieces = labels.size();
    ResidualFn residual = [&](const Eigen::VectorXd& x) {
      std::vector<std::vector<double>> bounds(d);
      int v = 0;
      for (int i = 0; i < d; ++i) {
        bounds[i].push_back(blo[i]);
        for (int c = 0; c < D.cuts[i]; ++c) bounds[i].push_back(x[v++]);
        bounds[i].push_back(bhi[i]);
      }
      std::vector<double> parts(static_cast<std::size_t>(q) * k, 0.0);
      std::vector<int> idx(d, 0);
      std::vector<double> lo(d), hi(d);
      for (std::size_t p = 0; p < pieces; ++p) {
        for (int i = 0; i < d; ++i) {
          lo[i] = bounds[i][idx[i]];
          hi[i] = bounds[i][idx[i] + 1];
        }
        table.accumulate(lo, hi, std::span<double>(parts).subspan((labels[p] - 1) * k, k));
        for (int i = d - 1; i >= 0; --i) {
          if (++idx[i] <= D.cuts[i]) break;
          idx[i] = 0;
        }
      }
      Eigen::VectorXd r(static_cast<Eigen::Index>(k) * (q - 1));
      for (int j = 0; j < k; ++j)
        for (int l = 0; l + 1 < q; ++l)
          r[j * (q - 1) + l] = parts[l * k + j] - parts[(q - 1) * k + j];
      return r;
    };

    RandomStream rs = master.child(item);
    LeastSquaresOptions opts;
    opts.max_iterations = budget.lm_iterations;
    opts.tolerance = tol * 1e-2;
    for (int s = 0; s < budget.seeds_per_pattern; ++s) {
      Eigen::VectorXd x0(nvars);
      for (int v = 0; v < nvars; ++v) {
        if (s == 0) x0[v] = 0.5 * (lower[v] + upper[v]);
        else if (s == 1) x0[v] = lower[v];
        else if (s == 2) x0[v] = upper[v];
        else x0[v] = rs.uniform(lower[v], upper[v]);
      }
      ++item_seeds[item];
      LeastSquaresResult lm;
      if (nvars == 0) {
        const Eigen::VectorXd r0 = residual(x0);
        lm = {x0, r0.size() ? r0.cwiseAbs().maxCoeff() : 0.0, 0};
      } else {
        lm = levenberg_marquardt(residual, x0, lower, upper, opts);
      }
      item_best[item] = std::min(item_best[item], lm.residual_inf);
      if (lm.residual_inf > tol) {
        if (nvars == 0) break;
        continue;
      }
      for (double snap_tol : {1e-9, 1e-11, 1e-13}) {
        std::vector<AxisCut> cuts;
        for (int v = 0; v < nvars; ++v)
          cuts.push_back({axis_of[v], snap_to_rational(lm.x[v], snap_tol * std::max(1.0, std::abs(lm.x[v])),
                                                       snap_denominator_bound())});
        bool ordered = true;
        for (const auto& c : cuts)
          if (c.at < box.lo[c.axis] || c.at > box.hi[c.axis]) ordered = false;
        if (!ordered) continue;
        Splitting sp(box, cuts, labels, q);
        // Cuts on one axis were sorted; the labeling follows the pattern order.
        bool same_order = true;
        {
          int v = 0;
          for (int i = 0; i < d; ++i) {
            RatVec on = sp.cuts_on(i);
            for (int c = 0; c < D.cuts[i]; ++c, ++v)
              if (on[c] != cuts[v].at) same_order = false;
          }
        }
        if (!same_order) continue;
        if (granularity_axis(sp) < gamma) continue;
        if (!is_fair(part_measures(coloring, sp))) continue;
        found[item] = std::move(sp);
        return true;
      }
      if (nvars == 0) break;
    }
    return false;
  };

  auto hit = parallel_find_first(budget.jobs, total_items, run_item);
  const std::size_t done = hit ? *hit + 1 : total_items;
  result.patterns_explored = done;
  result.best_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < done; ++i) {
    result.seeds_run += static_cast<std::uint64_t>(item_seeds[i]);
    result.best_residual = std::min(result.best_residual, item_best[i]);
  }
  if (hit) {
    result.witness = std::move(found[*hit]);
    result.best_residual = std::min(result.best_residual, 0.0);
  }
  return result;
}

}  // namespace necklace
