#include "necklace/splitter1d.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "necklace/errors.hpp"
#include "necklace/parallel.hpp"

namespace necklace {

// ---------------------------------------------------------------------------
// Discrete minimum cuts

namespace {

struct Candidate {
  int axis;
  int pos;  // cut at pos + 1/2, between layers pos and pos + 1 (1-based)
};

class DiscreteEvaluator {
 public:
  explicit DiscreteEvaluator(const DiscreteNecklace& n) : n_(n), d_(n.dim()), q_(n.q()) {
    const auto counts = n.color_counts();
    for (int c = 1; c <= n.k(); ++c)
      if (n.tracked(c) && counts[c - 1] > 0) {
        color_slot_.push_back(c);
        target_.push_back(counts[c - 1] / q_);
      }
    slot_of_.assign(n.k() + 1, -1);
    for (std::size_t s = 0; s < color_slot_.size(); ++s) slot_of_[color_slot_[s]] = static_cast<int>(s);
    coords_.resize(n.cell_count());
    for (std::size_t f = 0; f < n.cell_count(); ++f) {
      coords_[f] = n.coords(f);
      for (auto& x : coords_[f]) --x;
    }
    slab_of_.resize(d_);
    for (int i = 0; i < d_; ++i) slab_of_[i].resize(n.sides()[i]);
  }

  /// Labeling of the pieces cut by `cuts` (sorted by axis, pos), or empty.
  std::vector<int> try_cuts(const std::vector<Candidate>& cuts) {
    std::vector<int> per_axis(d_, 0);
    for (int i = 0; i < d_; ++i) std::fill(slab_of_[i].begin(), slab_of_[i].end(), 0);
    for (const auto& c : cuts) {
      ++per_axis[c.axis];
      auto& s = slab_of_[c.axis];
      for (int x = c.pos; x < static_cast<int>(s.size()); ++x) ++s[x];
    }
    pieces_ = piece_count_for(per_axis);
    const std::size_t m = color_slot_.size();
    counts_.assign(pieces_ * m, 0);
    for (std::size_t f = 0; f < coords_.size(); ++f) {
      const int slot = slot_of_[n_.color(f)];
      if (slot < 0) continue;
      std::size_t piece = 0;
      for (int i = 0; i < d_; ++i)
        piece = piece * static_cast<std::size_t>(per_axis[i] + 1) + slab_of_[i][coords_[f][i]];
      ++counts_[piece * m + slot];
    }
    sums_.assign(static_cast<std::size_t>(q_) * m, 0);
    labels_.assign(pieces_, 0);
    if (!assign(0, 0)) return {};
    return labels_;
  }

 private:
  bool assign(std::size_t p, int used) {
    if (p == pieces_) return true;
    const std::size_t m = color_slot_.size();
    const long* c = &counts_[p * m];
    bool empty = true;
    for (std::size_t j = 0; j < m && empty; ++j) empty = c[j] == 0;
    if (empty) {
      labels_[p] = 1;
      return assign(p + 1, std::max(used, 1));
    }
    const int top = std::min(q_, used + 1);
    for (int l = 1; l <= top; ++l) {
      long* s = &sums_[static_cast<std::size_t>(l - 1) * m];
      bool fits = true;
      for (std::size_t j = 0; j < m; ++j)
        if (s[j] + c[j] > target_[j]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (std::size_t j = 0; j < m; ++j) s[j] += c[j];
      labels_[p] = l;
      if (assign(p + 1, std::max(used, l))) return true;
      for (std::size_t j = 0; j < m; ++j) s[j] -= c[j];
    }
    return false;
  }

  const DiscreteNecklace& n_;
  int d_;
  int q_;
  std::vector<int> color_slot_;
  std::vector<int> slot_of_;
  std::vector<long> target_;
  std::vector<std::vector<int>> coords_;
  std::vector<std::vector<int>> slab_of_;
  std::size_t pieces_ = 0;
  std::vector<long> counts_;
  std::vector<long> sums_;
  std::vector<int> labels_;
};

Splitting lattice_splitting(const DiscreteNecklace& n, const std::vector<Candidate>& cuts,
                            std::vector<int> labels) {
  std::vector<AxisCut> out;
  for (const auto& c : cuts) out.push_back({c.axis, Rat(2 * c.pos + 1, 2)});
  return Splitting(n.box(), std::move(out), std::move(labels), n.q());
}

bool next_combination(std::vector<int>& idx, int n) {
  const int t = static_cast<int>(idx.size());
  int i = t - 1;
  while (i >= 0 && idx[i] == n - t + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

std::optional<MinCutsResult> min_cuts_discrete(const DiscreteNecklace& necklace, int t_cap,
                                               const std::vector<int>& per_axis_budget, int jobs) {
  const int d = necklace.dim();
  if (t_cap < 0) throw InputError("t_cap must be >= 0");
  if (!per_axis_budget.empty() && static_cast<int>(per_axis_budget.size()) != d)
    throw InputError("per-axis budget needs one entry per axis");
  std::vector<Candidate> cands;
  for (int i = 0; i < d; ++i)
    for (int p = 1; p < necklace.sides()[i]; ++p) cands.push_back({i, p});
  const int total = static_cast<int>(cands.size());

  auto within_budget = [&](const std::vector<int>& idx) {
    if (per_axis_budget.empty()) return true;
    std::vector<int> used(d, 0);
    for (int i : idx)
      if (++used[cands[i].axis] > per_axis_budget[cands[i].axis]) return false;
    return true;
  };
  auto pick = [&](const std::vector<int>& idx) {
    std::vector<Candidate> cuts;
    for (int i : idx) cuts.push_back(cands[i]);
    return cuts;
  };

  MinCutsResult result{0, Splitting(necklace.box(), {}, std::vector<int>(1, 1), necklace.q()), 0};
  DiscreteEvaluator eval(necklace);
  for (int t = 0; t <= std::min(t_cap, total); ++t) {
    std::vector<int> idx(t);
    for (int i = 0; i < t; ++i) idx[i] = i;
    if (jobs <= 1) {
      do {
        if (!within_budget(idx)) continue;
        ++result.cut_sets_tried;
        const auto cuts = pick(idx);
        auto labels = eval.try_cuts(cuts);
        if (!labels.empty()) {
          result.t_min = t;
          result.witness = lattice_splitting(necklace, cuts, std::move(labels));
          return result;
        }
      } while (next_combination(idx, total));
      continue;
    }
    std::vector<std::vector<int>> combos;
    do {
      if (within_budget(idx)) combos.push_back(idx);
    } while (next_combination(idx, total));
    auto hit = parallel_find_first(jobs, combos.size(), [&](std::size_t c) {
      DiscreteEvaluator local(necklace);
      return !local.try_cuts(pick(combos[c])).empty();
    });
    if (hit) {
      result.cut_sets_tried += *hit + 1;
      const auto cuts = pick(combos[*hit]);
      result.t_min = t;
      result.witness = lattice_splitting(necklace, cuts, eval.try_cuts(cuts));
      return result;
    }
    result.cut_sets_tried += combos.size();
  }
  return std::nullopt;
}

std::optional<MinCutsResult> min_cuts_discrete_1d(const DiscreteNecklace& necklace, int t_cap,
                                                  int jobs) {
  if (necklace.dim() != 1) throw InputError("min_cuts_discrete_1d needs a 1-D necklace");
  return min_cuts_discrete(necklace, t_cap, {}, jobs);
}

int alon_cap(const DiscreteNecklace& necklace) {
  const auto counts = necklace.color_counts();
  int k = 0;
  for (int c = 1; c <= necklace.k(); ++c)
    if (necklace.tracked(c) && counts[c - 1] > 0) ++k;
  return k * (necklace.q() - 1);
}

Splitting solve_discrete_1d(const DiscreteNecklace& necklace, int jobs) {
  auto r = min_cuts_discrete_1d(necklace, alon_cap(necklace), jobs);
  if (!r) throw std::logic_error("no fair splitting within the Alon bound");
  return std::move(r->witness);
}

// ---------------------------------------------------------------------------
// Combinatorics

mpz_class stirling2(int n, int k) {
  if (n < 0 || k < 0) return 0;
  std::vector<mpz_class> row(k + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

std::vector<std::vector<int>> canonical_labelings(int pieces, int q) {
  std::vector<std::vector<int>> out;
  if (pieces < q) return out;
  std::vector<int> cur(pieces, 0);
  auto rec = [&](auto&& self, int p, int used) -> void {
    if (pieces - p < q - used) return;
    if (p == pieces) {
      out.push_back(cur);
      return;
    }
    for (int l = 1; l <= std::min(q, used + 1); ++l) {
      cur[p] = l;
      self(self, p + 1, std::max(used, l));
    }
  };
  rec(rec, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Continuous 1-D pattern engine
//
// Slots interleave breakpoints and open segments: breakpoint i is slot 2i,
// segment [a_i, a_{i+1}] is slot 2i+1. A point in slot s is a(s) + y with
// 0 <= y <= len(s) (len = 0 for breakpoints).

namespace {

class LineContext {
 public:
  explicit LineContext(const Line1DProblem& p) : p_(p) {
    const auto& c = p.coloring;
    if (c.dim() != 1) throw InputError("1-D search needs a 1-D coloring");
    if (p.q < 1) throw InputError("q must be positive");
    if (p.t < 0) throw InputError("t must be >= 0");
    if (p.gamma < 0) throw InputError("granularity must be >= 0");
    if (!(p.lo < p.hi)) throw InputError("interval must have lo < hi");
    if (p.lo < c.breakpoints(0).front() || p.hi > c.breakpoints(0).back())
      throw DomainError("interval outside the coloring domain");
    if (p.free_endpoints && p.gamma <= 0)
      throw InputError("free endpoints need a positive granularity");
    k_ = c.k();

    // Refine the grid so lo and hi are breakpoints.
    const auto& bp = c.breakpoints(0);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      std::vector<Rat> pts{bp[i]};
      if (bp[i] < p.lo && p.lo < bp[i + 1]) pts.push_back(p.lo);
      if (bp[i] < p.hi && p.hi < bp[i + 1]) pts.push_back(p.hi);
      for (auto& x : pts) {
        a_.push_back(x);
        col_.push_back(c.color(i));
      }
    }
    a_.push_back(bp.back());
    const int m = static_cast<int>(col_.size());
    base_.assign(static_cast<std::size_t>(m + 1) * k_, 0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < k_; ++j) base_[(i + 1) * k_ + j] = base_[i * k_ + j];
      base_[(i + 1) * k_ + col_[i] - 1] += a_[i + 1] - a_[i];
    }
    const int il = static_cast<int>(std::find(a_.begin(), a_.end(), p.lo) - a_.begin());
    const int ih = static_cast<int>(std::find(a_.begin(), a_.end(), p.hi) - a_.begin());

    std::vector<int> seg_slots, bp_slots;
    for (int i = il; i < ih; ++i) seg_slots.push_back(2 * i + 1);
    for (int i = il; i <= ih; ++i) bp_slots.push_back(2 * i);
    allowed_.assign(p.t + 2, p.boundary_cuts_only ? bp_slots : seg_slots);
    if (p.free_endpoints) {
      allowed_.front() = seg_slots;
      allowed_.back() = seg_slots;
    } else {
      allowed_.front() = {2 * il};
      allowed_.back() = {2 * ih};
    }
    labelings_ = canonical_labelings(p.t + 1, p.q);
    build_counts();
  }

  int points() const { return p_.t + 2; }
  const std::vector<int>& allowed(int i) const { return allowed_[i]; }
  const std::vector<std::vector<int>>& labelings() const { return labelings_; }
  const Line1DProblem& problem() const { return p_; }

  const Rat& slot_lo(int s) const { return a_[s / 2]; }
  Rat slot_len(int s) const { return s % 2 == 0 ? Rat(0) : Rat(a_[s / 2 + 1] - a_[s / 2]); }

  /// Number of nondecreasing completions of points from..t+1 with
  /// slot >= lower bound.
  mpz_class completions(int from, int lower) const {
    if (from == points()) return 1;
    mpz_class total = 0;
    const auto& al = allowed_[from];
    for (std::size_t idx = 0; idx < al.size(); ++idx)
      if (al[idx] >= lower) total += count_[from][idx];
    return total;
  }

  /// Greedy lower-bound chain; false iff the relaxed prefix system is
  /// infeasible.
  bool chain_ok(const std::vector<int>& slots) const {
    Rat pos = slot_lo(slots[0]);
    for (std::size_t r = 0; r < slots.size(); ++r) {
      if (r > 0) {
        pos += p_.gamma;
        if (pos < slot_lo(slots[r])) pos = slot_lo(slots[r]);
      }
      if (pos > slot_lo(slots[r]) + slot_len(slots[r])) return false;
    }
    const int remaining = points() - static_cast<int>(slots.size());
    return pos + remaining * p_.gamma <= p_.hi;
  }

  /// Prefix points keep their slots; later points only get
  /// slot_lo(last) <= p <= hi and the gap constraints.
  LinearProgram prefix_system(const std::vector<int>& slots) const {
    const int n = points();
    const int fixed = static_cast<int>(slots.size());
    LinearProgram lp(n);
    lp.nonnegative.assign(n, true);
    std::vector<Rat> offset(n), upper(n);
    for (int i = 0; i < n; ++i) {
      if (i < fixed) {
        offset[i] = slot_lo(slots[i]);
        upper[i] = slot_len(slots[i]);
      } else {
        offset[i] = slot_lo(slots[fixed - 1]);
        upper[i] = p_.hi - offset[i];
      }
    }
    add_bounds_and_gaps(lp, offset, upper);
    return lp;
  }

  LinearProgram leaf_system(const std::vector<int>& slots, const std::vector<int>& labels) const {
    const int n = points();
    LinearProgram lp(n);
    lp.nonnegative.assign(n, true);
    std::vector<Rat> offset(n), upper(n);
    for (int i = 0; i < n; ++i) {
      offset[i] = slot_lo(slots[i]);
      upper[i] = slot_len(slots[i]);
    }
    add_bounds_and_gaps(lp, offset, upper);
    // W_{j,l} - W_{j,q} = 0, with G_j(P_i) = base_j(slot) + y_i [color(slot) = j].
    for (int j = 0; j < k_; ++j) {
      for (int l = 1; l < p_.q; ++l) {
        RatVec row(n, 0);
        Rat constant = 0;
        for (int r = 0; r + 1 < n; ++r) {
          const int lab = labels[r];
          const int sign = lab == l ? 1 : (lab == p_.q ? -1 : 0);
          if (sign == 0) continue;
          add_g(row, constant, r + 1, slots[r + 1], j, sign);
          add_g(row, constant, r, slots[r], j, -sign);
        }
        lp.add_equality(std::move(row), -constant);
      }
    }
    return lp;
  }

  std::vector<Rat> positions(const std::vector<int>& slots, const RatVec& y) const {
    std::vector<Rat> out(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) out[i] = slot_lo(slots[i]) + y[i];
    return out;
  }

 private:
  void add_bounds_and_gaps(LinearProgram& lp, const std::vector<Rat>& offset,
                           const std::vector<Rat>& upper) const {
    const int n = points();
    for (int i = 0; i < n; ++i) {
      RatVec row(n, 0);
      row[i] = 1;
      lp.add_inequality(std::move(row), upper[i]);
    }
    for (int i = 0; i + 1 < n; ++i) {
      RatVec row(n, 0);
      row[i] = 1;
      row[i + 1] = -1;
      lp.add_inequality(std::move(row), offset[i + 1] - offset[i] - p_.gamma);
    }
  }

  void add_g(RatVec& row, Rat& constant, int point, int slot, int color, int sign) const {
    const int bp = slot / 2;
    constant += sign * base_[static_cast<std::size_t>(bp) * k_ + color];
    if (slot % 2 == 1 && col_[bp] - 1 == color) row[point] += sign;
  }

  void build_counts() {
    const int n = points();
    count_.assign(n, {});
    for (int i = n - 1; i >= 0; --i) {
      count_[i].resize(allowed_[i].size());
      for (std::size_t idx = 0; idx < allowed_[i].size(); ++idx)
        count_[i][idx] = i + 1 == n ? mpz_class(1) : completions(i + 1, allowed_[i][idx]);
    }
  }

  const Line1DProblem& p_;
  int k_ = 0;
  std::vector<Rat> a_;       // refined breakpoints
  std::vector<int> col_;     // segment colors
  RatVec base_;              // base_[i*k + j]: measure of color j on [a_0, a_i]
  std::vector<std::vector<int>> allowed_;
  std::vector<std::vector<mpz_class>> count_;
  std::vector<std::vector<int>> labelings_;
};

}  // namespace

Line1DResult search_line_1d(const Line1DProblem& problem, const Line1DOptions& options) {
  LineContext ctx(problem);
  Line1DResult result;
  std::vector<RefutationEntry> prefix_entries;
  std::vector<std::vector<int>> leaves;

  // Depth-first enumeration of monotone slot sequences; prefixes failing the
  // chain test are refuted by their relaxed system.
  std::vector<int> slots;
  auto dfs = [&](auto&& self, int depth) -> void {
    if (depth == ctx.points()) {
      leaves.push_back(slots);
      return;
    }
    for (int s : ctx.allowed(depth)) {
      if (!slots.empty() && s < slots.back()) continue;
      slots.push_back(s);
      bool pruned = false;
      if (!ctx.chain_ok(slots)) {
        LinearProgram lp = ctx.prefix_system(slots);
        LpResult r = solve_lp(lp);
        ++result.stats.lps_solved;
        if (r.status == LpStatus::Infeasible) {
          RefutationEntry e;
          e.slots = slots;
          e.system_hash = lp.hash();
          e.farkas = std::move(r.farkas);
          if (options.keep_systems) e.system = std::move(lp);
          prefix_entries.push_back(std::move(e));
          ++result.stats.prefixes_refuted;
          pruned = true;
        }
      }
      if (!pruned) self(self, depth + 1);
      slots.pop_back();
    }
  };
  dfs(dfs, 0);
  result.stats.leaves = leaves.size();

  const auto& labs = ctx.labelings();
  const std::size_t per = labs.size();
  const std::size_t items = leaves.size() * per;
  std::vector<LpResult> lp_results(items);
  std::vector<LinearProgram> systems(options.keep_systems ? items : 0);
  auto hit = parallel_find_first(options.jobs, items, [&](std::size_t i) {
    LinearProgram lp = ctx.leaf_system(leaves[i / per], labs[i % per]);
    lp_results[i] = solve_lp(lp);
    if (options.keep_systems) systems[i] = std::move(lp);
    return lp_results[i].status != LpStatus::Infeasible;
  });

  if (hit) {
    result.stats.lps_solved += *hit + 1;
    const auto& pattern = leaves[*hit / per];
    const auto& labels = labs[*hit % per];
    const auto pos = ctx.positions(pattern, lp_results[*hit].x);
    Box box{{pos.front()}, {pos.back()}};
    std::vector<AxisCut> cuts;
    for (std::size_t i = 1; i + 1 < pos.size(); ++i) cuts.push_back({0, pos[i]});
    Splitting s(std::move(box), std::move(cuts), labels, problem.q);
    const bool ok = is_fair(part_measures(problem.coloring, s)) &&
                    granularity_axis(s) >= problem.gamma && problem.lo <= pos.front() &&
                    pos.back() <= problem.hi;
    if (!ok) throw std::logic_error("1-D witness failed exact revalidation");
    result.witness = std::move(s);
    return result;
  }
  result.stats.lps_solved += items;

  Certificate1D cert{problem, ctx.completions(0, -1), mpz_class(static_cast<unsigned long>(per)), {}};
  // Merge prefix and leaf entries in slot order for a canonical listing.
  std::vector<RefutationEntry> leaf_entries;
  leaf_entries.reserve(items);
  for (std::size_t i = 0; i < items; ++i) {
    RefutationEntry e;
    e.slots = leaves[i / per];
    e.labeling = labs[i % per];
    LinearProgram lp = options.keep_systems ? std::move(systems[i])
                                            : ctx.leaf_system(e.slots, e.labeling);
    e.system_hash = lp.hash();
    e.farkas = std::move(lp_results[i].farkas);
    if (options.keep_systems) e.system = std::move(lp);
    leaf_entries.push_back(std::move(e));
  }
  std::merge(std::make_move_iterator(prefix_entries.begin()),
             std::make_move_iterator(prefix_entries.end()),
             std::make_move_iterator(leaf_entries.begin()),
             std::make_move_iterator(leaf_entries.end()), std::back_inserter(cert.entries),
             [](const RefutationEntry& x, const RefutationEntry& y) {
               if (x.slots != y.slots) return x.slots < y.slots;
               return x.labeling < y.labeling;
             });
  result.certificate = std::move(cert);
  return result;
}

Line1DResult solve_continuous_1d(const GridColoring& coloring, const Rat& lo, const Rat& hi, int q,
                                 int t, const Rat& gamma, const Line1DOptions& options) {
  Line1DProblem p{coloring, q, t, gamma, lo, hi, false, false};
  return search_line_1d(p, options);
}

bool verify_certificate(const Certificate1D& cert) {
  LineContext ctx(cert.problem);
  const auto& labs = ctx.labelings();
  if (cert.labelings != static_cast<unsigned long>(labs.size())) return false;
  if (cert.labelings != stirling2(cert.problem.t + 1, cert.problem.q)) return false;
  if (cert.patterns != ctx.completions(0, -1)) return false;

  mpz_class covered = 0;
  for (const auto& e : cert.entries) {
    const int len = static_cast<int>(e.slots.size());
    if (len == 0 || len > ctx.points()) return false;
    for (int i = 0; i < len; ++i) {
      const auto& al = ctx.allowed(i);
      if (!std::binary_search(al.begin(), al.end(), e.slots[i])) return false;
      if (i > 0 && e.slots[i] < e.slots[i - 1]) return false;
    }
    LinearProgram lp;
    if (e.is_prefix()) {
      lp = ctx.prefix_system(e.slots);
      covered += ctx.completions(len, e.slots.back()) * cert.labelings;
    } else {
      if (len != ctx.points()) return false;
      if (std::find(labs.begin(), labs.end(), e.labeling) == labs.end()) return false;
      lp = ctx.leaf_system(e.slots, e.labeling);
      covered += 1;
    }
    if (lp.hash() != e.system_hash) return false;
    if (!verify_farkas(lp, e.farkas)) return false;
  }

  // Disjointness: after sorting, an entry that is a prefix of another sorts
  // before it with only its own extensions in between.
  std::vector<const RefutationEntry*> order;
  for (const auto& e : cert.entries) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](auto* x, auto* y) {
    if (x->slots != y->slots) return x->slots < y->slots;
    return x->labeling < y->labeling;
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto& x = *order[i];
    const auto& y = *order[i + 1];
    if (x.slots == y.slots) {
      if (x.is_prefix() || y.is_prefix() || x.labeling == y.labeling) return false;
      continue;
    }
    if (x.slots.size() < y.slots.size() &&
        std::equal(x.slots.begin(), x.slots.end(), y.slots.begin()))
      return false;
  }
  return covered == cert.patterns * cert.labelings;
}

}  // namespace necklace
