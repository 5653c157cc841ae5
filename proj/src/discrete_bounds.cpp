#include "necklace/discrete_bounds.hpp"

#include <bit>

#include "necklace/errors.hpp"
#include "necklace/parallel.hpp"
#include "necklace/splitter1d.hpp"

namespace necklace {

namespace {

int cell_total(int n, int d) {
  if (n < 1 || d < 1) throw InputError("need n >= 1 and d >= 1");
  long cells = 1;
  for (int i = 0; i < d; ++i) {
    cells *= n;
    if (cells > kMaxSubsetCells) throw InputError("n^d exceeds the enumeration limit of 16 cells");
  }
  return static_cast<int>(cells);
}

mpz_class pow_ui(unsigned long base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

mpz_class binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

DiscreteNecklace subset_necklace(int n, int d, int q, std::uint64_t mask) {
  const int cells = cell_total(n, d);
  std::vector<int> colors(cells);
  for (int f = 0; f < cells; ++f) colors[f] = (mask >> f) & 1 ? 2 : 1;
  return DiscreteNecklace(std::vector<int>(d, n), std::move(colors), 2, q, {1});
}

SubsetCount count_splittable_subsets(int n, int d, int q, int t, int jobs) {
  const int cells = cell_total(n, d);
  if (q < 2) throw InputError("need q >= 2");
  if (t < 0) throw InputError("need t >= 0");
  const std::uint64_t masks = std::uint64_t{1} << cells;
  std::vector<char> ok(masks, 0);
  parallel_for(jobs, masks, [&](std::size_t m) {
    if (std::popcount(m) % q != 0) return;
    ok[m] = min_cuts_discrete(subset_necklace(n, d, q, m), t).has_value() ? 1 : 2;
  });
  SubsetCount r;
  r.n = n;
  r.d = d;
  r.q = q;
  r.t = t;
  for (char v : ok) {
    if (v != 0) ++r.divisible;
    if (v == 1) ++r.splittable;
  }
  r.total = pow_ui(2, static_cast<unsigned long>(cells));
  return r;
}

mpz_class equal_count_sum(const std::vector<int>& a) {
  int top = 0;
  for (int x : a) top = std::max(top, x);
  mpz_class sum = 0;
  for (int i = 0; i <= top; ++i) {
    mpz_class prod = 1;
    for (int x : a) prod *= binom(x, i);
    sum += prod;
  }
  return sum;
}

CountingBound counting_bound_report(int n, int d, int q, int t) {
  if (n < 1 || d < 1 || q < 2 || t < 0) throw InputError("need n, d >= 1, q >= 2, t >= 0");
  unsigned long cells = 1, pieces = 1;
  for (int i = 0; i < d; ++i) {
    cells *= static_cast<unsigned long>(n);
    pieces *= static_cast<unsigned long>(t + 1);
    if (cells > 64 || pieces > 4096) throw InputError("parameters too large for an exact report");
  }
  CountingBound r;
  r.n = n;
  r.d = d;
  r.q = q;
  r.t = t;
  r.cut_choices = pow_ui(static_cast<unsigned long>(d) * n, static_cast<unsigned long>(t));
  r.labelings = pow_ui(static_cast<unsigned long>(q), pieces);
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(static_cast<int>(cells), q, cur, comps);
  r.max_sum = -1;
  for (const auto& a : comps) {
    const mpz_class s = equal_count_sum(a);
    if (s > r.max_sum) {
      r.max_sum = s;
      r.argmax = a;
    }
  }
  std::vector<int> balanced(q, static_cast<int>(cells) / q);
  for (int i = 0; i < static_cast<int>(cells) % q; ++i) ++balanced[i];
  r.balanced_sum = equal_count_sum(balanced);
  r.estimate = r.cut_choices * r.labelings * r.max_sum;
  r.total = pow_ui(2, cells);
  return r;
}

std::optional<HardSubset> find_hard_subset(int n, int d, int q, int jobs) {
  const int cells = cell_total(n, d);
  if (q < 2) throw InputError("need q >= 2");
  const int target = (d * q + 1) / 2;
  const int cap = (2 * d - 1) * (q - 1);
  for (int size = 0; size <= cells; size += q) {
    std::vector<std::uint64_t> masks;
    // Lexicographic order of the sorted index lists of the chosen cells.
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      std::uint64_t m = 0;
      for (int i : idx) m |= std::uint64_t{1} << i;
      masks.push_back(m);
      int i = size - 1;
      while (i >= 0 && idx[i] == cells - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    auto hit = parallel_find_first(jobs, masks.size(), [&](std::size_t i) {
      return !min_cuts_discrete(subset_necklace(n, d, q, masks[i]), target - 1).has_value();
    });
    if (!hit) continue;
    DiscreteNecklace nk = subset_necklace(n, d, q, masks[*hit]);
    const auto exact = min_cuts_discrete(nk, std::max(cap, target));
    if (!exact) throw std::logic_error("single-color subset exceeds the lifted cut bound");
    return HardSubset{std::move(nk), exact->t_min, target};
  }
  return std::nullopt;
}

DiscreteNecklace compose_multicolor_hard_instance(const DiscreteNecklace& base, int k) {
  if (k < 2) throw InputError("need k >= 2");
  const int d = base.dim();
  std::vector<int> sides(d);
  for (int i = 0; i < d; ++i) sides[i] = (k - 1) * base.sides()[i];
  long total = 1;
  for (int s : sides) total *= s;
  std::vector<int> colors(static_cast<std::size_t>(total), 1);
  DiscreteNecklace shape(sides, colors, k, base.q(), {1});
  for (int copy = 0; copy < k - 1; ++copy)
    for (std::size_t f = 0; f < base.cell_count(); ++f) {
      if (base.color(f) != 2) continue;
      auto x = base.coords(f);
      for (int i = 0; i < d; ++i) x[i] += copy * base.sides()[i];
      colors[shape.flat_index(x)] = copy + 2;
    }
  return DiscreteNecklace(std::move(sides), std::move(colors), k, base.q(), {1});
}

}  // namespace necklace
