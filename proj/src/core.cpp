#include "necklace/core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "necklace/errors.hpp"

namespace necklace {

// ---------------------------------------------------------------------------
// Box

Rat Box::volume() const {
  Rat v = 1;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(const Box& inner) const {
  if (inner.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
  return true;
}

NecklaceBox::NecklaceBox(RatVec c, Rat s) : corner(std::move(c)), side(std::move(s)) {
  if (side <= 0) throw InputError("necklace side must be positive");
  if (corner.empty()) throw InputError("necklace needs dimension >= 1");
}

Box NecklaceBox::to_box() const {
  Box b{corner, corner};
  for (auto& h : b.hi) h += side;
  return b;
}

// ---------------------------------------------------------------------------
// DiscreteNecklace

DiscreteNecklace::DiscreteNecklace(std::vector<int> sides, std::vector<ColorId> cells, int k,
                                   int q, std::vector<ColorId> exempt)
    : sides_(std::move(sides)), cells_(std::move(cells)), k_(k), q_(q), exempt_(std::move(exempt)) {
  if (sides_.empty()) throw InputError("discrete necklace needs d >= 1");
  if (k_ < 1) throw InputError("k must be >= 1");
  if (q_ < 2) throw InputError("q must be >= 2");
  std::size_t total = 1;
  for (int n : sides_) {
    if (n < 1) throw InputError("every side must be >= 1");
    total *= static_cast<std::size_t>(n);
  }
  if (cells_.size() != total)
    throw InputError("cell count " + std::to_string(cells_.size()) + " does not match sides (" +
                     std::to_string(total) + ")");
  for (ColorId c : cells_)
    if (c < 1 || c > k_) throw InputError("color " + std::to_string(c) + " outside 1..k");
  std::sort(exempt_.begin(), exempt_.end());
  exempt_.erase(std::unique(exempt_.begin(), exempt_.end()), exempt_.end());
  for (ColorId c : exempt_)
    if (c < 1 || c > k_) throw InputError("exempt color outside 1..k");
  auto counts = color_counts();
  for (int c = 1; c <= k_; ++c)
    if (tracked(c) && counts[c - 1] % q_ != 0)
      throw InputError("color " + std::to_string(c) + " has " + std::to_string(counts[c - 1]) +
                       " cells, not divisible by q=" + std::to_string(q_));
}

bool DiscreteNecklace::tracked(ColorId c) const {
  return !std::binary_search(exempt_.begin(), exempt_.end(), c);
}

std::vector<long> DiscreteNecklace::color_counts() const {
  std::vector<long> counts(k_, 0);
  for (ColorId c : cells_) ++counts[c - 1];
  return counts;
}

int DiscreteNecklace::colors_present() const {
  auto counts = color_counts();
  return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; }));
}

std::vector<int> DiscreteNecklace::coords(std::size_t flat) const {
  std::vector<int> x(sides_.size());
  for (int i = dim() - 1; i >= 0; --i) {
    x[i] = static_cast<int>(flat % sides_[i]) + 1;
    flat /= sides_[i];
  }
  return x;
}

std::size_t DiscreteNecklace::flat_index(std::span<const int> x) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) flat = flat * sides_[i] + static_cast<std::size_t>(x[i] - 1);
  return flat;
}

Box DiscreteNecklace::box() const {
  Box b;
  for (int n : sides_) {
    b.lo.emplace_back(1, 2);
    b.hi.push_back(Rat(n) + Rat(1, 2));
  }
  return b;
}

// ---------------------------------------------------------------------------
// GridColoring

GridColoring::GridColoring(std::vector<RatVec> breakpoints, std::vector<ColorId> colors, int k)
    : breakpoints_(std::move(breakpoints)), colors_(std::move(colors)), k_(k) {
  if (breakpoints_.empty()) throw InputError("grid coloring needs d >= 1");
  if (k_ < 1) throw InputError("k must be >= 1");
  std::size_t total = 1;
  for (const auto& axis : breakpoints_) {
    if (axis.size() < 2) throw InputError("each axis needs at least two breakpoints");
    for (std::size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i - 1] < axis[i])) throw InputError("breakpoints must be strictly increasing");
    total *= axis.size() - 1;
  }
  if (colors_.size() != total) throw InputError("grid cell count does not match breakpoints");
  for (ColorId c : colors_)
    if (c < 1 || c > k_) throw InputError("grid color outside 1..k");
}

ColorId GridColoring::color_at(std::span<const int> cell) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) flat = flat * intervals(i) + static_cast<std::size_t>(cell[i]);
  return colors_[flat];
}

Box GridColoring::domain() const {
  Box b;
  for (const auto& axis : breakpoints_) {
    b.lo.push_back(axis.front());
    b.hi.push_back(axis.back());
  }
  return b;
}

// ---------------------------------------------------------------------------
// Splitting

std::size_t piece_count_for(std::span<const int> cuts_per_axis) {
  std::size_t n = 1;
  for (int t : cuts_per_axis) n *= static_cast<std::size_t>(t + 1);
  return n;
}

Splitting::Splitting(Box box, std::vector<AxisCut> cuts, std::vector<int> labeling, int q)
    : box_(std::move(box)), cuts_(std::move(cuts)), labeling_(std::move(labeling)), q_(q) {
  if (box_.dim() < 1 || box_.hi.size() != box_.lo.size())
    throw InputError("splitting box is malformed");
  for (int i = 0; i < box_.dim(); ++i)
    if (box_.hi[i] < box_.lo[i]) throw InputError("splitting box has negative extent");
  if (q_ < 1) throw InputError("q must be positive");
  for (const auto& c : cuts_)
    if (c.axis < 0 || c.axis >= box_.dim()) throw InputError("cut axis outside 1..d");
  std::sort(cuts_.begin(), cuts_.end());
  auto counts = slab_counts();
  if (labeling_.size() != piece_count_for(counts))
    throw InputError("labeling has " + std::to_string(labeling_.size()) + " entries, expected " +
                     std::to_string(piece_count_for(counts)));
  for (int l : labeling_)
    if (l < 1 || l > q_) throw InputError("part label outside 1..q");
}

RatVec Splitting::cuts_on(int axis) const {
  RatVec out;
  for (const auto& c : cuts_)
    if (c.axis == axis) out.push_back(c.at);
  return out;
}

std::vector<int> Splitting::slab_counts() const {
  std::vector<int> counts(box_.dim(), 0);
  for (const auto& c : cuts_) ++counts[c.axis];
  return counts;
}

std::vector<Box> Splitting::pieces() const {
  const int d = dim();
  std::vector<RatVec> bounds(d);
  for (int i = 0; i < d; ++i) {
    bounds[i].push_back(box_.lo[i]);
    for (auto& v : cuts_on(i)) bounds[i].push_back(v);
    bounds[i].push_back(box_.hi[i]);
  }
  std::vector<Box> out;
  std::vector<int> idx(d, 0);
  const std::size_t n = labeling_.size();
  out.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    Box b;
    for (int i = 0; i < d; ++i) {
      b.lo.push_back(bounds[i][idx[i]]);
      b.hi.push_back(bounds[i][idx[i] + 1]);
    }
    out.push_back(std::move(b));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(bounds[i].size()) - 1) break;
      idx[i] = 0;
    }
  }
  return out;
}

Rat PartMeasures::column_total(int color) const {
  Rat s = 0;
  for (int l = 0; l < q_; ++l) s += at(l, color);
  return s;
}

// ---------------------------------------------------------------------------
// Measures

RatVec measure_vector(const GridColoring& coloring, const Box& box) {
  const int d = coloring.dim();
  if (box.dim() != d) throw DomainError("box dimension does not match coloring");
  if (!coloring.domain().contains(box)) throw DomainError("box outside coloring domain");
  for (int i = 0; i < d; ++i)
    if (box.hi[i] < box.lo[i]) throw DomainError("box has negative extent");

  // Per axis: first overlapping interval and the overlap lengths.
  std::vector<int> first(d), count(d);
  std::vector<RatVec> overlap(d);
  for (int i = 0; i < d; ++i) {
    const auto& bp = coloring.breakpoints(i);
    const int m = coloring.intervals(i);
    int lo_idx = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), box.lo[i]) - bp.begin()) - 1;
    lo_idx = std::clamp(lo_idx, 0, m - 1);
    first[i] = lo_idx;
    for (int c = lo_idx; c < m && bp[c] < box.hi[i]; ++c) {
      Rat a = bp[c] > box.lo[i] ? bp[c] : box.lo[i];
      Rat b = bp[c + 1] < box.hi[i] ? bp[c + 1] : box.hi[i];
      overlap[i].push_back(b > a ? Rat(b - a) : Rat(0));
    }
    count[i] = static_cast<int>(overlap[i].size());
  }

  RatVec result(coloring.k(), 0);
  for (int i = 0; i < d; ++i)
    if (count[i] == 0) return result;

  std::vector<int> idx(d, 0), cell(d);
  for (;;) {
    Rat v = 1;
    for (int i = 0; i < d && v != 0; ++i) v *= overlap[i][idx[i]];
    if (v != 0) {
      for (int i = 0; i < d; ++i) cell[i] = first[i] + idx[i];
      result[coloring.color_at(cell) - 1] += v;
    }
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++idx[i] < count[i]) break;
      idx[i] = 0;
    }
    if (i < 0) break;
  }
  return result;
}

PartMeasures part_measures(const GridColoring& coloring, const Splitting& splitting) {
  PartMeasures pm(splitting.q(), coloring.k());
  const auto pieces = splitting.pieces();
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    auto mv = measure_vector(coloring, pieces[p]);
    const int part = splitting.labeling()[p] - 1;
    for (int c = 0; c < coloring.k(); ++c) pm.at(part, c) += mv[c];
  }
  return pm;
}

bool is_fair(const PartMeasures& pm) {
  for (int c = 0; c < pm.k(); ++c) {
    const Rat share = pm.column_total(c) / pm.q();
    for (int l = 0; l < pm.q(); ++l)
      if (pm.at(l, c) != share) return false;
  }
  return true;
}

Rat granularity_axis(const Splitting& splitting) {
  const Box& box = splitting.box();
  Rat best = box.extent(0);
  for (int i = 0; i < splitting.dim(); ++i) {
    Rat prev = box.lo[i];
    for (const auto& v : splitting.cuts_on(i)) {
      if (v - prev < best) best = v - prev;
      prev = v;
    }
    if (box.hi[i] - prev < best) best = box.hi[i] - prev;
  }
  return best;
}

GridColoring discrete_to_grid(const DiscreteNecklace& necklace) {
  std::vector<RatVec> bps;
  for (int n : necklace.sides()) {
    RatVec axis;
    for (int x = 0; x <= n; ++x) axis.emplace_back(x);
    bps.push_back(std::move(axis));
  }
  return GridColoring(std::move(bps), necklace.cells(), necklace.k());
}

Splitting to_grid_frame(const Splitting& s) {
  const Rat half(1, 2);
  Box b = s.box();
  for (auto& v : b.lo) v -= half;
  for (auto& v : b.hi) v -= half;
  std::vector<AxisCut> cuts = s.cuts();
  for (auto& c : cuts) c.at -= half;
  return Splitting(std::move(b), std::move(cuts), s.labeling(), s.q());
}

std::vector<std::vector<long>> discrete_part_counts(const DiscreteNecklace& necklace,
                                                    const Splitting& splitting) {
  const int d = necklace.dim();
  if (splitting.dim() != d) throw InputError("splitting dimension does not match necklace");
  std::vector<RatVec> cuts(d);
  for (int i = 0; i < d; ++i) cuts[i] = splitting.cuts_on(i);
  const auto slabs = splitting.slab_counts();
  std::vector<std::vector<long>> counts(splitting.q(), std::vector<long>(necklace.k(), 0));
  for (std::size_t flat = 0; flat < necklace.cell_count(); ++flat) {
    const auto x = necklace.coords(flat);
    std::size_t piece = 0;
    for (int i = 0; i < d; ++i) {
      const Rat xi(x[i]);
      if (xi < splitting.box().lo[i] || xi > splitting.box().hi[i])
        throw DomainError("splitting box does not cover the necklace");
      int slab = 0;
      for (const auto& c : cuts[i]) {
        if (c == xi) throw DomainError("cut passes through a lattice cell");
        if (c < xi) ++slab;
      }
      piece = piece * static_cast<std::size_t>(slabs[i] + 1) + slab;
    }
    ++counts[splitting.labeling()[piece] - 1][necklace.color(flat) - 1];
  }
  return counts;
}

bool is_fair_discrete(const DiscreteNecklace& necklace, const Splitting& splitting) {
  const auto counts = discrete_part_counts(necklace, splitting);
  const int q = splitting.q();
  for (int c = 1; c <= necklace.k(); ++c) {
    if (!necklace.tracked(c)) continue;
    long total = 0;
    for (int l = 0; l < q; ++l) total += counts[l][c - 1];
    if (total % q != 0) return false;
    for (int l = 0; l < q; ++l)
      if (counts[l][c - 1] * q != total) return false;
  }
  return true;
}

}  // namespace necklace
