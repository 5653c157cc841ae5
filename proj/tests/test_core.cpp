#include <doctest.h>

#include <functional>

#include "generators.hpp"
#include "necklace/core.hpp"
#include "necklace/errors.hpp"
#include "necklace/splitter1d.hpp"

using namespace necklace;

namespace {

// Color A on [0, 1/2), B on [1/2, 1].
GridColoring ab_coloring() { return GridColoring({{0, Rat(1, 2), 1}}, {1, 2}, 2); }

Box interval(const Rat& lo, const Rat& hi) { return Box{{lo}, {hi}}; }

// Cell-by-cell oracle: overlap of the box with every grid cell.
RatVec measure_oracle(const GridColoring& c, const Box& box) {
  RatVec out(c.k(), 0);
  const int d = c.dim();
  std::vector<int> idx(d, 0);
  for (std::size_t f = 0; f < c.cell_count(); ++f) {
    std::size_t rest = f;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rest % static_cast<std::size_t>(c.intervals(i)));
      rest /= static_cast<std::size_t>(c.intervals(i));
    }
    Rat vol = 1;
    for (int i = 0; i < d; ++i) {
      const Rat lo = std::max(c.breakpoints(i)[idx[i]], box.lo[i]);
      const Rat hi = std::min(c.breakpoints(i)[idx[i] + 1], box.hi[i]);
      vol *= hi > lo ? Rat(hi - lo) : Rat(0);
    }
    out[c.color(f) - 1] += vol;
  }
  return out;
}

Box random_subbox(const Box& domain, int den, RandomStream& rng) {
  Box b = domain;
  for (int i = 0; i < domain.dim(); ++i) {
    Rat x = testgen::random_rat(domain.lo[i], domain.hi[i], den, rng);
    Rat y = testgen::random_rat(domain.lo[i], domain.hi[i], den, rng);
    if (y < x) std::swap(x, y);
    b.lo[i] = x;
    b.hi[i] = y;
  }
  return b;
}

Splitting random_splitting(const Box& box, int q, int max_cuts, RandomStream& rng) {
  std::vector<AxisCut> cuts;
  const int t = static_cast<int>(rng.uniform_int(0, max_cuts));
  for (int c = 0; c < t; ++c) {
    const int axis = static_cast<int>(rng.uniform_int(0, box.dim() - 1));
    cuts.push_back({axis, testgen::random_rat(box.lo[axis], box.hi[axis], 24, rng)});
  }
  std::vector<int> per(box.dim(), 0);
  for (const auto& c : cuts) ++per[c.axis];
  std::vector<int> labels(piece_count_for(per));
  for (auto& l : labels) l = static_cast<int>(rng.uniform_int(1, q));
  return Splitting(box, cuts, labels, q);
}

}  // namespace

TEST_CASE("rationals are reduced and round-trip through text") {
  const Rat r = parse_rat("-6/4");
  CHECK(r == Rat(-3, 2));
  CHECK(format_rat(ratio(6, 4)) == "3/2");
  CHECK(format_rat(Rat(5)) == "5/1");
  CHECK_THROWS_AS(parse_rat("1/0"), InputError);
  CHECK_THROWS_AS(parse_rat("x"), InputError);
  RandomStream rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rat x = ratio(static_cast<long>(rng.uniform_int(-1000, 1000)), static_cast<long>(rng.uniform_int(1, 999)));
    const Rat back = parse_rat(format_rat(x));
    CHECK(back == x);
    CHECK(format_rat(back) == format_rat(x));
  }
}

TEST_CASE("measure_vector on the A|B coloring") {
  const auto c = ab_coloring();
  CHECK(measure_vector(c, interval(0, 1)) == RatVec{Rat(1, 2), Rat(1, 2)});
  CHECK(measure_vector(c, interval(Rat(1, 4), Rat(3, 4))) == RatVec{Rat(1, 4), Rat(1, 4)});
  CHECK_THROWS_AS(measure_vector(c, interval(-1, 1)), DomainError);
}

TEST_CASE("measure_vector agrees with the cell-by-cell oracle and is additive") {
  RandomStream rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(1, 3));
    const auto c = testgen::random_grid(d, 3, 8, 5, rng);
    const Box full = c.domain();
    const RatVec whole = measure_vector(c, full);
    Rat sum = 0;
    for (const auto& x : whole) sum += x;
    CHECK(sum == full.volume());
    CHECK(whole == measure_oracle(c, full));

    const Box b = random_subbox(full, 16, rng);
    CHECK(measure_vector(c, b) == measure_oracle(c, b));

    const int axis = static_cast<int>(rng.uniform_int(0, d - 1));
    const Rat mid = testgen::random_rat(b.lo[axis], b.hi[axis], 32, rng);
    Box left = b, right = b;
    left.hi[axis] = mid;
    right.lo[axis] = mid;
    const RatVec ml = measure_vector(c, left), mr = measure_vector(c, right), mb = measure_vector(c, b);
    for (int j = 0; j < c.k(); ++j) CHECK(ml[j] + mr[j] == mb[j]);
  }
}

TEST_CASE("part_measures examples") {
  const auto c = ab_coloring();
  const Box box = interval(0, 1);
  {
    const Splitting s(box, {{0, Rat(1, 2)}}, {1, 2}, 2);
    const auto pm = part_measures(c, s);
    CHECK(pm.at(0, 0) == Rat(1, 2));
    CHECK(pm.at(0, 1) == 0);
    CHECK(pm.at(1, 0) == 0);
    CHECK(pm.at(1, 1) == Rat(1, 2));
    CHECK_FALSE(is_fair(pm));
  }
  {
    const Splitting s(box, {{0, Rat(1, 4)}, {0, Rat(3, 4)}}, {1, 2, 1}, 2);
    const auto pm = part_measures(c, s);
    for (int p = 0; p < 2; ++p)
      for (int j = 0; j < 2; ++j) CHECK(pm.at(p, j) == Rat(1, 4));
    CHECK(is_fair(pm));
  }
  {
    RandomStream rng(5);
    const auto g = testgen::random_grid(2, 3, 6, 4, rng);
    const Splitting s(g.domain(), {}, {1}, 3);
    const auto pm = part_measures(g, s);
    const auto mv = measure_vector(g, g.domain());
    for (int j = 0; j < 3; ++j) {
      CHECK(pm.at(0, j) == mv[j]);
      CHECK(pm.at(1, j) == 0);
      CHECK(pm.at(2, j) == 0);
    }
  }
}

TEST_CASE("part measures sum to the box and fairness ignores label names") {
  RandomStream rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(1, 3));
    const int q = static_cast<int>(rng.uniform_int(2, 4));
    const auto c = testgen::random_grid(d, 3, 6, 4, rng);
    const Splitting s = random_splitting(c.domain(), q, 3, rng);
    const auto pm = part_measures(c, s);
    const auto mv = measure_vector(c, c.domain());
    for (int j = 0; j < c.k(); ++j) {
      Rat sum = 0;
      for (int p = 0; p < q; ++p) {
        CHECK(pm.at(p, j) >= 0);
        sum += pm.at(p, j);
      }
      CHECK(sum == mv[j]);
      CHECK(pm.column_total(j) == mv[j]);
    }
    // Relabel by a random permutation of 1..q.
    std::vector<int> perm(q);
    for (int i = 0; i < q; ++i) perm[i] = i + 1;
    for (int i = q - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    std::vector<int> relabeled = s.labeling();
    for (auto& l : relabeled) l = perm[l - 1];
    const Splitting s2(s.box(), s.cuts(), relabeled, q);
    CHECK(is_fair(part_measures(c, s2)) == is_fair(pm));
  }
}

TEST_CASE("granularity examples") {
  CHECK(granularity_axis(Splitting(interval(0, 1), {{0, Rat(1, 4)}, {0, Rat(3, 4)}}, {1, 2, 1}, 2)) == Rat(1, 4));
  const Box square{{0, 0}, {1, 1}};
  CHECK(granularity_axis(Splitting(square, {}, {1}, 2)) == 1);
  CHECK(granularity_axis(Splitting(square, {{0, Rat(1, 3)}, {1, Rat(1, 5)}}, {1, 2, 2, 1}, 2)) == Rat(1, 5));
}

TEST_CASE("granularity bounds every piece side from below") {
  RandomStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = static_cast<int>(rng.uniform_int(1, 3));
    const Box box{RatVec(d, 0), RatVec(d, 1)};
    const Splitting s = random_splitting(box, 2, 4, rng);
    const Rat g = granularity_axis(s);
    Rat smallest = 1;
    for (const auto& p : s.pieces())
      for (int i = 0; i < d; ++i)
        if (p.extent(i) < smallest) smallest = p.extent(i);
    CHECK(smallest == g);
  }
}

TEST_CASE("discrete_to_grid embeds unit cells") {
  const DiscreteNecklace aabb({4}, {1, 1, 2, 2}, 2, 2);
  const auto g = discrete_to_grid(aabb);
  CHECK(g.domain() == Box{{0}, {4}});
  CHECK(g.colors() == std::vector<int>{1, 1, 2, 2});
  const DiscreteNecklace sq({2, 2}, {1, 2, 2, 1}, 2, 2);
  const auto g2 = discrete_to_grid(sq);
  CHECK(g2.cell_count() == 4);
  CHECK(g2.domain() == Box{{0, 0}, {2, 2}});

  RandomStream rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = testgen::random_necklace({3, 2, 2}, 3, 2, rng);
    const auto mv = measure_vector(discrete_to_grid(n), discrete_to_grid(n).domain());
    const auto counts = n.color_counts();
    for (int j = 0; j < n.k(); ++j) CHECK(mv[j] == counts[j]);
  }
}

TEST_CASE("discrete necklace validation") {
  CHECK_THROWS_AS(DiscreteNecklace({3}, {1, 1, 2}, 2, 2), InputError);
  CHECK_THROWS_AS(DiscreteNecklace({2}, {1, 3}, 2, 2), InputError);
  CHECK_NOTHROW(DiscreteNecklace({3}, {1, 2, 2}, 2, 2, {1}));
  CHECK_THROWS_AS(NecklaceBox({0}, 0), InputError);
}

// Grid-side brute force: every set of t integer-coordinate cuts and every
// labeling, judged by exact part measures.
bool grid_splittable(const GridColoring& g, int q, int t) {
  std::vector<AxisCut> cands;
  for (int i = 0; i < g.dim(); ++i)
    for (std::size_t b = 1; b + 1 < g.breakpoints(i).size(); ++b) cands.push_back({i, g.breakpoints(i)[b]});
  std::vector<AxisCut> chosen;
  std::function<bool(std::size_t)> choose = [&](std::size_t from) -> bool {
    if (static_cast<int>(chosen.size()) == t) {
      std::vector<int> per(g.dim(), 0);
      for (const auto& c : chosen) ++per[c.axis];
      const std::size_t pieces = piece_count_for(per);
      std::vector<int> labels(pieces, 1);
      for (;;) {
        if (is_fair(part_measures(g, Splitting(g.domain(), chosen, labels, q)))) return true;
        std::size_t i = 0;
        while (i < pieces && labels[i] == q) labels[i++] = 1;
        if (i == pieces) return false;
        ++labels[i];
      }
    }
    for (std::size_t c = from; c < cands.size(); ++c) {
      chosen.push_back(cands[c]);
      if (choose(c + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return choose(0);
}

TEST_CASE("discrete and grid splittability agree on small instances") {
  RandomStream rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const bool square = trial % 2 == 0;
    const std::vector<int> sides = square ? std::vector<int>{3, 2} : std::vector<int>{6};
    const auto n = testgen::random_necklace(sides, 2, 2, rng);
    const auto g = discrete_to_grid(n);
    for (int t = 0; t <= 3; ++t) {
      const bool discrete = min_cuts_discrete(n, t).has_value();
      bool grid = false;
      for (int s = 0; s <= t && !grid; ++s) grid = grid_splittable(g, 2, s);
      CHECK(discrete == grid);
    }
    const auto r = min_cuts_discrete(n, 4);
    REQUIRE(r.has_value());
    const Splitting moved = to_grid_frame(r->witness);
    CHECK(is_fair(part_measures(g, moved)));
    CHECK(is_fair_discrete(n, r->witness));
  }
}
