#include <doctest.h>

#include <string>

#include "generators.hpp"
#include "necklace/errors.hpp"
#include "necklace/splitter1d.hpp"

using namespace necklace;

namespace {

// "AABB" -> colors 1,1,2,2 with k = number of distinct letters used.
DiscreteNecklace beads(const std::string& s, int q) {
  std::vector<int> colors;
  int k = 1;
  for (char ch : s) {
    colors.push_back(ch - 'A' + 1);
    k = std::max(k, ch - 'A' + 1);
  }
  return DiscreteNecklace({static_cast<int>(s.size())}, colors, k, q);
}

// Brute force without pruning: every set of t gaps, every labeling in
// 1..q^(t+1), fairness counted bead by bead.
bool brute_splittable(const DiscreteNecklace& n, int t) {
  const int len = static_cast<int>(n.cell_count());
  const int q = n.q();
  const auto counts = n.color_counts();
  std::vector<int> gaps(t);
  for (int i = 0; i < t; ++i) gaps[i] = i + 1;
  if (t > len - 1) return false;
  for (;;) {
    std::vector<int> labels(t + 1, 1);
    for (;;) {
      std::vector<std::vector<long>> part(q, std::vector<long>(n.k(), 0));
      int piece = 0;
      for (int b = 1; b <= len; ++b) {
        while (piece < t && gaps[piece] < b) ++piece;
        ++part[labels[piece] - 1][n.color(b - 1) - 1];
      }
      bool fair = true;
      for (int p = 0; p < q && fair; ++p)
        for (int j = 0; j < n.k(); ++j)
          if (part[p][j] * q != counts[j]) fair = false;
      if (fair) return true;
      int i = 0;
      while (i <= t && labels[i] == q) labels[i++] = 1;
      if (i > t) break;
      ++labels[i];
    }
    int i = t - 1;
    while (i >= 0 && gaps[i] == len - 1 - (t - 1 - i)) --i;
    if (i < 0) return false;
    ++gaps[i];
    for (int j = i + 1; j < t; ++j) gaps[j] = gaps[j - 1] + 1;
  }
}

GridColoring ab_coloring() { return GridColoring({{0, Rat(1, 2), 1}}, {1, 2}, 2); }

}  // namespace

TEST_CASE("minimum cuts on small named necklaces") {
  CHECK(min_cuts_discrete_1d(beads("ABBA", 2), 4)->t_min == 1);
  CHECK(min_cuts_discrete_1d(beads("AABB", 2), 4)->t_min == 2);
  for (int q = 2; q <= 4; ++q) CHECK(min_cuts_discrete_1d(beads(std::string(2 * q, 'A'), q), 6)->t_min == q - 1);
  CHECK_FALSE(min_cuts_discrete_1d(beads("AABB", 2), 1).has_value());
  CHECK_THROWS_AS(beads("AAB", 2), InputError);
}

TEST_CASE("solve_discrete_1d examples") {
  const auto aabb = beads("AABB", 2);
  const Splitting s = solve_discrete_1d(aabb);
  CHECK(s.cuts_on(0) == RatVec{Rat(3, 2), Rat(7, 2)});
  CHECK(s.labeling() == std::vector<int>{1, 2, 1});
  CHECK(is_fair_discrete(aabb, s));

  const auto ababab = beads("ABABAB", 3);
  const Splitting s3 = solve_discrete_1d(ababab);
  CHECK(s3.cut_count() <= 4);
  CHECK(is_fair_discrete(ababab, s3));

  const auto single = beads("AAA", 3);
  CHECK(solve_discrete_1d(single).cut_count() == 2);
}

TEST_CASE("branch-and-bound minimum matches the unpruned brute force") {
  RandomStream rng(1001);
  for (int trial = 0; trial < 120; ++trial) {
    const int q = static_cast<int>(rng.uniform_int(2, 3));
    const int len = q * static_cast<int>(rng.uniform_int(1, 8 / q + 1));
    const int k = static_cast<int>(rng.uniform_int(1, 3));
    const auto n = testgen::random_necklace({len}, k, q, rng);
    const auto r = min_cuts_discrete_1d(n, alon_cap(n));
    REQUIRE(r.has_value());
    CHECK(is_fair_discrete(n, r->witness));
    CHECK(brute_splittable(n, r->t_min));
    if (r->t_min > 0) CHECK_FALSE(brute_splittable(n, r->t_min - 1));
  }
}

TEST_CASE("the Alon cap always suffices (sampled up to length 14, k <= 4)") {
  RandomStream rng(14);
  for (int trial = 0; trial < 150; ++trial) {
    const int q = static_cast<int>(rng.uniform_int(2, 3));
    const int len = q * static_cast<int>(rng.uniform_int(1, 14 / q));
    const int k = static_cast<int>(rng.uniform_int(1, 4));
    const auto n = testgen::random_necklace({len}, k, q, rng);
    const Splitting s = solve_discrete_1d(n);
    CHECK(s.cut_count() <= alon_cap(n));
    CHECK(is_fair_discrete(n, s));
  }
}

TEST_CASE("parallel and serial discrete searches agree") {
  RandomStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = testgen::random_necklace({12}, 3, 2, rng);
    const auto a = min_cuts_discrete_1d(n, 6, 1), b = min_cuts_discrete_1d(n, 6, 3);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->t_min == b->t_min);
    CHECK(a->witness == b->witness);
    CHECK(a->cut_sets_tried == b->cut_sets_tried);
  }
}

TEST_CASE("continuous solver examples") {
  const auto c = ab_coloring();
  SUBCASE("two cuts split A|B") {
    const auto r = solve_continuous_1d(c, 0, 1, 2, 2, 0);
    REQUIRE(r.witness.has_value());
    CHECK(is_fair(part_measures(c, *r.witness)));
    CHECK(r.witness->cut_count() == 2);
  }
  SUBCASE("with granularity 1/4 the witness is the quarter cuts") {
    const auto r = solve_continuous_1d(c, 0, 1, 2, 2, Rat(1, 4));
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->cuts_on(0) == RatVec{Rat(1, 4), Rat(3, 4)});
    CHECK(granularity_axis(*r.witness) >= Rat(1, 4));
    const auto& l = r.witness->labeling();
    CHECK(l[0] == l[2]);
    CHECK(l[0] != l[1]);
  }
  SUBCASE("one cut is infeasible, with a verified certificate") {
    const auto r = solve_continuous_1d(c, 0, 1, 2, 1, 0);
    CHECK_FALSE(r.witness.has_value());
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(*r.certificate));
  }
  SUBCASE("single color, one cut at the midpoint") {
    const GridColoring one({{0, 1}}, {1}, 1);
    const auto r = solve_continuous_1d(one, 0, 1, 2, 1, 0);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->cuts_on(0) == RatVec{Rat(1, 2)});
  }
}

TEST_CASE("tampered certificates are rejected") {
  const auto c = ab_coloring();
  const auto r = solve_continuous_1d(c, 0, 1, 2, 1, 0);
  REQUIRE(r.certificate.has_value());
  REQUIRE(!r.certificate->entries.empty());
  {
    auto cert = *r.certificate;
    cert.entries.pop_back();
    CHECK_FALSE(verify_certificate(cert));
  }
  {
    auto cert = *r.certificate;
    auto& f = cert.entries.front().farkas;
    if (!f.eq_multipliers.empty()) f.eq_multipliers[0] += 1;
    else f.le_multipliers[0] += 1;
    CHECK_FALSE(verify_certificate(cert));
  }
  {
    auto cert = *r.certificate;
    cert.entries.push_back(cert.entries.front());
    CHECK_FALSE(verify_certificate(cert));
  }
  {
    auto cert = *r.certificate;
    cert.problem.t = 2;
    CHECK_FALSE(verify_certificate(cert));
  }
}

TEST_CASE("breakpoint-restricted continuous search agrees with the discrete minimum") {
  RandomStream rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = testgen::random_necklace({6}, 2, 2, rng);
    const auto g = discrete_to_grid(n);
    const int t_min = min_cuts_discrete_1d(n, 4)->t_min;
    for (int t = 0; t <= 3; ++t) {
      Line1DProblem p{g, 2, t, 0, 0, 6, false, true};
      const auto r = search_line_1d(p);
      CHECK(r.witness.has_value() == (t_min <= t));
      if (r.certificate) CHECK(verify_certificate(*r.certificate));
    }
  }
}

TEST_CASE("continuous witnesses are fair and parallel runs match") {
  RandomStream rng(808);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testgen::random_grid(1, 2, 8, 5, rng);
    const int t = static_cast<int>(rng.uniform_int(1, 3));
    const auto a = solve_continuous_1d(g, 0, 1, 2, t, 0, {1, false});
    const auto b = solve_continuous_1d(g, 0, 1, 2, t, 0, {3, false});
    CHECK(a.witness.has_value() == b.witness.has_value());
    if (a.witness) {
      CHECK(*a.witness == *b.witness);
      CHECK(is_fair(part_measures(g, *a.witness)));
    } else {
      CHECK(verify_certificate(*a.certificate));
      CHECK(a.certificate->entries.size() == b.certificate->entries.size());
    }
    // Alon: k(q-1) = 2 cuts always suffice for two colors.
    if (t >= 2) CHECK(a.witness.has_value());
  }
}

TEST_CASE("labeling combinatorics") {
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(5, 3) == 25);
  CHECK(stirling2(3, 0) == 0);
  CHECK(stirling2(0, 0) == 1);
  for (int n = 1; n <= 6; ++n)
    for (int q = 1; q <= 4; ++q) {
      const auto ls = canonical_labelings(n, q);
      CHECK(mpz_class(static_cast<unsigned long>(ls.size())) == stirling2(n, q));
      for (const auto& l : ls) {
        int top = 0;
        for (int x : l) {
          CHECK(x <= top + 1);
          top = std::max(top, x);
        }
        CHECK(top == q);
      }
    }
}
