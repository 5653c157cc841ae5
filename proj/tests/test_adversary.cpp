#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "necklace/adversary.hpp"
#include "necklace/errors.hpp"

using namespace necklace;

namespace {

AdversaryParams line_params(int k, std::uint64_t seed) {
  AdversaryParams p;
  p.d = 1;
  p.k = k;
  p.q = 2;
  p.t = 1;
  p.n = 1;
  p.seed = seed;
  return p;
}

Rat power(const Rat& x, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Threshold of each regime written out directly from the inequalities.
bool expected_verdict(int d, int k, int q, int t, CutKind cuts, Target target) {
  const long lhs = static_cast<long>(k) * (q - 1);
  if (cuts == CutKind::Axis && target == Target::Window) return d == 1 ? lhs > t + 2 : lhs > t + d + q - 1;
  if (cuts == CutKind::Axis) return lhs > t + q - 2;
  if (target == Target::Window) return lhs > static_cast<long>(d) * t + d + q - 1;
  return lhs > static_cast<long>(d) * t + q - 2;
}

}  // namespace

TEST_CASE("parameter defaults and validation") {
  const auto p = line_params(4, 0).resolved();
  CHECK(p.N == 5);
  CHECK(p.delta == Rat(1, 25));
  AdversaryParams bad = line_params(4, 0);
  bad.N = 4;
  CHECK_THROWS_AS(bad.resolved(), InputError);
  bad.N = 5;
  bad.delta = Rat(1, 2);
  CHECK_THROWS_AS(bad.resolved(), InputError);
  bad.delta = 0;
  bad.bits = 0;
  CHECK_THROWS_AS(bad.resolved(), InputError);
}

TEST_CASE("bad coloring structure in dimension one") {
  const auto p = line_params(4, 11).resolved();
  const GridColoring c = generate_bad_coloring(p);
  CHECK(c.domain().lo == RatVec{-1});
  CHECK(c.domain().hi == RatVec{1});
  CHECK(c.k() == 4);

  // Count colored runs inside every background cell [-1 + 2i/5, -1 + 2(i+1)/5].
  const auto& bp = c.breakpoints(0);
  std::vector<int> runs(5, 0);
  for (int i = 0; i < c.intervals(0); ++i) {
    const int color = c.colors()[static_cast<std::size_t>(i)];
    if (color == 1) continue;
    const Rat mid = (bp[i] + bp[i + 1]) / 2;
    const Rat pos = (mid + 1) * 5 / 2;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), pos.get_num_mpz_t(), pos.get_den_mpz_t());
    const long cell = fl.get_si();
    REQUIRE(cell >= 0);
    REQUIRE(cell < 5);
    ++runs[static_cast<std::size_t>(cell)];
  }
  CHECK(runs == std::vector<int>(5, 3));

  const RatVec m = measure_vector(c, c.domain());
  Rat colored = 0;
  for (int j = 1; j < 4; ++j) {
    CHECK(m[j] > 0);
    colored += m[j];
  }
  CHECK(colored <= power(p.delta, 1) * p.N);
  CHECK(colored < p.epsilon / 2);
}

TEST_CASE("bad colorings are reproducible from the seed") {
  for (int d = 1; d <= 2; ++d) {
    auto p = line_params(3, 5);
    p.d = d;
    const GridColoring a = generate_bad_coloring(p), b = generate_bad_coloring(p);
    CHECK(a == b);
    p.seed = 6;
    CHECK_FALSE(generate_bad_coloring(p) == a);
  }
}

TEST_CASE("two-dimensional bad coloring: every color present, white dominates") {
  auto p = line_params(3, 2);
  p.d = 2;
  const auto r = p.resolved();
  const GridColoring c = generate_bad_coloring(p);
  const RatVec m = measure_vector(c, window_box(2, 1));
  for (int j = 1; j < 3; ++j) CHECK(m[j] > 0);
  CHECK(m[1] + m[2] <= power(r.delta, 2) * r.N * r.N);
  CHECK(m[0] + m[1] + m[2] == 4);
}

TEST_CASE("audit_dof examples") {
  CHECK(audit_dof(1, 5, 2, 2, CutKind::Axis, Target::Window).verdict);
  CHECK(audit_dof(2, 6, 2, 2, CutKind::Axis, Target::Window).verdict);
  CHECK_FALSE(audit_dof(2, 6, 2, 2, CutKind::Arbitrary, Target::Window).verdict);
  const auto a = audit_dof(2, 3, 3, 4, CutKind::Axis, Target::Window);
  CHECK(a.unknowns == 4 + 2 + 1);
  CHECK(a.color_equations == 4);
  CHECK(a.volume_equations == 2);
  CHECK(audit_dof(3, 3, 2, 2, CutKind::Arbitrary, Target::Window).unknowns == 3 * 2 + 3 + 1);
  CHECK_THROWS_AS(audit_dof(1, 3, 1, 1, CutKind::Axis, Target::Window), InputError);
}

TEST_CASE("audit_dof matches the direct inequalities on a grid") {
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 8; ++k)
      for (int q = 2; q <= 4; ++q)
        for (int t = 0; t <= 6; ++t)
          for (auto cuts : {CutKind::Axis, CutKind::Arbitrary})
            for (auto target : {Target::Window, Target::Fixed}) {
              const auto a = audit_dof(d, k, q, t, cuts, target);
              CHECK(a.verdict == expected_verdict(d, k, q, t, cuts, target));
              CHECK(a.lhs == static_cast<long>(k) * (q - 1));
            }
}

TEST_CASE("equation systems vanish at fair witnesses") {
  const GridColoring ab({{0, Rat(1, 2), 1}}, {1, 2}, 2);
  const EquationPattern pat{{2}, {1, 2, 1}, {}};
  const auto es = build_equation_system(ab, pat, 2);
  CHECK(es.equations() == 2);
  CHECK(es.unknowns() == 4);
  const RatVec fair{1, 0, Rat(1, 4), Rat(3, 4)};
  CHECK(es.residual(fair) == RatVec(2, 0));
  RatVec off = fair;
  off[2] = Rat(1, 3);
  const RatVec r = es.residual(off);
  CHECK(std::any_of(r.begin(), r.end(), [](const Rat& x) { return x != 0; }));
  const Splitting s = es.splitting_at(fair);
  CHECK(point_of(s) == fair);
  CHECK(is_fair(part_measures(ab, s)));
  // Cuts out of order are outside the region.
  CHECK_THROWS_AS(es.residual(RatVec{1, 0, Rat(3, 4), Rat(1, 4)}), DomainError);

  const GridColoring three({{0, Rat(1, 3), Rat(2, 3), 1}}, {1, 2, 3}, 3);
  CHECK(build_equation_system(three, {{2}, {1, 2, 1}, {}}, 2).equations() == 3);
}

TEST_CASE("rank degeneracy of volume equations") {
  SUBCASE("d = 2, q = 4, one cut per axis, four parts: rank 2") {
    const auto es = build_volume_system(2, {{1, 1}, {1, 2, 3, 4}, {}}, 4);
    const RatVec p{1, 0, 0, Rat(1, 2), Rat(1, 2)};
    CHECK(es.residual(p) == RatVec(3, 0));
    const auto r = jacobian_rank_check(es, p, 20, 3);
    CHECK(r.max_rank == 2);
    CHECK(r.equations == 3);
    for (int x : r.ranks) CHECK(x == 2);
  }
  SUBCASE("d = 1: rank q - 1") {
    for (int q = 2; q <= 5; ++q) {
      std::vector<int> labels(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
      const auto es = build_volume_system(1, {{q - 1}, labels, {}}, q);
      RatVec p{1, 0};
      for (int i = 1; i < q; ++i) p.push_back(Rat(i) / q);
      CHECK(jacobian_rank_check(es, p, 10, 1).max_rank == q - 1);
    }
  }
  SUBCASE("rank never exceeds the smaller dimension") {
    RandomStream rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = testgen::random_grid(1, 3, 8, 4, rng);
      const auto es = build_equation_system(g, {{1}, {1, 2}, {}}, 2);
      const RatVec p{1, 0, testgen::random_rat(Rat(1, 8), Rat(7, 8), 8, rng)};
      const auto r = jacobian_rank_check(es, p, 3, static_cast<std::uint64_t>(trial));
      CHECK(r.max_rank <= std::min(r.equations, r.unknowns));
    }
  }
}

TEST_CASE("certify_no_split_1d") {
  SUBCASE("bad colorings with k = 4, t = 1 have verified certificates") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const GridColoring c = generate_bad_coloring(line_params(4, seed));
      const auto r = certify_no_split_1d(c, 2, 1, Rat(1, 2), 1);
      CHECK_FALSE(r.witness.has_value());
      REQUIRE(r.certificate.has_value());
      CHECK(verify_certificate(*r.certificate));
    }
  }
  SUBCASE("A|B inside the window splits with two cuts") {
    const GridColoring c({{-1, 0, Rat(1, 2), 1}}, {1, 1, 2}, 2);
    const auto r = certify_no_split_1d(c, 2, 2, Rat(1, 8), 1);
    REQUIRE(r.witness.has_value());
    CHECK(is_fair(part_measures(c, *r.witness)));
    CHECK(granularity_axis(*r.witness) >= Rat(1, 8));
  }
  SUBCASE("no cuts never split a nontrivial coloring") {
    const GridColoring c({{-1, 0, 1}}, {1, 2}, 2);
    const auto r = certify_no_split_1d(c, 2, 0, Rat(1, 4), 1, true);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(*r.certificate));
  }
  SUBCASE("agreement with the fixed-box solver on the whole window") {
    RandomStream rng(31);
    for (int trial = 0; trial < 8; ++trial) {
      auto g = testgen::random_grid(1, 2, 8, 4, rng);
      // Stretch [0, 1] onto [-1, 1].
      RatVec bp;
      for (const auto& x : g.breakpoints(0)) bp.push_back(2 * x - 1);
      const GridColoring c({bp}, g.colors(), g.k());
      for (int t = 0; t <= 2; ++t) {
        const auto a = certify_no_split_1d(c, 2, t, 0, 1, true);
        const auto b = solve_continuous_1d(c, -1, 1, 2, t, 0);
        CHECK(a.witness.has_value() == b.witness.has_value());
      }
    }
  }
}

TEST_CASE("probe_no_split_md") {
  SUBCASE("single color: a witness appears at once") {
    const GridColoring one({{-1, 1}, {-1, 1}}, {1}, 1);
    ProbeBudget b;
    b.trials = 4;
    const auto r = probe_no_split_md(one, 2, 1, 0, 1, b);
    REQUIRE(r.witness.has_value());
    CHECK(r.trials.size() == 1);
    CHECK(is_fair(part_measures(one, *r.witness)));
  }
  SUBCASE("best residual is the minimum over trials") {
    auto p = line_params(5, 1);
    p.d = 2;
    const GridColoring c = generate_bad_coloring(p);
    ProbeBudget b;
    b.trials = 3;
    b.search.max_patterns = 6;
    b.search.seeds_per_pattern = 1;
    b.search.lm_iterations = 20;
    const auto r = probe_no_split_md(c, 2, 1, Rat(1, 2), 1, b);
    CHECK_FALSE(r.witness.has_value());
    REQUIRE(r.trials.size() == 3);
    double best = r.trials[0].best_residual;
    for (const auto& t : r.trials) best = std::min(best, t.best_residual);
    CHECK(r.best_residual == best);
    for (const auto& t : r.trials) CHECK(t.box.hi[0] - t.box.lo[0] >= Rat(1, 2));
  }
}
