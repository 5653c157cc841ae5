#include "necklace/distinguish.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>

#include "necklace/errors.hpp"
#include "necklace/linprog.hpp"
#include "necklace/numeric.hpp"
#include "necklace/parallel.hpp"
#include "necklace/random.hpp"

namespace necklace {

Rat separation(const NecklaceBox& a, const NecklaceBox& b) {
  Rat best = 0;
  for (std::size_t i = 0; i < a.corner.size(); ++i) {
    const Rat lo = a.corner[i], hi = a.corner[i] + a.side;
    const Rat blo = b.corner[i], bhi = b.corner[i] + b.side;
    Rat left = (blo < hi ? blo : hi) - lo;
    Rat right = hi - (bhi > lo ? bhi : lo);
    if (left > best) best = left;
    if (right > best) best = right;
  }
  return best < a.side ? best : a.side;
}

bool verify_equal_cubes(const GridColoring& coloring, const Box& window, const Rat& sigma,
                        const CubePair& pair) {
  const Box ba = pair.a.to_box(), bb = pair.b.to_box();
  if (!window.contains(ba) || !window.contains(bb)) return false;
  if (!coloring.domain().contains(window)) return false;
  const RatVec ma = measure_vector(coloring, ba);
  if (ma != measure_vector(coloring, bb) || ma != pair.measures) return false;
  return separation(pair.a, pair.b) >= sigma;
}

namespace {

// Window-clipped interval structure of a 1-D coloring with cumulative
// color measures at every interval start.
struct Line {
  RatVec c;                   // c_0 < ... < c_m
  std::vector<int> color;     // color of [c_p, c_{p+1}]
  std::vector<RatVec> cum;    // cum[p][j] = measure of color j+1 in [c_0, c_p]
};

Line clip_line(const GridColoring& coloring, const Box& window) {
  Line L;
  L.c.push_back(window.lo[0]);
  for (const auto& b : coloring.breakpoints(0))
    if (window.lo[0] < b && b < window.hi[0]) L.c.push_back(b);
  L.c.push_back(window.hi[0]);
  const int k = coloring.k();
  L.cum.push_back(RatVec(k, 0));
  for (std::size_t p = 0; p + 1 < L.c.size(); ++p) {
    const Box cell{{L.c[p]}, {L.c[p + 1]}};
    const RatVec mv = measure_vector(coloring, cell);
    int col = 1;
    for (int j = 0; j < k; ++j)
      if (mv[j] > 0) col = j + 1;
    L.color.push_back(col);
    RatVec next = L.cum.back();
    next[col - 1] += L.c[p + 1] - L.c[p];
    L.cum.push_back(std::move(next));
  }
  return L;
}

// One exact LP in the variables (a, s, b) for a fixed endpoint-to-slot map.
std::optional<CubePair> solve_pattern_1d(const GridColoring& coloring, const Line& L,
                                         const Rat& sigma, const int slot[4]) {
  const int k = coloring.k();
  LinearProgram lp(3);
  // Endpoint coefficient rows: a, a+s, b, b+s.
  const RatVec rows[4] = {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}, {0, 1, 1}};
  for (int e = 0; e < 4; ++e) {
    lp.add_at_least(rows[e], L.c[slot[e]]);
    lp.add_inequality(rows[e], L.c[slot[e] + 1]);
  }
  lp.add_at_least({0, 1, 0}, sigma);
  lp.add_at_least({-1, 0, 1}, sigma);
  // M_j(x) = cum[p][j] + [color(p) = j] (x - c_p) for x in slot p; the
  // equation is M(a+s) - M(a) - M(b+s) + M(b) = 0.
  const int sign[4] = {-1, 1, 1, -1};
  for (int j = 0; j < k; ++j) {
    RatVec coeffs(3, 0);
    Rat rhs = 0;
    for (int e = 0; e < 4; ++e) {
      const int p = slot[e];
      const int sg = sign[e];
      Rat constant = L.cum[p][j];
      if (L.color[p] == j + 1) {
        for (int v = 0; v < 3; ++v) coeffs[v] += sg * rows[e][v];
        constant -= L.c[p];
      }
      rhs -= sg * constant;
    }
    bool zero = rhs == 0;
    for (const auto& x : coeffs) zero = zero && x == 0;
    if (!zero) lp.add_equality(coeffs, rhs);
  }
  const LpResult r = solve_lp(lp);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  const NecklaceBox A({r.x[0]}, r.x[1]), B({r.x[2]}, r.x[1]);
  return CubePair{A, B, measure_vector(coloring, A.to_box())};
}

DistinguishResult search_1d(const GridColoring& coloring, const Box& window, const Rat& sigma,
                            const DistinguishOptions& options) {
  const Line L = clip_line(coloring, window);
  const int m = static_cast<int>(L.color.size());
  std::vector<std::array<int, 4>> patterns;
  for (int pa = 0; pa < m; ++pa)
    for (int pas = pa; pas < m; ++pas) {
      if (L.c[pas + 1] - L.c[pa] < sigma) continue;
      for (int pb = pa; pb < m; ++pb) {
        if (L.c[pb + 1] - L.c[pa] < sigma) continue;
        for (int pbs = std::max(pb, pas); pbs < m; ++pbs) patterns.push_back({pa, pas, pb, pbs});
      }
    }
  DistinguishResult result;
  result.exhaustive = true;
  std::vector<std::optional<CubePair>> found(patterns.size());
  auto hit = parallel_find_first(options.jobs, patterns.size(), [&](std::size_t i) {
    found[i] = solve_pattern_1d(coloring, L, sigma, patterns[i].data());
    return found[i].has_value();
  });
  if (hit) {
    result.tried = *hit + 1;
    result.pair = std::move(found[*hit]);
  } else {
    result.tried = patterns.size();
  }
  return result;
}

// Unknown layout for d >= 2: a (d), s, b (d).
struct MdProblem {
  const GridColoring& coloring;
  MeasureTable table;
  Box window;
  double sigma;
  int d;
  int k;
};

Eigen::VectorXd md_residual(const MdProblem& P, const Eigen::VectorXd& x, int sep_axis) {
  const int d = P.d, k = P.k;
  std::vector<double> alo(d), ahi(d), blo(d), bhi(d);
  const double s = x[d];
  Eigen::VectorXd r(k - 1 + 2 * d + 1);
  int row = 0;
  for (int i = 0; i < d; ++i) {
    alo[i] = x[i];
    ahi[i] = x[i] + s;
    blo[i] = x[d + 1 + i];
    bhi[i] = blo[i] + s;
  }
  const auto ma = P.table.measure(alo, ahi), mb = P.table.measure(blo, bhi);
  for (int j = 1; j < k; ++j) r[row++] = ma[j] - mb[j];
  for (int i = 0; i < d; ++i) {
    const double top = to_double(P.window.hi[i]);
    r[row++] = std::max(0.0, ahi[i] - top);
    r[row++] = std::max(0.0, bhi[i] - top);
  }
  r[row++] = std::max(0.0, P.sigma - (blo[sep_axis] - alo[sep_axis]));
  return r;
}

std::optional<CubePair> exact_candidate(const MdProblem& P, const Box& window, const Rat& sigma,
                                        const Eigen::VectorXd& x) {
  const int d = P.d, k = P.k;
  const mpz_class den = mpz_class(1) << 24;
  RatVec a(d), b(d);
  for (int i = 0; i < d; ++i) {
    a[i] = best_rational(x[i], den);
    b[i] = best_rational(x[d + 1 + i], den);
  }
  const Rat s = best_rational(x[d], den);
  if (s <= 0) return std::nullopt;
  auto eval = [&](const RatVec& ca, const RatVec& cb) {
    const Box ba = NecklaceBox(ca, s).to_box(), bb = NecklaceBox(cb, s).to_box();
    if (!P.coloring.domain().contains(ba) || !P.coloring.domain().contains(bb))
      return std::optional<RatVec>();
    RatVec diff = measure_vector(P.coloring, ba);
    const RatVec mb = measure_vector(P.coloring, bb);
    for (int j = 0; j < k; ++j) diff[j] -= mb[j];
    return std::optional<RatVec>(diff);
  };
  // F(a_0, b_0) is affine in a_0 and in b_0 separately near the snapped
  // point (A depends only on a, B only on b), so two exact evaluations per
  // variable give the linear system for colors 2..k.
  if (k >= 2 && k <= 3) {
    const Rat eps(1, 1 << 30);
    auto f0 = eval(a, b);
    RatVec a2 = a, b2 = b;
    a2[0] += eps;
    b2[0] += eps;
    auto fa = eval(a2, b), fb = eval(a, b2);
    if (f0 && fa && fb) {
      RatMatrix M;
      RatVec rhs;
      for (int j = 1; j < k; ++j) {
        M.push_back({((*fa)[j] - (*f0)[j]) / eps, ((*fb)[j] - (*f0)[j]) / eps});
        rhs.push_back(-(*f0)[j]);
      }
      if (k == 2) {
        // One equation: move a_0 if it has a slope, otherwise b_0.
        if (M[0][0] != 0) {
          a[0] += rhs[0] / M[0][0];
        } else if (M[0][1] != 0) {
          b[0] += rhs[0] / M[0][1];
        }
      } else if (auto delta = solve_square(M, rhs)) {
        a[0] += (*delta)[0];
        b[0] += (*delta)[1];
      }
    }
  }
  CubePair pair{NecklaceBox(a, s), NecklaceBox(b, s), {}};
  if (!window.contains(pair.a.to_box()) || !window.contains(pair.b.to_box())) return std::nullopt;
  pair.measures = measure_vector(P.coloring, pair.a.to_box());
  if (!verify_equal_cubes(P.coloring, window, sigma, pair)) return std::nullopt;
  return pair;
}

DistinguishResult search_md(const GridColoring& coloring, const Box& window, const Rat& sigma,
                            const DistinguishOptions& options) {
  const int d = coloring.dim();
  MdProblem P{coloring, MeasureTable(coloring), window, to_double(sigma), d, coloring.k()};
  Eigen::VectorXd lower(2 * d + 1), upper(2 * d + 1);
  double min_extent = to_double(window.extent(0));
  for (int i = 0; i < d; ++i) min_extent = std::min(min_extent, to_double(window.extent(i)));
  for (int i = 0; i < d; ++i) {
    lower[i] = lower[d + 1 + i] = to_double(window.lo[i]);
    upper[i] = upper[d + 1 + i] = to_double(window.hi[i]) - P.sigma;
  }
  lower[d] = P.sigma;
  upper[d] = min_extent;
  const RandomStream master(options.seed);
  LeastSquaresOptions lm;
  lm.max_iterations = options.lm_iterations;
  lm.tolerance = 1e-13;

  DistinguishResult result;
  std::vector<std::optional<CubePair>> found(options.starts);
  auto hit = parallel_find_first(options.jobs, static_cast<std::size_t>(options.starts), [&](std::size_t i) {
    RandomStream rng = master.child(i);
    const int axis = static_cast<int>(i % static_cast<std::size_t>(d));
    Eigen::VectorXd x(2 * d + 1);
    x[d] = rng.uniform(P.sigma, std::max(P.sigma, min_extent - P.sigma));
    for (int c = 0; c < d; ++c) {
      x[c] = rng.uniform(lower[c], std::max(lower[c], upper[c] + P.sigma - x[d]));
      x[d + 1 + c] = rng.uniform(lower[c], std::max(lower[c], upper[c] + P.sigma - x[d]));
    }
    auto f = [&](const Eigen::VectorXd& v) { return md_residual(P, v, axis); };
    const auto sol = levenberg_marquardt(f, x, lower, upper, lm);
    if (sol.residual_inf > 1e-9) return false;
    found[i] = exact_candidate(P, window, sigma, sol.x);
    return found[i].has_value();
  });
  if (hit) {
    result.tried = *hit + 1;
    result.pair = std::move(found[*hit]);
  } else {
    result.tried = static_cast<std::uint64_t>(options.starts);
  }
  return result;
}

}  // namespace

DistinguishResult find_equal_cubes(const GridColoring& coloring, const Box& window,
                                   const Rat& sigma, const DistinguishOptions& options) {
  if (window.dim() != coloring.dim()) throw InputError("window dimension does not match coloring");
  if (!coloring.domain().contains(window)) throw DomainError("window outside coloring domain");
  if (sigma <= 0) throw InputError("separation must be positive");
  DistinguishResult r = coloring.dim() == 1 ? search_1d(coloring, window, sigma, options)
                                            : search_md(coloring, window, sigma, options);
  if (r.pair && !verify_equal_cubes(coloring, window, sigma, *r.pair))
    throw std::logic_error("equal-cube pair failed exact revalidation");
  return r;
}

DistinguishAudit audit_distinguish(int d, int k, Shape shape) {
  if (d < 1 || k < 1) throw InputError("need d >= 1 and k >= 1");
  DistinguishAudit a;
  a.d = d;
  a.k = k;
  a.shape = shape;
  a.equations = k;
  if (shape == Shape::Cube) {
    a.unknowns = 2 * (d + 1);
    a.threshold = 2 * d + 3;
  } else {
    a.unknowns = 4 * d;
    a.threshold = 4 * d + 1;
  }
  a.verdict = k >= a.threshold;
  return a;
}

}  // namespace necklace
