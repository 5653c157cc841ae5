#include "necklace/polytope.hpp"

#include <algorithm>
#include <set>

#include "necklace/errors.hpp"
#include "necklace/linprog.hpp"

namespace necklace {

Hyperplane::Hyperplane(RatVec normal, Rat offset) : normal_(std::move(normal)), offset_(std::move(offset)) {
  auto lead = std::find_if(normal_.begin(), normal_.end(), [](const Rat& v) { return v != 0; });
  if (lead == normal_.end()) throw InputError("hyperplane normal must be nonzero");
  const Rat scale = *lead;
  for (auto& v : normal_) v /= scale;
  offset_ /= scale;
}

Halfspace halfspace(const Hyperplane& h, Side side) {
  Halfspace hs{h.normal(), h.offset()};
  if (side == Side::Above) {
    for (auto& v : hs.normal) v = -v;
    hs.bound = -hs.bound;
  }
  return hs;
}

std::vector<Halfspace> box_halfspaces(const Box& box) {
  std::vector<Halfspace> out;
  const int d = box.dim();
  for (int i = 0; i < d; ++i) {
    RatVec up(d, 0), down(d, 0);
    up[i] = 1;
    down[i] = -1;
    out.push_back({down, -box.lo[i]});
    out.push_back({up, box.hi[i]});
  }
  return out;
}

namespace {

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * b[i];
  return s;
}

// Both an upper and a lower axis-aligned bound on every axis.
bool trivially_bounded(int dim, const std::vector<Halfspace>& hs) {
  std::vector<char> up(dim, 0), down(dim, 0);
  for (const auto& h : hs) {
    int nz = -1, count = 0;
    for (int i = 0; i < dim; ++i)
      if (h.normal[i] != 0) {
        nz = i;
        ++count;
      }
    if (count != 1) continue;
    (h.normal[nz] > 0 ? up : down)[nz] = 1;
  }
  for (int i = 0; i < dim; ++i)
    if (!up[i] || !down[i]) return false;
  return true;
}

bool has_nonzero_recession(int dim, const std::vector<Halfspace>& hs) {
  for (int axis = 0; axis < dim; ++axis) {
    for (int s : {1, -1}) {
      LinearProgram lp(dim);
      for (const auto& h : hs) lp.add_inequality(h.normal, 0);
      for (int i = 0; i < dim; ++i) {
        RatVec e(dim, 0);
        e[i] = 1;
        lp.add_inequality(e, 1);
        e[i] = -1;
        lp.add_inequality(e, 1);
      }
      lp.objective.assign(dim, 0);
      lp.objective[axis] = s;
      auto res = solve_lp(lp);
      if (res.status == LpStatus::Optimal && res.value > 0) return true;
    }
  }
  return false;
}

bool is_empty(int dim, const std::vector<Halfspace>& hs) {
  LinearProgram lp(dim);
  for (const auto& h : hs) lp.add_inequality(h.normal, h.bound);
  return solve_lp(lp).status == LpStatus::Infeasible;
}

std::vector<RatVec> enumerate_vertices(int dim, const std::vector<Halfspace>& hs) {
  std::set<RatVec> found;
  const std::size_t m = hs.size();
  if (m < static_cast<std::size_t>(dim)) return {};
  std::vector<std::size_t> pick(dim);
  for (int i = 0; i < dim; ++i) pick[i] = i;
  for (;;) {
    RatMatrix a;
    RatVec b;
    for (std::size_t idx : pick) {
      a.push_back(hs[idx].normal);
      b.push_back(hs[idx].bound);
    }
    if (auto x = solve_square(std::move(a), std::move(b))) {
      bool inside = true;
      for (const auto& h : hs)
        if (dot(h.normal, *x) > h.bound) {
          inside = false;
          break;
        }
      if (inside) found.insert(std::move(*x));
    }
    int i = dim - 1;
    while (i >= 0 && pick[i] == m - dim + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < dim; ++j) pick[j] = pick[j - 1] + 1;
  }
  return {found.begin(), found.end()};
}

}  // namespace

std::vector<RatVec> vertex_enumeration(int dim, const std::vector<Halfspace>& halfspaces) {
  for (const auto& h : halfspaces)
    if (static_cast<int>(h.normal.size()) != dim) throw InputError("halfspace dimension mismatch");
  const bool bounded_hint = trivially_bounded(dim, halfspaces);
  auto verts = enumerate_vertices(dim, halfspaces);
  if (bounded_hint) return verts;
  if (verts.empty()) {
    if (is_empty(dim, halfspaces)) return {};
    throw DomainError("polytope is unbounded");
  }
  if (has_nonzero_recession(dim, halfspaces)) throw DomainError("polytope is unbounded");
  return verts;
}

Polytope::Polytope(int dim, std::vector<Halfspace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)), cache_(std::make_shared<Cache>()) {
  if (dim < 1) throw InputError("polytope dimension must be >= 1");
  for (const auto& h : halfspaces_)
    if (static_cast<int>(h.normal.size()) != dim) throw InputError("halfspace dimension mismatch");
}

const std::vector<RatVec>& Polytope::vertices() const {
  std::call_once(cache_->once, [this] { cache_->vertices = vertex_enumeration(dim_, halfspaces_); });
  return cache_->vertices;
}

bool Polytope::contains(const RatVec& point) const {
  for (const auto& h : halfspaces_)
    if (dot(h.normal, point) > h.bound) return false;
  return true;
}

namespace {

class Triangulator {
 public:
  Triangulator(int dim, const std::vector<RatVec>& verts, const std::vector<Halfspace>& hs)
      : dim_(dim), verts_(verts) {
    tight_.resize(hs.size());
    for (std::size_t h = 0; h < hs.size(); ++h) {
      tight_[h].resize(verts.size());
      for (std::size_t v = 0; v < verts.size(); ++v)
        tight_[h][v] = dot(hs[h].normal, verts[v]) == hs[h].bound;
    }
  }

  // Sum of |det| over a pulling triangulation of the face.
  Rat sum_abs_det(const std::vector<int>& face, int face_dim, std::vector<int>& chain) {
    if (face_dim == 0) {
      chain.push_back(face[0]);
      Rat det = simplex_det(chain);
      chain.pop_back();
      return abs(det);
    }
    const int apex = face[0];
    std::set<std::vector<int>> facets;
    for (const auto& row : tight_) {
      if (row[apex]) continue;
      std::vector<int> sub;
      for (int v : face)
        if (row[v]) sub.push_back(v);
      if (static_cast<int>(sub.size()) < face_dim) continue;
      if (facets.count(sub)) continue;
      std::vector<RatVec> pts;
      for (int v : sub) pts.push_back(verts_[v]);
      if (static_cast<int>(affine_rank(pts)) != face_dim - 1) continue;
      facets.insert(std::move(sub));
    }
    Rat total = 0;
    chain.push_back(apex);
    for (const auto& f : facets) total += sum_abs_det(f, face_dim - 1, chain);
    chain.pop_back();
    return total;
  }

 private:
  Rat simplex_det(const std::vector<int>& simplex) const {
    RatMatrix m;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      RatVec row(dim_);
      for (int c = 0; c < dim_; ++c) row[c] = verts_[simplex[i]][c] - verts_[simplex[0]][c];
      m.push_back(std::move(row));
    }
    return determinant(std::move(m));
  }

  int dim_;
  const std::vector<RatVec>& verts_;
  std::vector<std::vector<char>> tight_;
};

}  // namespace

Rat polytope_volume(const Polytope& p) {
  const auto& verts = p.vertices();
  const int d = p.dim();
  if (static_cast<int>(verts.size()) < d + 1) return 0;
  if (static_cast<int>(affine_rank(verts)) < d) return 0;
  std::vector<int> all(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) all[i] = static_cast<int>(i);
  Triangulator tri(d, verts, p.halfspaces());
  std::vector<int> chain;
  return tri.sum_abs_det(all, d, chain) / factorial(static_cast<unsigned>(d));
}

RatVec box_polytope_color_measures(const GridColoring& coloring, const Polytope& p) {
  const int d = coloring.dim();
  if (p.dim() != d) throw InputError("polytope dimension does not match coloring");
  RatVec out(coloring.k(), 0);
  const auto& verts = p.vertices();
  if (verts.empty()) return out;

  Box bbox{verts[0], verts[0]};
  for (const auto& v : verts)
    for (int i = 0; i < d; ++i) {
      if (v[i] < bbox.lo[i]) bbox.lo[i] = v[i];
      if (v[i] > bbox.hi[i]) bbox.hi[i] = v[i];
    }
  if (!coloring.domain().contains(bbox)) throw DomainError("polytope leaves the coloring domain");

  std::vector<int> first(d), last(d);
  for (int i = 0; i < d; ++i) {
    const auto& bp = coloring.breakpoints(i);
    const int m = coloring.intervals(i);
    int f = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), bbox.lo[i]) - bp.begin()) - 1;
    int l = static_cast<int>(std::lower_bound(bp.begin(), bp.end(), bbox.hi[i]) - bp.begin()) - 1;
    first[i] = std::clamp(f, 0, m - 1);
    last[i] = std::clamp(l, first[i], m - 1);
  }

  std::vector<int> cell = first;
  for (;;) {
    Box cb;
    for (int i = 0; i < d; ++i) {
      cb.lo.push_back(coloring.breakpoints(i)[cell[i]]);
      cb.hi.push_back(coloring.breakpoints(i)[cell[i] + 1]);
    }
    bool all_inside = true;
    RatVec corner(d);
    for (unsigned mask = 0; mask < (1u << d) && all_inside; ++mask) {
      for (int i = 0; i < d; ++i) corner[i] = ((mask >> i) & 1u) ? cb.hi[i] : cb.lo[i];
      all_inside = p.contains(corner);
    }
    Rat vol;
    if (all_inside) {
      vol = cb.volume();
    } else {
      auto hs = box_halfspaces(cb);
      hs.insert(hs.end(), p.halfspaces().begin(), p.halfspaces().end());
      vol = polytope_volume(Polytope(d, std::move(hs)));
    }
    if (vol != 0) out[coloring.color_at(cell) - 1] += vol;
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++cell[i] <= last[i]) break;
      cell[i] = first[i];
    }
    if (i < 0) break;
  }
  return out;
}

Rat inscribed_cube_side(const Polytope& p) {
  const int d = p.dim();
  LinearProgram lp(d + 1);
  lp.nonnegative.assign(d + 1, false);
  lp.nonnegative[d] = true;
  for (const auto& h : p.halfspaces()) {
    RatVec row(h.normal);
    Rat l1 = 0;
    for (const auto& v : h.normal) l1 += abs(v);
    row.push_back(l1 / 2);
    lp.add_inequality(std::move(row), h.bound);
  }
  lp.objective.assign(d + 1, 0);
  lp.objective[d] = 1;
  auto res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) throw DomainError("inscribed cube of an empty polytope");
  if (res.status == LpStatus::Unbounded) throw DomainError("polytope is unbounded");
  return res.value;
}

std::vector<std::string> all_sign_strings(std::size_t t) {
  std::vector<std::string> out;
  const std::size_t n = std::size_t{1} << t;
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::string s(t, '-');
    for (std::size_t i = 0; i < t; ++i)
      if ((mask >> (t - 1 - i)) & 1u) s[i] = '+';
    out.push_back(std::move(s));
  }
  return out;
}

ArbitrarySplitting::ArbitrarySplitting(Box box, std::vector<Hyperplane> hyperplanes,
                                       std::map<std::string, int> labeling, int q)
    : box_(std::move(box)), hyperplanes_(std::move(hyperplanes)), labeling_(std::move(labeling)), q_(q) {
  if (q_ < 1) throw InputError("q must be positive");
  for (const auto& h : hyperplanes_)
    if (h.dim() != box_.dim()) throw InputError("hyperplane dimension does not match box");
  for (const auto& [signs, part] : labeling_) {
    if (signs.size() != hyperplanes_.size() ||
        signs.find_first_not_of("+-") != std::string::npos)
      throw InputError("malformed sign string '" + signs + "'");
    if (part < 1 || part > q_) throw InputError("part label outside 1..q");
  }
}

Polytope ArbitrarySplitting::cell(const std::string& signs) const {
  auto hs = box_halfspaces(box_);
  for (std::size_t i = 0; i < hyperplanes_.size(); ++i)
    hs.push_back(halfspace(hyperplanes_[i], signs[i] == '-' ? Side::Below : Side::Above));
  return Polytope(box_.dim(), std::move(hs));
}

std::vector<std::string> ArbitrarySplitting::nonempty_cells() const {
  std::vector<std::string> out;
  for (auto& s : all_sign_strings(hyperplanes_.size()))
    if (polytope_volume(cell(s)) > 0) out.push_back(std::move(s));
  return out;
}

ArbitraryVerification verify_arbitrary_splitting(const GridColoring& coloring,
                                                 const ArbitrarySplitting& s) {
  ArbitraryVerification out{PartMeasures(s.q(), coloring.k()), Rat(0), false};
  bool first = true;
  for (const auto& signs : all_sign_strings(s.hyperplanes().size())) {
    const Polytope cell = s.cell(signs);
    if (polytope_volume(cell) == 0) continue;
    auto it = s.labeling().find(signs);
    if (it == s.labeling().end()) throw InputError("nonempty cell '" + signs + "' has no label");
    const auto mv = box_polytope_color_measures(coloring, cell);
    for (int c = 0; c < coloring.k(); ++c) out.parts.at(it->second - 1, c) += mv[c];
    const Rat g = inscribed_cube_side(cell);
    if (first || g < out.granularity) out.granularity = g;
    first = false;
  }
  out.fair = is_fair(out.parts);
  return out;
}

}  // namespace necklace
