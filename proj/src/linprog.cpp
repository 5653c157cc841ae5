#include "necklace/linprog.hpp"

#include <sstream>

#include "necklace/errors.hpp"

namespace necklace {

void LinearProgram::add_equality(RatVec coeffs, Rat rhs) {
  if (coeffs.size() != num_vars) throw InputError("equality row has wrong width");
  equalities.push_back({std::move(coeffs), std::move(rhs)});
}

void LinearProgram::add_inequality(RatVec coeffs, Rat rhs) {
  if (coeffs.size() != num_vars) throw InputError("inequality row has wrong width");
  inequalities.push_back({std::move(coeffs), std::move(rhs)});
}

void LinearProgram::add_at_least(RatVec coeffs, Rat rhs) {
  for (auto& c : coeffs) c = -c;
  add_inequality(std::move(coeffs), -rhs);
}

std::string LinearProgram::canonical_text() const {
  std::ostringstream out;
  out << "vars " << num_vars << "\n";
  if (!nonnegative.empty()) {
    out << "nonneg";
    for (std::size_t i = 0; i < num_vars; ++i)
      if (nonnegative[i]) out << ' ' << i;
    out << "\n";
  }
  auto row = [&](const char* tag, const LinearRow& r) {
    out << tag;
    for (const auto& c : r.coeffs) out << ' ' << format_rat(c);
    out << " | " << format_rat(r.rhs) << "\n";
  };
  for (const auto& r : equalities) row("eq", r);
  for (const auto& r : inequalities) row("le", r);
  return out.str();
}

std::uint64_t LinearProgram::hash() const { return fnv1a(canonical_text()); }

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1)) {}

  Rat& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  Rat& rhs(std::size_t r) { return t_[r * (cols_ + 1) + cols_]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Pivot on (pr, pc); obj is the reduced-cost row (size cols+1).
  void pivot(std::size_t pr, std::size_t pc, RatVec& obj) {
    const Rat inv = 1 / at(pr, pc);
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c <= cols_; ++c) {
      Rat& v = t_[pr * (cols_ + 1) + c];
      if (v != 0) {
        v *= inv;
        nz.push_back(c);
      }
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const Rat f = at(r, pc);
      if (f == 0) continue;
      for (std::size_t c : nz) at(r, c) -= f * t_[pr * (cols_ + 1) + c];
    }
    const Rat f = obj[pc];
    if (f != 0)
      for (std::size_t c : nz) obj[c] -= f * t_[pr * (cols_ + 1) + c];
  }

 private:
  std::size_t rows_, cols_;
  RatVec t_;
};

enum class PhaseResult { Optimal, Unbounded };

// Minimizes with Bland's rule. `allowed[c]` marks columns that may enter.
PhaseResult run_simplex(Tableau& t, RatVec& obj, std::vector<std::size_t>& basis,
                        const std::vector<bool>& allowed, const std::vector<bool>& live) {
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c)
      if (allowed[c] && obj[c] < 0) {
        enter = c;
        break;
      }
    if (enter == t.cols()) return PhaseResult::Optimal;
    std::size_t leave = t.rows();
    Rat best_ratio;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (!live[r]) continue;
      const Rat& a = t.at(r, enter);
      if (a <= 0) continue;
      Rat ratio = t.rhs(r) / a;
      if (leave == t.rows() || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == t.rows()) return PhaseResult::Unbounded;
    t.pivot(leave, enter, obj);
    basis[leave] = enter;
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  const std::size_t m_eq = lp.equalities.size(), m_le = lp.inequalities.size();
  const std::size_t m = m_eq + m_le;

  // Structural columns: one per nonnegative variable, two (x+, x-) per free one.
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pos_col[i] = cols++;
    if (!lp.is_nonnegative(i)) neg_col[i] = cols++;
  }
  std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
  for (std::size_t r = m_eq; r < m; ++r) slack_col[r] = cols++;

  std::vector<int> sign(m, 1);
  auto row_of = [&](std::size_t r) -> const LinearRow& {
    return r < m_eq ? lp.equalities[r] : lp.inequalities[r - m_eq];
  };
  for (std::size_t r = 0; r < m; ++r)
    if (row_of(r).rhs < 0) sign[r] = -1;
  for (std::size_t r = 0; r < m; ++r)
    if (r < m_eq || sign[r] < 0) art_col[r] = cols++;

  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = row_of(r);
    for (std::size_t i = 0; i < n; ++i) {
      if (row.coeffs[i] == 0) continue;
      t.at(r, pos_col[i]) = sign[r] * row.coeffs[i];
      if (neg_col[i] != SIZE_MAX) t.at(r, neg_col[i]) = -sign[r] * row.coeffs[i];
    }
    if (slack_col[r] != SIZE_MAX) t.at(r, slack_col[r]) = sign[r];
    if (art_col[r] != SIZE_MAX) t.at(r, art_col[r]) = 1;
    t.rhs(r) = sign[r] * row.rhs;
    basis[r] = art_col[r] != SIZE_MAX ? art_col[r] : slack_col[r];
  }

  // Phase I: minimize the sum of artificials.
  RatVec obj(cols + 1, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (art_col[r] == SIZE_MAX) continue;
    obj[art_col[r]] = 1;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (art_col[r] == SIZE_MAX) continue;
    for (std::size_t c = 0; c <= cols; ++c) {
      const Rat& v = c == cols ? t.rhs(r) : t.at(r, c);
      if (v != 0) obj[c] -= v;
    }
  }
  std::vector<bool> allowed(cols, true), live(m, true);
  run_simplex(t, obj, basis, allowed, live);

  LpResult result;
  const Rat phase1_value = -obj[cols];
  if (phase1_value > 0) {
    result.status = LpStatus::Infeasible;
    RatVec y(m);
    for (std::size_t r = 0; r < m; ++r) {
      Rat yr = art_col[r] != SIZE_MAX ? Rat(1 - obj[art_col[r]]) : Rat(-obj[slack_col[r]]);
      y[r] = sign[r] * yr;
    }
    result.farkas.eq_multipliers.assign(y.begin(), y.begin() + m_eq);
    result.farkas.le_multipliers.assign(y.begin() + m_eq, y.end());
    for (auto& v : result.farkas.eq_multipliers) v = -v;
    for (auto& v : result.farkas.le_multipliers) v = -v;
    return result;
  }

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  std::vector<bool> is_art(cols, false);
  for (std::size_t r = 0; r < m; ++r)
    if (art_col[r] != SIZE_MAX) is_art[art_col[r]] = true;
  for (std::size_t r = 0; r < m; ++r) {
    if (!is_art[basis[r]]) continue;
    std::size_t pc = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_art[c] && t.at(r, c) != 0) {
        pc = c;
        break;
      }
    if (pc == cols) {
      live[r] = false;
      continue;
    }
    t.pivot(r, pc, obj);
    basis[r] = pc;
  }
  for (std::size_t c = 0; c < cols; ++c) allowed[c] = !is_art[c];

  if (!lp.objective.empty()) {
    RatVec cost(cols + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (lp.objective[i] == 0) continue;
      cost[pos_col[i]] = -lp.objective[i];
      if (neg_col[i] != SIZE_MAX) cost[neg_col[i]] = lp.objective[i];
    }
    obj = cost;
    for (std::size_t r = 0; r < m; ++r) {
      if (!live[r]) continue;
      const Rat cb = cost[basis[r]];
      if (cb == 0) continue;
      for (std::size_t c = 0; c <= cols; ++c) {
        const Rat& v = c == cols ? t.rhs(r) : t.at(r, c);
        if (v != 0) obj[c] -= cb * v;
      }
    }
    if (run_simplex(t, obj, basis, allowed, live) == PhaseResult::Unbounded) {
      result.status = LpStatus::Unbounded;
      return result;
    }
  }

  RatVec colval(cols, 0);
  for (std::size_t r = 0; r < m; ++r)
    if (live[r]) colval[basis[r]] = t.rhs(r);
  result.x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    result.x[i] = colval[pos_col[i]];
    if (neg_col[i] != SIZE_MAX) result.x[i] -= colval[neg_col[i]];
  }
  result.value = 0;
  for (std::size_t i = 0; i < lp.objective.size(); ++i) result.value += lp.objective[i] * result.x[i];
  result.status = LpStatus::Optimal;
  return result;
}

bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert) {
  if (cert.eq_multipliers.size() != lp.equalities.size() ||
      cert.le_multipliers.size() != lp.inequalities.size())
    return false;
  RatVec w(lp.num_vars, 0);
  Rat value = 0;
  for (std::size_t r = 0; r < lp.equalities.size(); ++r) {
    const Rat& u = cert.eq_multipliers[r];
    if (u == 0) continue;
    for (std::size_t i = 0; i < lp.num_vars; ++i) w[i] += u * lp.equalities[r].coeffs[i];
    value += u * lp.equalities[r].rhs;
  }
  for (std::size_t r = 0; r < lp.inequalities.size(); ++r) {
    const Rat& v = cert.le_multipliers[r];
    if (v < 0) return false;
    if (v == 0) continue;
    for (std::size_t i = 0; i < lp.num_vars; ++i) w[i] += v * lp.inequalities[r].coeffs[i];
    value += v * lp.inequalities[r].rhs;
  }
  for (std::size_t i = 0; i < lp.num_vars; ++i) {
    if (lp.is_nonnegative(i) ? w[i] < 0 : w[i] != 0) return false;
  }
  return value < 0;
}

bool is_feasible_point(const LinearProgram& lp, const RatVec& x) {
  if (x.size() != lp.num_vars) return false;
  for (std::size_t i = 0; i < lp.num_vars; ++i)
    if (lp.is_nonnegative(i) && x[i] < 0) return false;
  auto dot = [&](const RatVec& a) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) s += a[i] * x[i];
    return s;
  };
  for (const auto& r : lp.equalities)
    if (dot(r.coeffs) != r.rhs) return false;
  for (const auto& r : lp.inequalities)
    if (dot(r.coeffs) > r.rhs) return false;
  return true;
}

}  // namespace necklace
