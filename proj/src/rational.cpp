#include "necklace/rational.hpp"

#include <cmath>
#include <utility>

#include "necklace/errors.hpp"

namespace necklace {

Rat parse_rat(std::string_view text) {
  if (text.empty()) throw InputError("empty rational");
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](std::string_view part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw InputError("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw InputError("zero denominator in '" + s + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string format_rat(const Rat& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rat from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite double");
  Rat r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

namespace {

// Continued fraction terms of a (positive-denominator) rational.
std::vector<mpz_class> cf_terms(const Rat& x) {
  std::vector<mpz_class> terms;
  mpz_class p = x.get_num(), q = x.get_den();
  while (q != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    terms.push_back(a);
    mpz_class r = p - a * q;
    p = q;
    q = r;
  }
  return terms;
}

}  // namespace

Rat best_rational(double value, const mpz_class& max_den) {
  Rat x = from_double(value);
  if (x.get_den() <= max_den) return x;
  auto terms = cf_terms(x);
  mpz_class h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  for (const auto& a : terms) {
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    if (k > max_den) {
      // Largest semiconvergent that still fits.
      mpz_class m = (max_den - k_prev2) / k_prev;
      Rat semi(m * h_prev + h_prev2, m * k_prev + k_prev2);
      semi.canonicalize();
      Rat conv(h_prev, k_prev);
      conv.canonicalize();
      Rat ds = abs(semi - x), dc = abs(conv - x);
      return ds < dc ? semi : conv;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  Rat r(h_prev, k_prev);
  r.canonicalize();
  return r;
}

Rat snap_to_rational(double value, double tolerance, const mpz_class& max_den) {
  Rat x = from_double(value);
  Rat tol = from_double(tolerance);
  auto terms = cf_terms(x);
  mpz_class h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  for (const auto& a : terms) {
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    if (k > max_den) break;
    Rat conv(h, k);
    conv.canonicalize();
    if (abs(conv - x) <= tol) return conv;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return best_rational(value, max_den);
}

const mpz_class& snap_denominator_bound() {
  static const mpz_class bound = mpz_class(1) << 48;
  return bound;
}

Rat determinant(RatMatrix m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::size_t matrix_rank(RatMatrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVec> solve_square(RatMatrix a, RatVec b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::size_t affine_rank(const std::vector<RatVec>& points) {
  if (points.size() <= 1) return 0;
  RatMatrix diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    RatVec row(points[i].size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = points[i][c] - points[0][c];
    diffs.push_back(std::move(row));
  }
  return matrix_rank(std::move(diffs));
}

Rat factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rat(f);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace necklace
