#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace necklace {

/// Exact rational scalar. gmpxx keeps results of arithmetic in canonical
/// (reduced, positive denominator) form.
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMatrix = std::vector<RatVec>;

/// num/den in lowest terms. mpq_class(num, den) does not reduce, and
/// unreduced values compare incorrectly.
inline Rat ratio(const mpz_class& num, const mpz_class& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p". Throws InputError on malformed text or zero denominator.
Rat parse_rat(std::string_view text);

/// Always "p/q", including integers ("3/1").
std::string format_rat(const Rat& value);

inline double to_double(const Rat& value) { return value.get_d(); }

/// Exact rational value of a finite double.
Rat from_double(double value);

/// Best rational approximation of `value` with denominator at most `max_den`
/// (continued fraction convergents and semiconvergents).
Rat best_rational(double value, const mpz_class& max_den);

/// Smallest-denominator continued-fraction convergent within `tolerance` of
/// `value`; falls back to best_rational(value, max_den) if none qualifies.
Rat snap_to_rational(double value, double tolerance, const mpz_class& max_den);

/// Default snap denominator bound, 2^48.
const mpz_class& snap_denominator_bound();

Rat determinant(RatMatrix m);
std::size_t matrix_rank(RatMatrix m);

/// Unique solution of a square system, or nullopt if singular.
std::optional<RatVec> solve_square(RatMatrix a, RatVec b);

/// Rank of the affine hull of the given points (0 for a single point).
std::size_t affine_rank(const std::vector<RatVec>& points);

Rat factorial(unsigned n);

/// 64-bit FNV-1a over bytes, used to fingerprint exact systems.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace necklace
