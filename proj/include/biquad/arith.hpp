#pragma once

// Integer and rational helpers on top of GMP.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace biquad {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integral(const Rational& x) { return x.get_den() == 1; }

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

/// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);

/// Rational bounds lo <= sqrt(x) <= hi with hi - lo <= 2^-bits (x >= 0).
void sqrt_bounds(const Rational& x, unsigned bits, Rational& lo, Rational& hi);

/// Square-freeness by trial division. n must be positive.
bool is_square_free(std::int64_t n);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

/// Nonnegative residue of n modulo m (m > 0).
inline std::int64_t mod_pos(std::int64_t n, std::int64_t m) {
  const std::int64_t r = n % m;
  return r < 0 ? r + m : r;
}

std::string to_string(const Rational& x);

/// Parses "num" or "num/den" with optional sign; throws ParseError.
Rational parse_rational(const std::string& text);

}  // namespace biquad
