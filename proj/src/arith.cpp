#include "biquad/arith.hpp"

#include <cctype>

#include "biquad/error.hpp"

namespace biquad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquareFree: return "NotSquareFree";
    case ErrorCode::Equal: return "Equal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorCode::NotAnInteger: return "NotAnInteger";
    case ErrorCode::NotTotallyNonnegative: return "NotTotallyNonnegative";
    case ErrorCode::WrongBasisType: return "WrongBasisType";
    case ErrorCode::InadmissibleParameter: return "InadmissibleParameter";
    case ErrorCode::FormulaMismatch: return "FormulaMismatch";
    case ErrorCode::IdentityFailed: return "IdentityFailed";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

void sqrt_bounds(const Rational& x, unsigned bits, Rational& lo, Rational& hi) {
  // sqrt(a/b) = sqrt(a*b)/b, scaled by 2^bits.
  const Integer ab = x.get_num() * x.get_den();
  Integer scaled = ab << (2 * bits);
  const Integer root = isqrt(scaled);
  const Integer den = x.get_den() << bits;
  lo = make_rational(root, den);
  hi = make_rational(root * root == scaled ? root : root + 1, den);
}

bool is_square_free(std::int64_t n) {
  if (n <= 0) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return false;
    }
  }
  return true;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto digits = [&](std::string& out) {
    skip();
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    out = text.substr(start, i - start);
    return !out.empty();
  };
  skip();
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string num, den = "1";
  if (!digits(num)) throw Error(ErrorCode::ParseError, "expected integer in '" + text + "'");
  skip();
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!digits(den)) throw Error(ErrorCode::ParseError, "expected denominator in '" + text + "'");
  }
  skip();
  if (i != text.size()) throw Error(ErrorCode::ParseError, "trailing input in '" + text + "'");
  const Integer d(den);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  Rational r = make_rational(Integer(num), d);
  return negative ? Rational(-r) : r;
}

}  // namespace biquad
