#pragma once

// Exact arithmetic in the real biquadratic field Q(sqrt p, sqrt q).
//
// Elements are stored in the fixed basis {1, sqrt p, sqrt q, sqrt r} with
// r = pq / gcd(p,q)^2, independently of the integral basis of the field.

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "biquad/arith.hpp"

namespace biquad {

enum class BasisType { T1, T2, T3, T4a, T4b };

std::string to_string(BasisType type);

struct FieldSpec {
  std::int64_t p = 0, q = 0, r = 0;
  // p0 = gcd(q,r), q0 = gcd(p,r), r0 = gcd(p,q); p = q0 r0, q = p0 r0, r = p0 q0.
  std::int64_t p0 = 0, q0 = 0, r0 = 0;
  BasisType basis_type = BasisType::T1;
  // roles[j] is the index (0 = p, 1 = q, 2 = r) of the radicand playing the
  // j-th role in the congruence classification of the integral basis.
  std::array<int, 3> roles{0, 1, 2};

  std::int64_t radicand(int k) const { return k == 0 ? p : (k == 1 ? q : r); }
  // gcd cofactor attached to radicand k: sqrt(a) sqrt(b) = cofactor(c) sqrt(c).
  std::int64_t cofactor(int k) const { return k == 0 ? p0 : (k == 1 ? q0 : r0); }
  std::int64_t role_radicand(int role) const { return radicand(roles[role]); }

  bool same_field(const FieldSpec& other) const { return p == other.p && q == other.q; }
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

/// Builds Q(sqrt p, sqrt q) and classifies its integral-basis type.
/// Throws OutOfRange, Equal or NotSquareFree.
FieldPtr make_field(std::int64_t p, std::int64_t q);

class FieldElement {
 public:
  using Coords = std::array<Rational, 4>;

  explicit FieldElement(FieldPtr field);
  FieldElement(FieldPtr field, Coords coords);
  FieldElement(FieldPtr field, const Rational& x, const Rational& y, const Rational& z,
               const Rational& w);

  static FieldElement from_rational(FieldPtr field, const Rational& value);
  /// sqrt p, sqrt q or sqrt r for k = 0, 1, 2.
  static FieldElement sqrt_of(FieldPtr field, int k);

  const FieldSpec& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const Coords& coords() const { return coords_; }
  const Rational& operator[](int k) const { return coords_[k]; }

  bool is_zero() const;
  bool is_rational() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& other);
  FieldElement& operator-=(const FieldElement& other);
  FieldElement& operator*=(const FieldElement& other);
  FieldElement& operator*=(const Rational& scalar);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, const Rational& s) { return a *= s; }
  friend FieldElement operator*(const Rational& s, FieldElement a) { return a *= s; }
  friend bool operator==(const FieldElement& a, const FieldElement& b);

 private:
  void require_same_field(const FieldElement& other) const;

  FieldPtr field_;
  Coords coords_;
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement power(const FieldElement& a, unsigned exponent);

/// sigma_i for i in 1..4; the sign pattern on (y, z, w) is
/// (+,+,+), (-,+,-), (+,-,-), (-,-,+).
FieldElement conjugate(const FieldElement& a, int i);
int embedding_sign(int i, int k);

Rational trace(const FieldElement& a);
Rational norm(const FieldElement& a);
/// Throws OutOfRange for zero.
FieldElement inverse(const FieldElement& a);

/// Coefficients of x^4 - A x^3 + B x^2 - C x + D = prod (x - sigma_i(a)).
struct CharPoly {
  Rational A, B, C, D;

  bool is_integral() const {
    return is_integral_value(A) && is_integral_value(B) && is_integral_value(C) &&
           is_integral_value(D);
  }
  Rational operator()(const Rational& x) const { return (((x - A) * x + B) * x - C) * x + D; }

 private:
  static bool is_integral_value(const Rational& v) { return v.get_den() == 1; }
};

CharPoly char_poly(const FieldElement& a);
/// Evaluates the characteristic polynomial at a field element.
FieldElement evaluate(const CharPoly& poly, const FieldElement& a);

bool is_totally_positive(const FieldElement& a);
/// a - b is zero or totally positive.
bool dominates(const FieldElement& a, const FieldElement& b);

struct EmbeddingInterval {
  Rational lo, hi;
  int index = 1;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool excludes_zero() const { return lo > 0 || hi < 0; }
};

/// Rational interval of width <= width containing sigma_i(a).
EmbeddingInterval refine_embedding(const FieldElement& a, int i, const Rational& width);

/// Floating-point approximation of sigma_i(a); only for pruning and display.
double approx_embedding(const FieldElement& a, int i);

/// Literal form "x + y*s{p} + z*s{q} + w*s{r}".
std::string format_element(const FieldElement& a);
/// Accepts the literal form (any subset of terms, any order) or "[x,y,z,w]".
FieldElement parse_element(const FieldPtr& field, const std::string& text);

}  // namespace biquad
