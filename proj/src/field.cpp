#include "biquad/field.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "biquad/error.hpp"

namespace biquad {

namespace {

constexpr std::int64_t kMaxRadicand = std::int64_t{1} << 40;

// Sign of sqrt(radicand k) under sigma_i, i = 1..4, k = 0..2.
constexpr int kSigns[4][3] = {{1, 1, 1}, {-1, 1, -1}, {1, -1, -1}, {-1, -1, 1}};

constexpr std::array<std::array<int, 3>, 6> kRoleOrders{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

bool matches(BasisType type, std::int64_t P, std::int64_t Q) {
  const std::int64_t mp = mod_pos(P, 4), mq = mod_pos(Q, 4);
  switch (type) {
    case BasisType::T1: return mp == 2 && mq == 3;
    case BasisType::T2: return mp == 2 && mq == 1;
    case BasisType::T3: return mp == 3 && mq == 1;
    case BasisType::T4a:
    case BasisType::T4b: {
      if (mp != 1 || mq != 1) return false;
      const std::int64_t g = gcd64(P, Q);
      const std::int64_t want = type == BasisType::T4a ? 1 : 3;
      return mod_pos(P / g, 4) == want && mod_pos(Q / g, 4) == want;
    }
  }
  return false;
}

}  // namespace

std::string to_string(BasisType type) {
  switch (type) {
    case BasisType::T1: return "T1";
    case BasisType::T2: return "T2";
    case BasisType::T3: return "T3";
    case BasisType::T4a: return "T4a";
    case BasisType::T4b: return "T4b";
  }
  return "?";
}

FieldPtr make_field(std::int64_t p, std::int64_t q) {
  if (p <= 1 || q <= 1 || p > kMaxRadicand || q > kMaxRadicand) {
    throw Error(ErrorCode::OutOfRange, "need 1 < p, q <= 2^40, got p=" + std::to_string(p) +
                                           ", q=" + std::to_string(q));
  }
  if (p == q) throw Error(ErrorCode::Equal, "p and q must differ");
  if (!is_square_free(p)) throw Error(ErrorCode::NotSquareFree, std::to_string(p));
  if (!is_square_free(q)) throw Error(ErrorCode::NotSquareFree, std::to_string(q));

  auto spec = std::make_shared<FieldSpec>();
  spec->p = p;
  spec->q = q;
  spec->r0 = gcd64(p, q);
  spec->r = (p / spec->r0) * (q / spec->r0);
  spec->p0 = gcd64(q, spec->r);
  spec->q0 = gcd64(p, spec->r);

  for (BasisType type :
       {BasisType::T1, BasisType::T2, BasisType::T3, BasisType::T4a, BasisType::T4b}) {
    for (const auto& order : kRoleOrders) {
      if (matches(type, spec->radicand(order[0]), spec->radicand(order[1]))) {
        spec->basis_type = type;
        spec->roles = order;
        return spec;
      }
    }
  }
  // Every pair of distinct square-free integers falls in one of the cases.
  throw Error(ErrorCode::SelfCheckFailed, "no integral-basis case matched");
}

FieldElement::FieldElement(FieldPtr field) : field_(std::move(field)) {}

FieldElement::FieldElement(FieldPtr field, Coords coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  for (auto& c : coords_) c.canonicalize();
}

FieldElement::FieldElement(FieldPtr field, const Rational& x, const Rational& y,
                           const Rational& z, const Rational& w)
    : FieldElement(std::move(field), Coords{x, y, z, w}) {}

FieldElement FieldElement::from_rational(FieldPtr field, const Rational& value) {
  return FieldElement(std::move(field), value, 0, 0, 0);
}

FieldElement FieldElement::sqrt_of(FieldPtr field, int k) {
  Coords c{0, 0, 0, 0};
  c[k + 1] = 1;
  return FieldElement(std::move(field), std::move(c));
}

bool FieldElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  return coords_[1] == 0 && coords_[2] == 0 && coords_[3] == 0;
}

void FieldElement::require_same_field(const FieldElement& other) const {
  if (!field_->same_field(*other.field_)) {
    throw Error(ErrorCode::FieldMismatch,
                "Q(s" + std::to_string(field_->p) + ",s" + std::to_string(field_->q) + ") vs Q(s" +
                    std::to_string(other.field_->p) + ",s" + std::to_string(other.field_->q) + ")");
  }
}

FieldElement FieldElement::operator-() const {
  FieldElement out(*this);
  for (auto& c : out.coords_) c = -c;
  return out;
}

FieldElement& FieldElement::operator+=(const FieldElement& other) {
  require_same_field(other);
  for (int k = 0; k < 4; ++k) coords_[k] += other.coords_[k];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& other) {
  require_same_field(other);
  for (int k = 0; k < 4; ++k) coords_[k] -= other.coords_[k];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& other) {
  require_same_field(other);
  const auto& f = *field_;
  const auto& [x1, y1, z1, w1] = coords_;
  const auto& [x2, y2, z2, w2] = other.coords_;
  // sqrt p sqrt q = r0 sqrt r, sqrt p sqrt r = q0 sqrt q, sqrt q sqrt r = p0 sqrt p.
  Coords out{x1 * x2 + f.p * (y1 * y2) + f.q * (z1 * z2) + f.r * (w1 * w2),
             x1 * y2 + y1 * x2 + f.p0 * (z1 * w2 + w1 * z2),
             x1 * z2 + z1 * x2 + f.q0 * (y1 * w2 + w1 * y2),
             x1 * w2 + w1 * x2 + f.r0 * (y1 * z2 + z1 * y2)};
  coords_ = std::move(out);
  return *this;
}

FieldElement& FieldElement::operator*=(const Rational& scalar) {
  for (auto& c : coords_) c *= scalar;
  return *this;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_->same_field(*b.field_) && a.coords_ == b.coords_;
}

FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
FieldElement sub(const FieldElement& a, const FieldElement& b) { return a - b; }
FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }

FieldElement power(const FieldElement& a, unsigned exponent) {
  FieldElement result = FieldElement::from_rational(a.field_ptr(), 1);
  FieldElement base = a;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

int embedding_sign(int i, int k) { return kSigns[i - 1][k]; }

FieldElement conjugate(const FieldElement& a, int i) {
  if (i < 1 || i > 4) throw Error(ErrorCode::OutOfRange, "embedding index must be 1..4");
  FieldElement::Coords c = a.coords();
  for (int k = 0; k < 3; ++k)
    if (kSigns[i - 1][k] < 0) c[k + 1] = -c[k + 1];
  return FieldElement(a.field_ptr(), std::move(c));
}

Rational trace(const FieldElement& a) { return 4 * a[0]; }

Rational norm(const FieldElement& a) {
  // sigma1 sigma2 lies in Q(sqrt q); multiply by its sigma3-image.
  const FieldElement half = a * conjugate(a, 2);
  const FieldElement full = half * conjugate(half, 3);
  if (!full.is_rational()) {
    throw Error(ErrorCode::SelfCheckFailed, "norm has nonzero radical part");
  }
  return full[0];
}

FieldElement inverse(const FieldElement& a) {
  if (a.is_zero()) throw Error(ErrorCode::OutOfRange, "inverse of zero");
  FieldElement others = conjugate(a, 2) * conjugate(a, 3) * conjugate(a, 4);
  const Rational n = (a * others)[0];
  return others * Rational(1 / n);
}

CharPoly char_poly(const FieldElement& a) {
  // Newton's identities from the power sums Tr(a^k).
  const FieldElement a2 = a * a;
  const FieldElement a3 = a2 * a;
  const FieldElement a4 = a2 * a2;
  const Rational p1 = trace(a), p2 = trace(a2), p3 = trace(a3), p4 = trace(a4);
  CharPoly cp;
  cp.A = p1;
  cp.B = (cp.A * p1 - p2) / 2;
  cp.C = (cp.B * p1 - cp.A * p2 + p3) / 3;
  cp.D = (cp.C * p1 - cp.B * p2 + cp.A * p3 - p4) / 4;
  return cp;
}

FieldElement evaluate(const CharPoly& poly, const FieldElement& a) {
  const FieldPtr& f = a.field_ptr();
  FieldElement acc = a - FieldElement::from_rational(f, poly.A);
  acc = acc * a + FieldElement::from_rational(f, poly.B);
  acc = acc * a - FieldElement::from_rational(f, poly.C);
  acc = acc * a + FieldElement::from_rational(f, poly.D);
  return acc;
}

bool is_totally_positive(const FieldElement& a) {
  if (a.is_rational()) return a[0] > 0;
  const CharPoly cp = char_poly(a);
  return cp.A > 0 && cp.B > 0 && cp.C > 0 && cp.D > 0;
}

bool dominates(const FieldElement& a, const FieldElement& b) {
  const FieldElement diff = a - b;
  return diff.is_zero() || is_totally_positive(diff);
}

EmbeddingInterval refine_embedding(const FieldElement& a, int i, const Rational& width) {
  if (width <= 0) throw Error(ErrorCode::OutOfRange, "width must be positive");
  if (i < 1 || i > 4) throw Error(ErrorCode::OutOfRange, "embedding index must be 1..4");
  const FieldSpec& f = a.field();
  EmbeddingInterval out;
  out.index = i;
  for (unsigned bits = 32;; bits *= 2) {
    out.lo = a[0];
    out.hi = a[0];
    for (int k = 0; k < 3; ++k) {
      const Rational c = kSigns[i - 1][k] * a[k + 1];
      if (c == 0) continue;
      Rational root_lo, root_hi;
      sqrt_bounds(Rational(f.radicand(k)), bits, root_lo, root_hi);
      if (c > 0) {
        out.lo += c * root_lo;
        out.hi += c * root_hi;
      } else {
        out.lo += c * root_hi;
        out.hi += c * root_lo;
      }
    }
    if (out.width() <= width) return out;
  }
}

double approx_embedding(const FieldElement& a, int i) {
  const FieldSpec& f = a.field();
  double v = a[0].get_d();
  for (int k = 0; k < 3; ++k) {
    if (a[k + 1] == 0) continue;
    v += kSigns[i - 1][k] * a[k + 1].get_d() * std::sqrt(static_cast<double>(f.radicand(k)));
  }
  return v;
}

std::string format_element(const FieldElement& a) {
  std::ostringstream out;
  out << a[0].get_str();
  for (int k = 0; k < 3; ++k) {
    const Rational& c = a[k + 1];
    out << (c < 0 ? " - " : " + ") << Rational(abs(c)).get_str() << "*s"
        << a.field().radicand(k);
  }
  return out.str();
}

namespace {

class LiteralParser {
 public:
  LiteralParser(const FieldPtr& field, const std::string& text) : field_(field), text_(text) {}

  FieldElement parse() {
    skip();
    if (peek() == '[') return parse_tuple();
    FieldElement::Coords coords{0, 0, 0, 0};
    bool first = true;
    while (true) {
      skip();
      if (at_end()) break;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      skip();
      // A coefficient may carry its own sign, e.g. "+ -1*s30".
      while (peek() == '-' || peek() == '+') {
        if (peek() == '-') sign = -sign;
        ++pos_;
        skip();
      }
      Rational coeff = 1;
      int slot = 0;
      if (peek() == 's') {
        slot = parse_radical();
      } else {
        coeff = parse_unsigned_rational();
        skip();
        if (peek() == '*') {
          ++pos_;
          skip();
          if (peek() != 's') fail("expected radical after '*'");
          slot = parse_radical();
        }
      }
      coords[slot] += sign * coeff;
      first = false;
    }
    if (first) fail("empty literal");
    return FieldElement(field_, std::move(coords));
  }

 private:
  FieldElement parse_tuple() {
    ++pos_;
    FieldElement::Coords coords;
    for (int k = 0; k < 4; ++k) {
      const std::size_t end = text_.find(k == 3 ? ']' : ',', pos_);
      if (end == std::string::npos) fail("malformed quadruple");
      coords[k] = parse_rational(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
    }
    skip();
    if (!at_end()) fail("trailing input after quadruple");
    return FieldElement(field_, std::move(coords));
  }

  int parse_radical() {
    ++pos_;  // 's'
    if (peek() == '{') ++pos_;
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected radicand");
    const std::int64_t radicand = std::stoll(text_.substr(start, pos_ - start));
    if (peek() == '}') ++pos_;
    for (int k = 0; k < 3; ++k)
      if (field_->radicand(k) == radicand) return k + 1;
    fail("radicand " + std::to_string(radicand) + " is not one of p, q, r");
    return 0;
  }

  Rational parse_unsigned_rational() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '/' || text_[pos_] == ' ')) {
      // Stop before a space that is not inside "num / den".
      if (text_[pos_] == ' ') {
        std::size_t look = pos_;
        while (look < text_.size() && text_[look] == ' ') ++look;
        const bool slash_next = look < text_.size() && text_[look] == '/';
        const bool after_slash = pos_ > start && text_[pos_ - 1] == '/';
        if (!slash_next && !after_slash) break;
      }
      ++pos_;
    }
    if (start == pos_) fail("expected coefficient");
    return parse_rational(text_.substr(start, pos_ - start));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError,
                why + " at position " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  const FieldPtr& field_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldElement parse_element(const FieldPtr& field, const std::string& text) {
  return LiteralParser(field, text).parse();
}

}  // namespace biquad
