#include "biquad/ring.hpp"

#include <sstream>

#include "biquad/error.hpp"

namespace biquad {

namespace {

FieldElement role_sqrt(const FieldPtr& f, int role) {
  return FieldElement::sqrt_of(f, f->roles[role]);
}

FieldElement constant(const FieldPtr& f, const Rational& v) {
  return FieldElement::from_rational(f, v);
}

std::array<FieldElement, 4> generators(const FieldPtr& f) {
  const FieldElement one = constant(f, 1);
  const FieldElement sp = role_sqrt(f, 0), sq = role_sqrt(f, 1), sr = role_sqrt(f, 2);
  const Rational half(1, 2), quarter(1, 4);
  switch (f->basis_type) {
    case BasisType::T1:
      return {one, sp, sq, (sp + sr) * half};
    case BasisType::T2:
    case BasisType::T3:
      return {one, sp, (one + sq) * half, (sp + sr) * half};
    case BasisType::T4a:
      return {one, (one + sp) * half, (one + sq) * half, (one + sp + sq + sr) * quarter};
    case BasisType::T4b:
      // Closure and discriminant checks below confirm this generator.
      return {one, (one + sp) * half, (one + sq) * half, (one - sp + sq + sr) * quarter};
  }
  throw Error(ErrorCode::SelfCheckFailed, "unknown basis type");
}

RatMatrix coordinate_matrix(const std::array<FieldElement, 4>& elements) {
  RatMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = elements[i][j];
  return m;
}

// Row vector v times matrix m.
std::array<Rational, 4> row_times(const FieldElement::Coords& v, const RatMatrix& m) {
  std::array<Rational, 4> out{0, 0, 0, 0};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) out[j] += v[k] * m(k, j);
  return out;
}

std::int64_t quadratic_discriminant(std::int64_t m) { return mod_pos(m, 4) == 1 ? m : 4 * m; }

}  // namespace

std::string to_string(const IntCoords& coords) {
  std::ostringstream out;
  out << '(' << coords[0] << ',' << coords[1] << ',' << coords[2] << ',' << coords[3] << ')';
  return out.str();
}

Integer subfield_discriminant_product(const FieldSpec& f) {
  return Integer(quadratic_discriminant(f.p)) * quadratic_discriminant(f.q) *
         quadratic_discriminant(f.r);
}

IntMatrix trace_gram(const IntegralBasis& basis) {
  IntMatrix g(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const Rational t = trace(basis.elements[i] * basis.elements[j]);
      if (!is_integral(t)) throw Error(ErrorCode::SelfCheckFailed, "non-integral trace form");
      g(i, j) = t.get_num();
      g(j, i) = t.get_num();
    }
  }
  return g;
}

IntegralBasis integral_basis(const FieldPtr& f) {
  IntegralBasis basis{generators(f), {}};
  basis.basis_matrix = coordinate_matrix(basis.elements);
  const std::string where = " for Q(s" + std::to_string(f->p) + ",s" + std::to_string(f->q) +
                            ") type " + to_string(f->basis_type);
  if (determinant(basis.basis_matrix) == 0) {
    throw Error(ErrorCode::SelfCheckFailed, "singular basis" + where);
  }
  for (const auto& g : basis.elements) {
    if (!is_algebraic_integer(g)) {
      throw Error(ErrorCode::SelfCheckFailed, "non-integral generator " + format_element(g) + where);
    }
  }
  const RatMatrix inv = inverse(basis.basis_matrix);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const auto c = row_times((basis.elements[i] * basis.elements[j]).coords(), inv);
      for (const auto& v : c) {
        if (!is_integral(v)) throw Error(ErrorCode::SelfCheckFailed, "span not closed" + where);
      }
    }
  }
  if (determinant(trace_gram(basis)) != subfield_discriminant_product(*f)) {
    throw Error(ErrorCode::SelfCheckFailed, "discriminant mismatch, order not maximal" + where);
  }
  return basis;
}

CodifferentBasis codifferent_basis(const FieldPtr& f, const IntegralBasis& basis) {
  // phi_j = sum_k C_jk gamma_k with C G = I, G the (symmetric) trace Gram matrix.
  RatMatrix gram(4, 4);
  const IntMatrix g = trace_gram(basis);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram(i, j) = g(i, j);
  const RatMatrix c = inverse(gram);
  CodifferentBasis out{{FieldElement(f), FieldElement(f), FieldElement(f), FieldElement(f)}};
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) out.elements[j] += basis.elements[k] * c(j, k);
  }
  return out;
}

CodifferentBasis codifferent_basis(const FieldPtr& f) {
  return codifferent_basis(f, integral_basis(f));
}

CodifferentBasis type3_codifferent_closed_form(const FieldPtr& f) {
  if (f->basis_type != BasisType::T3) {
    throw Error(ErrorCode::WrongBasisType, "closed-form codifferent needs type T3");
  }
  const Rational p0 = f->cofactor(f->roles[0]);
  const Rational q0 = f->cofactor(f->roles[1]);
  const Rational r0 = f->cofactor(f->roles[2]);
  const FieldElement one = constant(f, 1);
  const FieldElement sp = role_sqrt(f, 0);
  const FieldElement half_q = (one + role_sqrt(f, 1)) * Rational(1, 2);
  const FieldElement half_pr = (sp + role_sqrt(f, 2)) * Rational(1, 2);
  CodifferentBasis out{{
      one * Rational(Rational(1, 4) + 1 / (4 * p0 * r0)) - half_q * Rational(1 / (2 * p0 * r0)),
      sp * Rational(1 / (4 * p0 * q0) + 1 / (4 * q0 * r0)) - half_pr * Rational(1 / (2 * p0 * q0)),
      one * Rational(-1 / (2 * p0 * r0)) + half_q * Rational(1 / (p0 * r0)),
      sp * Rational(-1 / (2 * p0 * q0)) + half_pr * Rational(1 / (p0 * q0)),
  }};
  return out;
}

Integer discriminant(const FieldPtr& f) { return determinant(trace_gram(integral_basis(f))); }

bool is_algebraic_integer(const FieldElement& a) { return char_poly(a).is_integral(); }

Integer trace_pairing(const IntegralElement& a, const IntCoords& codifferent_coords) {
  Integer s = 0;
  for (int i = 0; i < 4; ++i) s += a.coords[i] * codifferent_coords[i];
  return s;
}

Ring::Ring(FieldPtr field)
    : field_(std::move(field)),
      basis_(integral_basis(field_)),
      codiff_(codifferent_basis(field_, basis_)),
      basis_inverse_(inverse(basis_.basis_matrix)) {
  discriminant_ = determinant(trace_gram(basis_));
  for (int k = 0; k < 4; ++k) basis_traces_[k] = trace(basis_.elements[k]).get_num();
}

FieldElement Ring::to_field(const IntCoords& coords) const {
  FieldElement::Coords c{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    if (coords[i] == 0) continue;
    for (int j = 0; j < 4; ++j) c[j] += coords[i] * basis_.basis_matrix(i, j);
  }
  return FieldElement(field_, std::move(c));
}

std::optional<IntegralElement> Ring::try_integral(const FieldElement& a) const {
  if (!a.field().same_field(*field_)) {
    throw Error(ErrorCode::FieldMismatch, "element from another field");
  }
  const auto c = row_times(a.coords(), basis_inverse_);
  IntegralElement out{field_, {}};
  for (int i = 0; i < 4; ++i) {
    if (!is_integral(c[i])) return std::nullopt;
    out.coords[i] = c[i].get_num();
  }
  return out;
}

IntegralElement Ring::to_integral(const FieldElement& a) const {
  auto out = try_integral(a);
  if (!out) throw Error(ErrorCode::NotAnInteger, format_element(a));
  return *out;
}

FieldElement Ring::codifferent_element(const IntCoords& b) const {
  FieldElement out(field_);
  for (int j = 0; j < 4; ++j) {
    if (b[j] != 0) out += codiff_.elements[j] * Rational(b[j]);
  }
  return out;
}

IntCoords Ring::codifferent_coords(const FieldElement& delta) const {
  IntCoords out;
  for (int k = 0; k < 4; ++k) {
    const Rational t = trace(basis_.elements[k] * delta);
    if (!is_integral(t)) throw Error(ErrorCode::NotAnInteger, "not in the codifferent");
    out[k] = t.get_num();
  }
  return out;
}

RingPtr make_ring(std::int64_t p, std::int64_t q) {
  return std::make_shared<const Ring>(make_field(p, q));
}

}  // namespace biquad
