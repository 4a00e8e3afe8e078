#pragma once

// The ring of integers O_K of a biquadratic field: integral basis for each
// congruence type, coordinate conversion, codifferent dual basis and the
// discriminant.

#include <array>
#include <memory>
#include <optional>

#include "biquad/field.hpp"
#include "biquad/linalg.hpp"

namespace biquad {

using IntCoords = std::array<Integer, 4>;

struct IntegralElement {
  FieldPtr field;
  IntCoords coords;

  bool is_zero() const { return coords[0] == 0 && coords[1] == 0 && coords[2] == 0 && coords[3] == 0; }
  friend bool operator==(const IntegralElement& a, const IntegralElement& b) {
    return a.field->same_field(*b.field) && a.coords == b.coords;
  }
};

std::string to_string(const IntCoords& coords);

struct IntegralBasis {
  std::array<FieldElement, 4> elements;  // gamma_1 = 1
  RatMatrix basis_matrix;                // row i: {1, sqrt p, sqrt q, sqrt r}-coords of gamma_i
};

struct CodifferentBasis {
  std::array<FieldElement, 4> elements;  // Tr(gamma_i phi_j) = [i == j]
};

/// Integral basis of the case matching f.basis_type, built on the role
/// radicands. Throws SelfCheckFailed unless every generator is integral, the
/// Z-span is closed under multiplication and the Gram determinant equals the
/// product of the three quadratic-subfield discriminants.
IntegralBasis integral_basis(const FieldPtr& f);

CodifferentBasis codifferent_basis(const FieldPtr& f, const IntegralBasis& basis);
CodifferentBasis codifferent_basis(const FieldPtr& f);

/// Closed-form codifferent basis for type T3 fields; throws WrongBasisType otherwise.
CodifferentBasis type3_codifferent_closed_form(const FieldPtr& f);

/// Gram matrix [Tr(gamma_i gamma_j)].
IntMatrix trace_gram(const IntegralBasis& basis);
Integer discriminant(const FieldPtr& f);
/// Product of the discriminants of Q(sqrt p), Q(sqrt q), Q(sqrt r).
Integer subfield_discriminant_product(const FieldSpec& f);

/// True iff the characteristic polynomial has integer coefficients.
bool is_algebraic_integer(const FieldElement& a);

/// Sum a_i b_i: the trace of (sum a_i gamma_i)(sum b_j phi_j).
Integer trace_pairing(const IntegralElement& a, const IntCoords& codifferent_coords);

/// Everything derived from one field, computed once.
class Ring {
 public:
  explicit Ring(FieldPtr field);

  const FieldPtr& field_ptr() const { return field_; }
  const FieldSpec& field() const { return *field_; }
  const IntegralBasis& integral() const { return basis_; }
  const std::array<FieldElement, 4>& basis() const { return basis_.elements; }
  const std::array<FieldElement, 4>& codifferent() const { return codiff_.elements; }
  const Integer& discriminant() const { return discriminant_; }
  /// Tr(gamma_k) for each basis element.
  const IntCoords& basis_traces() const { return basis_traces_; }

  FieldElement to_field(const IntCoords& coords) const;
  FieldElement to_field(const IntegralElement& a) const { return to_field(a.coords); }
  /// Throws NotAnInteger when a is not in the Z-span of the basis.
  IntegralElement to_integral(const FieldElement& a) const;
  std::optional<IntegralElement> try_integral(const FieldElement& a) const;
  IntegralElement make(const IntCoords& coords) const { return IntegralElement{field_, coords}; }

  /// sum b_j phi_j.
  FieldElement codifferent_element(const IntCoords& b) const;
  /// (Tr(gamma_k delta))_k; throws NotAnInteger when delta is not in the codifferent.
  IntCoords codifferent_coords(const FieldElement& delta) const;

 private:
  FieldPtr field_;
  IntegralBasis basis_;
  CodifferentBasis codiff_;
  RatMatrix basis_inverse_;
  Integer discriminant_;
  IntCoords basis_traces_;
};

using RingPtr = std::shared_ptr<const Ring>;
RingPtr make_ring(std::int64_t p, std::int64_t q);

}  // namespace biquad
