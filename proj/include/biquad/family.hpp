#pragma once

// Three one-parameter families of biquadratic fields with explicitly known
// indecomposable integers: the elements themselves, their norms, minimal
// codifferent traces, associations between them and the resulting lower
// bounds on variables of universal quadratic forms.

#include <optional>
#include <string>
#include <vector>

#include "biquad/lattice.hpp"
#include "biquad/ring.hpp"

namespace biquad {

enum class Family { F1, F2, F3 };

std::string to_string(Family family);
Family parse_family(const std::string& name);

struct FamilyParam {
  Family family = Family::F1;
  int n = 0;
  std::int64_t p = 0, q = 0, r = 0;
  RingPtr ring;
};

/// F1: p=(2n-1)(2n+1), q=(2n-1)(2n+3), n>=6.
/// F2: p=(2n-1)(2n+1), q=(4n-3)(4n+1), n>=9, p and q coprime.
/// F3: p=(2n-1)(2n+1), q=(4n-1)(4n+3), n>=2, p and q coprime.
/// Throws InadmissibleParameter when n is out of range or p, q, r are not
/// square-free (or not coprime where required).
FamilyParam make_family(Family family, int n);

/// Reason make_family would reject n, or nullopt when admissible.
std::optional<std::string> admissibility_failure(Family family, int n);

struct FamilyUnits {
  FieldElement eps_p, eps_q, eps_r;
};

FamilyUnits family_units(const FamilyParam& fp);

enum class ElementName { One, HalfMix, Mu, Alpha, Beta, Gamma, Delta, Omega };

struct FamilyElementLabel {
  ElementName name = ElementName::One;
  std::optional<int> t;

  std::string str() const;
  friend bool operator==(const FamilyElementLabel& a, const FamilyElementLabel& b) {
    return a.name == b.name && a.t == b.t;
  }
};

struct FamilyElement {
  FamilyElementLabel label;
  IntegralElement element;
};

/// Every listed element with its full t-range, each checked to be a totally
/// positive algebraic integer.
std::vector<FamilyElement> family_elements(const FamilyParam& fp);

/// The subset that the association identities reduce the list to.
std::vector<FamilyElement> reduced_elements(const FamilyParam& fp);

FieldElement family_element_value(const FamilyParam& fp, const FamilyElementLabel& label);

/// Closed-form norm, or nullopt where no formula is known.
std::optional<Integer> family_norm(const FamilyElementLabel& label, const FamilyParam& fp);

struct NormRow {
  FamilyElementLabel label;
  Integer direct;
  std::optional<Integer> formula;
};

struct NormReport {
  std::vector<NormRow> rows;
  // F1 only: exponents of the five reference terms of N(beta_t) that match the
  // direct norms.
  std::vector<int> beta_exponents;
};

/// Compares every closed form with the direct norm; throws FormulaMismatch.
NormReport verify_norm_formulas(const FamilyParam& fp);

/// Exponent assignments for the reference N(beta_t) terms (F1) consistent with
/// the given direct norms, each exponent in 0..4.
std::vector<std::vector<int>> fit_beta_norm_exponents(int n, const std::vector<std::pair<int, Integer>>& norms);

Integer norm_bound(const FamilyParam& fp);
/// The element documented to attain the bound.
FamilyElementLabel norm_bound_attainer(const FamilyParam& fp);

/// A totally positive beta with a - beta totally positive, or nullopt when a
/// is indecomposable. Throws BudgetExceeded past step_limit outer steps
/// (0: unlimited).
std::optional<IntegralElement> is_decomposable(const Ring& ring, const IntegralElement& a,
                                               std::uint64_t step_limit = 0);

struct MinTrace {
  std::optional<Integer> value;  // nullopt: greater than t_max
  std::optional<IntCoords> witness;  // codifferent coordinates of delta
};

/// min Tr(a delta) over totally positive delta in the codifferent, searched
/// exhaustively up to t_max.
MinTrace min_codiff_trace(const Ring& ring, const IntegralElement& a, int t_max = 2);

struct IdentityRow {
  std::string relation;
  int t = 0;
  bool holds = false;
};

struct AssociationReport {
  std::vector<IdentityRow> rows;
  // Labels that some identity expresses through another listed element.
  std::vector<FamilyElementLabel> associated;
};

/// Checks every association identity and the unit sanity conditions; throws
/// IdentityFailed on the first failure.
AssociationReport association_identities(const FamilyParam& fp);

struct UniversalFormBounds {
  int trace1_count = 0;  // n in the counting argument
  int trace2_count = 0;  // m
  IntCoords trace1_witness;
  IntCoords trace2_witness;
  Rational classical;  // n / 4
  Rational diagonal;   // max(n / 4, m / 12)
};

/// Codifferent elements used in the counting arguments, by coordinates.
std::vector<IntCoords> documented_trace_witnesses(const FamilyParam& fp);

/// Elements beyond the listed indecomposables that enter the count.
std::vector<FieldElement> auxiliary_elements(const FamilyParam& fp);

UniversalFormBounds universal_form_bounds(const FamilyParam& fp);

}  // namespace biquad
