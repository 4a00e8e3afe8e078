#include <doctest.h>

#include <algorithm>

#include "biquad/error.hpp"
#include "biquad/family.hpp"

using namespace biquad;

namespace {

bool square_free_by_trial(std::int64_t n) {
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

std::int64_t gcd_by_trial(std::int64_t a, std::int64_t b) {
  std::int64_t g = 1;
  for (std::int64_t d = 2; d <= std::min(a, b); ++d)
    if (a % d == 0 && b % d == 0) g = d;
  return g;
}

bool admissible_oracle(Family f, int n) {
  const std::int64_t N = n, p = (2 * N - 1) * (2 * N + 1);
  switch (f) {
    case Family::F1:
      return n >= 6 && square_free_by_trial(p) && square_free_by_trial((2 * N - 1) * (2 * N + 3)) &&
             square_free_by_trial((2 * N + 1) * (2 * N + 3));
    case Family::F2: {
      const std::int64_t q = (4 * N - 3) * (4 * N + 1);
      return n >= 9 && square_free_by_trial(p) && square_free_by_trial(q) && gcd_by_trial(p, q) == 1;
    }
    case Family::F3: {
      const std::int64_t q = (4 * N - 1) * (4 * N + 3);
      return n >= 2 && square_free_by_trial(p) && square_free_by_trial(q) && gcd_by_trial(p, q) == 1;
    }
  }
  return false;
}

FamilyElementLabel label(ElementName name, std::optional<int> t = std::nullopt) { return {name, t}; }

const FamilyElement& find(const std::vector<FamilyElement>& list, const FamilyElementLabel& l) {
  auto it = std::find_if(list.begin(), list.end(), [&](const FamilyElement& e) { return e.label == l; });
  REQUIRE(it != list.end());
  return *it;
}

}  // namespace

TEST_SUITE("family") {
  TEST_CASE("parameters") {
    const FamilyParam f1 = make_family(Family::F1, 6);
    CHECK(f1.p == 143);
    CHECK(f1.q == 165);
    CHECK(f1.r == 195);
    CHECK(f1.ring->field().basis_type == BasisType::T3);
    const FamilyParam f3 = make_family(Family::F3, 2);
    CHECK(f3.p == 15);
    CHECK(f3.q == 77);
    CHECK(f3.r == 1155);
    CHECK_NOTHROW(make_family(Family::F1, 7));
    CHECK_THROWS_AS(make_family(Family::F3, 3), Error);
    CHECK_THROWS_AS(make_family(Family::F1, 5), Error);
    CHECK(parse_family(to_string(Family::F2)) == Family::F2);
  }

  TEST_CASE("admissibility agrees with trial division") {
    for (Family f : {Family::F1, Family::F2, Family::F3}) {
      for (int n = 1; n <= 40; ++n) {
        CHECK_MESSAGE(!admissibility_failure(f, n).has_value() == admissible_oracle(f, n), to_string(f) << " n=" << n);
      }
    }
  }

  TEST_CASE("units") {
    for (const auto& [f, n] : std::vector<std::pair<Family, int>>{{Family::F1, 6}, {Family::F2, 9}, {Family::F3, 2}}) {
      const FamilyParam fp = make_family(f, n);
      const FamilyUnits u = family_units(fp);
      for (const FieldElement* e : {&u.eps_p, &u.eps_q, &u.eps_r}) {
        CHECK(norm(*e) == 1);
        CHECK(is_totally_positive(*e));
        CHECK(is_algebraic_integer(*e));
      }
    }
  }

  TEST_CASE("documented elements") {
    const FamilyParam fp = make_family(Family::F1, 6);
    const auto all = family_elements(fp);
    CHECK(find(all, label(ElementName::Mu)).element.coords == IntCoords{7, 0, 1, 1});
    const FieldElement a3 = fp.ring->to_field(find(all, label(ElementName::Alpha, 3)).element);
    CHECK(a3 == parse_element(fp.ring->field_ptr(), "65/2 + 5/2*s143 + 3/2*s165 + 3/2*s195"));
    for (const FamilyElement& e : all) {
      const FieldElement x = fp.ring->to_field(e.element);
      CHECK(is_totally_positive(x));
      CHECK(is_algebraic_integer(x));
      CHECK(family_element_value(fp, e.label) == x);
    }

    const FamilyParam f2 = make_family(Family::F2, 9);
    const FamilyUnits u = family_units(f2);
    const FieldElement expected = (conjugate(u.eps_p, 2) + u.eps_r) * FieldElement::from_rational(f2.ring->field_ptr(), Rational(1, 2));
    CHECK(family_element_value(f2, label(ElementName::Alpha, 0)) == expected);
  }

  TEST_CASE("reduced lists") {
    const FamilyParam fp = make_family(Family::F1, 6);
    const auto red = reduced_elements(fp);
    // 1, half, mu, alpha_3..10, beta_3..6, omega_2..6
    CHECK(red.size() == 3 + 8 + 4 + 5);
    const FamilyParam f2 = make_family(Family::F2, 9);
    CHECK(reduced_elements(f2).size() == 1 + 17 + 1);
  }

  TEST_CASE("norm formulas") {
    const FamilyParam fp = make_family(Family::F1, 6);
    CHECK(norm(family_element_value(fp, label(ElementName::Alpha, 3))) == 9025);
    CHECK(norm(family_element_value(fp, label(ElementName::Alpha, 10))) == 34596);
    const NormReport report = verify_norm_formulas(fp);
    for (const NormRow& row : report.rows) {
      if (row.formula) CHECK(*row.formula == row.direct);
    }
    CHECK(report.beta_exponents == std::vector<int>{4, 3, 2, 1, 0});
    std::vector<std::pair<int, Integer>> betas;
    for (int t = 3; t <= 10; ++t) betas.emplace_back(t, norm(family_element_value(fp, label(ElementName::Beta, t))).get_num());
    const auto fits = fit_beta_norm_exponents(6, betas);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0] == std::vector<int>{4, 3, 2, 1, 0});

    for (const auto& [f, n] : std::vector<std::pair<Family, int>>{{Family::F2, 9}, {Family::F3, 2}, {Family::F3, 9}}) {
      const NormReport r = verify_norm_formulas(make_family(f, n));
      CHECK(r.rows.size() > 3);
    }
  }

  TEST_CASE("norm bounds") {
    CHECK(norm_bound(make_family(Family::F1, 6)) == 34596);
    CHECK(norm_bound(make_family(Family::F2, 9)) == 104329);
    CHECK(norm_bound(make_family(Family::F3, 2)) == 361);
    for (const auto& [f, n] :
         std::vector<std::pair<Family, int>>{{Family::F1, 6}, {Family::F1, 10}, {Family::F2, 9}, {Family::F3, 2}}) {
      const FamilyParam fp = make_family(f, n);
      const Integer bound = norm_bound(fp);
      Integer best = 0;
      for (const FamilyElement& e : family_elements(fp)) {
        const Rational nm = norm(fp.ring->to_field(e.element));
        CHECK(nm <= bound);
        if (nm > best) best = nm.get_num();
      }
      CHECK(best == bound);
      CHECK(norm(family_element_value(fp, norm_bound_attainer(fp))) == bound);
    }
    CHECK(norm_bound_attainer(make_family(Family::F1, 6)) == label(ElementName::Alpha, 10));
    CHECK(norm_bound_attainer(make_family(Family::F2, 9)) == label(ElementName::Alpha, 0));
  }

  TEST_CASE("minimal codifferent trace") {
    const FamilyParam fp = make_family(Family::F1, 6);
    const Ring& ring = *fp.ring;
    const MinTrace mu = min_codiff_trace(ring, ring.make({7, 0, 1, 1}));
    CHECK(mu.value == Integer(1));
    CHECK(is_totally_positive(ring.codifferent_element({1, -11, 6, -12})));
    CHECK(min_codiff_trace(ring, ring.make({1, 0, 0, 0})).value == Integer(1));
    for (const FamilyElement& e : reduced_elements(fp)) {
      const MinTrace m = min_codiff_trace(ring, e.element);
      REQUIRE(m.value.has_value());
      REQUIRE(m.witness.has_value());
      const bool one = e.label.name == ElementName::One || e.label.name == ElementName::HalfMix ||
                       e.label.name == ElementName::Mu;
      CHECK_MESSAGE(*m.value == (one ? 1 : 2), e.label.str());
      const FieldElement delta = ring.codifferent_element(*m.witness);
      CHECK(is_totally_positive(delta));
      CHECK(ring.codifferent_coords(delta) == *m.witness);
      CHECK(Rational(*m.value) == trace(ring.to_field(e.element) * delta));
    }
    // Above t_max nothing is guessed.
    CHECK_FALSE(min_codiff_trace(ring, find(family_elements(fp), label(ElementName::Alpha, 3)).element, 1).value);
  }

  TEST_CASE("minimal trace one on the coprime families") {
    for (const auto& [f, n] : std::vector<std::pair<Family, int>>{{Family::F2, 9}, {Family::F3, 2}}) {
      const FamilyParam fp = make_family(f, n);
      for (const FamilyElement& e : family_elements(fp)) {
        CHECK_MESSAGE(min_codiff_trace(*fp.ring, e.element).value == Integer(1), e.label.str());
      }
    }
  }

  TEST_CASE("decomposability") {
    const FamilyParam fp = make_family(Family::F1, 6);
    const Ring& ring = *fp.ring;
    CHECK_FALSE(is_decomposable(ring, ring.make({7, 0, 1, 1})));
    const auto all = family_elements(fp);
    CHECK_FALSE(is_decomposable(ring, find(all, label(ElementName::Alpha, 3)).element));
    CHECK_FALSE(is_decomposable(ring, find(all, label(ElementName::Omega, 2)).element));
    CHECK_FALSE(is_decomposable(ring, ring.make({1, 0, 0, 0})));

    const auto two = is_decomposable(ring, ring.make({2, 0, 0, 0}));
    REQUIRE(two);
    CHECK(two->coords == IntCoords{1, 0, 0, 0});
    const IntegralElement big = ring.to_integral(parse_element(ring.field_ptr(), "13 + s143"));
    const auto w = is_decomposable(ring, big);
    REQUIRE(w);
    const FieldElement rest = ring.to_field(big) - ring.to_field(*w);
    CHECK(is_totally_positive(ring.to_field(*w)));
    CHECK(is_totally_positive(rest));
    const auto w2 = is_decomposable(ring, ring.make({8, 0, 1, 1}));
    REQUIRE(w2);
    CHECK(is_totally_positive(ring.to_field(ring.make({8, 0, 1, 1})) - ring.to_field(*w2)));
  }

  TEST_CASE("association identities") {
    for (const auto& [f, n] : std::vector<std::pair<Family, int>>{{Family::F1, 6}, {Family::F1, 10}, {Family::F2, 9},
                                                                {Family::F3, 2}, {Family::F3, 9}}) {
      const AssociationReport r = association_identities(make_family(f, n));
      CHECK(!r.rows.empty());
      for (const IdentityRow& row : r.rows) CHECK(row.holds);
    }
    const FamilyParam fp = make_family(Family::F1, 6);
    const FamilyUnits u = family_units(fp);
    CHECK(family_element_value(fp, label(ElementName::Delta, 11)) ==
          conjugate(family_element_value(fp, label(ElementName::Alpha, 3)), 3) * u.eps_r);
  }

  TEST_CASE("universal form bounds") {
    const UniversalFormBounds a = universal_form_bounds(make_family(Family::F1, 6));
    CHECK(a.trace2_count == 32);
    CHECK(a.diagonal == Rational(8, 3));
    const UniversalFormBounds b = universal_form_bounds(make_family(Family::F2, 9));
    CHECK(b.trace1_count == 42);
    CHECK(b.classical == Rational(21, 2));
    const UniversalFormBounds c = universal_form_bounds(make_family(Family::F3, 2));
    CHECK(c.trace1_count == 14);
    CHECK(c.classical == Rational(7, 2));
  }
}
