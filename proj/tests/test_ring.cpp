#include <doctest.h>

#include <map>

#include "biquad/error.hpp"
#include "biquad/ring.hpp"
#include "helpers.hpp"

using namespace biquad;

namespace {

FieldElement lit(const Ring& r, const std::string& s) { return parse_element(r.field_ptr(), s); }

bool duality_holds(const Ring& ring) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (trace(ring.basis()[i] * ring.codifferent()[j]) != (i == j ? 1 : 0)) return false;
    }
  return true;
}

}  // namespace

TEST_SUITE("ring") {
  TEST_CASE("integral bases of known cases") {
    const RingPtr a = make_ring(30, 35);
    CHECK(a->basis()[0] == lit(*a, "1"));
    CHECK(a->basis()[1] == lit(*a, "s30"));
    CHECK(a->basis()[2] == lit(*a, "s35"));
    CHECK(a->basis()[3] == lit(*a, "1/2*s30 + 1/2*s42"));

    const RingPtr b = make_ring(143, 165);
    CHECK(b->basis()[1] == lit(*b, "s143"));
    CHECK(b->basis()[2] == lit(*b, "1/2 + 1/2*s165"));
    CHECK(b->basis()[3] == lit(*b, "1/2*s143 + 1/2*s195"));

    const RingPtr c = make_ring(5, 13);
    CHECK(c->basis()[3] == lit(*c, "1/4 + 1/4*s5 + 1/4*s13 + 1/4*s65"));
    const RingPtr d = make_ring(21, 33);
    CHECK(d->field().basis_type == BasisType::T4b);
    CHECK(is_algebraic_integer(d->basis()[3]));
  }

  TEST_CASE("every small field passes the basis self-checks and duality") {
    std::map<BasisType, int> seen;
    int fields = 0;
    for (std::int64_t p = 2; p < 60; ++p) {
      if (!is_square_free(p)) continue;
      for (std::int64_t q = p + 1; q < 60; ++q) {
        if (!is_square_free(q)) continue;
        const FieldPtr f = make_field(p, q);
        if (f->r == p || f->r == q) continue;
        const Ring ring(f);
        ++seen[f->basis_type];
        ++fields;
        CHECK(duality_holds(ring));
        CHECK(ring.discriminant() == subfield_discriminant_product(*f));
        CHECK(ring.discriminant() > 0);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) CHECK(ring.try_integral(ring.basis()[i] * ring.basis()[j]).has_value());
      }
    }
    CHECK(fields >= 50);
    for (auto t : {BasisType::T1, BasisType::T2, BasisType::T3, BasisType::T4a, BasisType::T4b}) {
      CHECK(seen[t] > 0);
    }
  }

  TEST_CASE("coordinate conversion") {
    const RingPtr ring = make_ring(143, 165);
    const auto mu = ring->to_integral(lit(*ring, "15/2 + 1/2*s143 + 1/2*s165 + 1/2*s195"));
    CHECK(mu.coords == IntCoords{7, 0, 1, 1});
    CHECK(ring->to_integral(lit(*ring, "1")).coords == IntCoords{1, 0, 0, 0});
    CHECK_THROWS_AS(ring->to_integral(lit(*ring, "1/3")), Error);
    CHECK_FALSE(ring->try_integral(lit(*ring, "1/2 + 1/2*s143")).has_value());
  }

  TEST_CASE("algebraic integers") {
    const RingPtr ring = make_ring(143, 165);
    CHECK(is_algebraic_integer(lit(*ring, "1/2 + 1/2*s165")));
    CHECK(is_algebraic_integer(lit(*ring, "5")));
    const RingPtr t1 = make_ring(30, 35);
    const FieldElement h = lit(*t1, "1/2 + 1/2*s30");
    CHECK_FALSE(is_algebraic_integer(h));
    // (x - 1/2)^2 = 30/4 has a non-integral constant term.
    CHECK(char_poly(h).D.get_den() != 1);
  }

  TEST_CASE("integrality test agrees with membership in the basis span") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> c(-12, 12), den(0, 2);
    const int dens[3] = {1, 2, 4};
    for (const auto& [p, q] : biquad::testing::sample_fields()) {
      const RingPtr ring = make_ring(p, q);
      for (int iter = 0; iter < 200; ++iter) {
        const FieldElement a(ring->field_ptr(), make_rational(c(rng), dens[den(rng)]), make_rational(c(rng), dens[den(rng)]),
                             make_rational(c(rng), dens[den(rng)]), make_rational(c(rng), dens[den(rng)]));
        CHECK(is_algebraic_integer(a) == ring->try_integral(a).has_value());
      }
    }
  }

  TEST_CASE("round trip between integral and field coordinates") {
    std::mt19937_64 rng(3);
    int n = 0;
    for (const auto& [p, q] : biquad::testing::sample_fields()) {
      const RingPtr ring = make_ring(p, q);
      for (int iter = 0; iter < 130; ++iter, ++n) {
        const IntCoords c = biquad::testing::random_coords(rng, 1000);
        const FieldElement a = ring->to_field(c);
        CHECK(ring->to_integral(a).coords == c);
        CHECK(char_poly(a).is_integral());
      }
    }
    CHECK(n >= 1000);
  }

  TEST_CASE("codifferent: duality and the type 3 closed form") {
    const RingPtr ring = make_ring(143, 165);
    CHECK(duality_holds(*ring));
    const CodifferentBasis closed = type3_codifferent_closed_form(ring->field_ptr());
    // Change of basis: coordinates of the closed form in the solved basis.
    RatMatrix m(4, 4);
    for (int j = 0; j < 4; ++j) {
      const IntCoords c = ring->codifferent_coords(closed.elements[j]);
      for (int k = 0; k < 4; ++k) m(j, k) = c[k];
    }
    const Rational det = determinant(m);
    CHECK((det == 1 || det == -1));
    CHECK_THROWS_AS(type3_codifferent_closed_form(make_field(30, 35)), Error);

    const FieldElement mu = lit(*ring, "15/2 + 1/2*s143 + 1/2*s165 + 1/2*s195");
    CHECK(trace(mu * ring->codifferent_element({1, -11, 6, -12})) == 1);
    CHECK_THROWS_AS(ring->codifferent_coords(lit(*ring, "1/1000")), Error);
  }

  TEST_CASE("trace pairing") {
    const RingPtr ring = make_ring(143, 165);
    CHECK(trace_pairing(ring->make({1, 0, 0, 0}), {1, 0, 0, 0}) == 1);
    CHECK(trace_pairing(ring->make({7, 0, 1, 1}), {1, -11, 6, -12}) == 1);
    std::mt19937_64 rng(8);
    for (const auto& [p, q] : biquad::testing::sample_fields()) {
      const RingPtr r = make_ring(p, q);
      for (int iter = 0; iter < 50; ++iter) {
        const IntCoords a = biquad::testing::random_coords(rng, 50), b = biquad::testing::random_coords(rng, 50);
        CHECK(Rational(trace_pairing(r->make(a), b)) == trace(r->to_field(a) * r->codifferent_element(b)));
      }
    }
  }

  TEST_CASE("discriminant") {
    CHECK(discriminant(make_field(143, 165)) == 73616400);
    CHECK(Integer(73616400) == Integer(16) * 143 * 165 * 195);
    const RingPtr t1 = make_ring(30, 35);
    CHECK(t1->discriminant() == determinant(trace_gram(t1->integral())));
    for (std::int64_t n : {6, 7, 8, 9, 10}) {
      const std::int64_t p = (2 * n - 1) * (2 * n + 1), q = (2 * n - 1) * (2 * n + 3), r = (2 * n + 1) * (2 * n + 3);
      CHECK(discriminant(make_field(p, q)) == Integer(16) * p * q * r);
    }
  }
}
