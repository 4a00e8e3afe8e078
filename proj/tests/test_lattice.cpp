#include <doctest.h>

#include <cmath>
#include <set>

#include "biquad/lattice.hpp"
#include "helpers.hpp"

using namespace biquad;

namespace {

int exact_sign(const FieldElement& a, int i) {
  if (a.is_zero()) return 0;
  Rational width(1, 16);
  EmbeddingInterval e = refine_embedding(a, i, width);
  while (!e.excludes_zero()) {
    width /= 1024;
    e = refine_embedding(a, i, width);
  }
  return e.lo > 0 ? 1 : -1;
}

bool in_box(const Ring& ring, const IntCoords& c, const EmbeddingBox& box) {
  const FieldElement x = ring.to_field(c);
  for (int i = 0; i < 4; ++i) {
    const FieldElement lo = FieldElement::from_rational(ring.field_ptr(), box.lo[i]);
    const FieldElement hi = FieldElement::from_rational(ring.field_ptr(), box.hi[i]);
    if (exact_sign(x - lo, i + 1) < 0 || exact_sign(hi - x, i + 1) < 0) return false;
  }
  return true;
}

// Oracle: the whole coordinate box from double-precision bounds on
// Tr(h_k x), widened by one, filtered exactly.
std::set<IntCoords> naive_points(const Ring& ring, const EmbeddingBox& box, const std::optional<LinearEquation>& eq) {
  long lo[4], hi[4];
  for (int k = 0; k < 4; ++k) {
    double a = 0, b = 0;
    for (int i = 0; i < 4; ++i) {
      const double h = approx_embedding(ring.codifferent()[k], i + 1);
      const double l = box.lo[i].get_d(), u = box.hi[i].get_d();
      a += std::min(h * l, h * u);
      b += std::max(h * l, h * u);
    }
    lo[k] = static_cast<long>(std::floor(a)) - 1;
    hi[k] = static_cast<long>(std::ceil(b)) + 1;
  }
  std::set<IntCoords> out;
  for (long a = lo[0]; a <= hi[0]; ++a)
    for (long b = lo[1]; b <= hi[1]; ++b)
      for (long c = lo[2]; c <= hi[2]; ++c)
        for (long d = lo[3]; d <= hi[3]; ++d) {
          const IntCoords x{a, b, c, d};
          if (eq) {
            Integer s = 0;
            for (int k = 0; k < 4; ++k) s += eq->coeffs[k] * x[k];
            if (s != eq->value) continue;
          }
          if (in_box(ring, x, box)) out.insert(x);
        }
  return out;
}

std::set<IntCoords> enumerated(const Ring& ring, const EmbeddingBox& box, const std::optional<LinearEquation>& eq,
                               bool natural = false) {
  const LatticeEnumerator en(ring.basis(), ring.codifferent());
  std::set<IntCoords> out;
  const EnumerationStats st = en.enumerate(
      box, eq,
      [&](const IntCoords& c) {
        if (in_box(ring, c, box)) out.insert(c);
        return true;
      },
      0, natural);
  CHECK(st.status == EnumerationStatus::Completed);
  return out;
}

EmbeddingBox symmetric_box(const Rational& radius) {
  EmbeddingBox box;
  for (int i = 0; i < 4; ++i) {
    box.lo[i] = -radius;
    box.hi[i] = radius;
  }
  return box;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("coordinate bounds contain every box point") {
    const RingPtr ring = make_ring(143, 165);
    const LatticeEnumerator en(ring->basis(), ring->codifferent());
    const EmbeddingBox box = symmetric_box(Rational(7, 2));
    const auto bounds = en.coordinate_bounds(box);
    for (const IntCoords& c : naive_points(*ring, box, std::nullopt)) {
      for (int k = 0; k < 4; ++k) {
        CHECK(bounds[k].first <= c[k]);
        CHECK(c[k] <= bounds[k].second);
      }
    }
  }

  TEST_CASE("enumeration matches the naive box on every basis type") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> half(1, 9), shift(-4, 4);
    for (const auto& [p, q] : biquad::testing::sample_fields()) {
      const RingPtr ring = make_ring(p, q);
      for (int iter = 0; iter < 3; ++iter) {
        EmbeddingBox box;
        for (int i = 0; i < 4; ++i) {
          box.lo[i] = Rational(shift(rng)) - make_rational(half(rng), 2);
          box.hi[i] = box.lo[i] + make_rational(half(rng), 1) + Rational(1, 3);
        }
        const auto expected = naive_points(*ring, box, std::nullopt);
        CHECK(enumerated(*ring, box, std::nullopt) == expected);
        CHECK(enumerated(*ring, box, std::nullopt, true) == expected);
      }
    }
  }

  TEST_CASE("box on an element's embeddings") {
    const RingPtr ring = make_ring(143, 165);
    const FieldElement mu = parse_element(ring->field_ptr(), "15/2 + 1/2*s143 + 1/2*s165 + 1/2*s195");
    EmbeddingBox box;
    for (int i = 0; i < 4; ++i) {
      const EmbeddingInterval e = refine_embedding(mu, i + 1, Rational(1, 1 << 20));
      box.lo[i] = 0;
      box.hi[i] = e.hi;
    }
    const auto expected = naive_points(*ring, box, std::nullopt);
    CHECK(expected.count(IntCoords{0, 0, 0, 0}) == 1);
    CHECK(expected.count(IntCoords{7, 0, 1, 1}) == 1);
    CHECK(enumerated(*ring, box, std::nullopt) == expected);
  }

  TEST_CASE("equation mode") {
    for (const auto& [p, q] : biquad::testing::sample_fields()) {
      const RingPtr ring = make_ring(p, q);
      const EmbeddingBox box = symmetric_box(Rational(9, 2));
      for (const LinearEquation& eq : {LinearEquation{{1, 0, 0, 0}, 2}, LinearEquation{{1, -1, 2, 1}, 1},
                                       LinearEquation{{0, 2, 0, 4}, 3}, LinearEquation{{0, 0, 3, 0}, -3}}) {
        const auto expected = naive_points(*ring, box, eq);
        CHECK(enumerated(*ring, box, eq) == expected);
      }
    }
  }

  TEST_CASE("natural order is lexicographic") {
    const RingPtr ring = make_ring(30, 35);
    const LatticeEnumerator en(ring->basis(), ring->codifferent());
    std::vector<IntCoords> seen;
    en.enumerate(
        symmetric_box(Rational(6)), std::nullopt,
        [&](const IntCoords& c) {
          seen.push_back(c);
          return true;
        },
        0, true);
    CHECK(seen.size() > 10);
    CHECK(std::is_sorted(seen.begin(), seen.end()));
  }

  TEST_CASE("stop and step budget") {
    const RingPtr ring = make_ring(10, 13);
    const LatticeEnumerator en(ring->basis(), ring->codifferent());
    int calls = 0;
    const EnumerationStats st = en.enumerate(symmetric_box(Rational(20)), std::nullopt, [&](const IntCoords&) {
      return ++calls < 3;
    });
    CHECK(st.status == EnumerationStatus::Stopped);
    CHECK(calls == 3);
    const EnumerationStats b =
        en.enumerate(symmetric_box(Rational(20)), std::nullopt, [](const IntCoords&) { return true; }, 1);
    CHECK(b.status == EnumerationStatus::BudgetExceeded);
  }

  TEST_CASE("empty box") {
    const RingPtr ring = make_ring(10, 13);
    EmbeddingBox box = symmetric_box(Rational(1, 10));
    box.lo[0] = Rational(1, 3);
    box.hi[0] = Rational(2, 3);
    box.lo[1] = Rational(1, 3);
    box.hi[1] = Rational(2, 3);
    CHECK(enumerated(*ring, box, std::nullopt).empty());
  }
}
