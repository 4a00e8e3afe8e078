#pragma once

#include <random>
#include <utility>
#include <vector>

#include "biquad/ring.hpp"

namespace biquad::testing {

// One or more fields of each basis type.
inline const std::vector<std::pair<std::int64_t, std::int64_t>>& sample_fields() {
  static const std::vector<std::pair<std::int64_t, std::int64_t>> fields{
      {30, 35}, {10, 35}, {10, 13}, {143, 165}, {5, 13}, {21, 33}, {2, 3}, {6, 7}};
  return fields;
}

inline Rational random_rational(std::mt19937_64& rng, int num = 30, int den = 6) {
  std::uniform_int_distribution<int> n(-num, num), d(1, den);
  return make_rational(n(rng), d(rng));
}

inline FieldElement random_element(const FieldPtr& f, std::mt19937_64& rng) {
  return FieldElement(f, random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng));
}

inline IntCoords random_coords(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> c(-bound, bound);
  return {c(rng), c(rng), c(rng), c(rng)};
}

}  // namespace biquad::testing

#include <algorithm>
#include <cmath>
#include <set>

namespace biquad::testing {

inline bool canonical_sign(const IntCoords& c) {
  for (const Integer& x : c) {
    if (x != 0) return x > 0;
  }
  return false;
}

// All canonical beta with target - beta^2 totally nonnegative, by scanning the
// coordinate box implied by |sigma_i(beta)| <= sqrt(sigma_i(target)) in doubles.
inline std::set<IntCoords> naive_squares(const Ring& ring, const FieldElement& t) {
  double root[4];
  for (int i = 0; i < 4; ++i) root[i] = std::sqrt(std::max(0.0, approx_embedding(t, i + 1)));
  long bound[4];
  for (int k = 0; k < 4; ++k) {
    double s = 0;
    for (int i = 0; i < 4; ++i) s += std::fabs(approx_embedding(ring.codifferent()[k], i + 1)) * root[i];
    bound[k] = static_cast<long>(std::ceil(s)) + 1;
  }
  std::set<IntCoords> out;
  for (long a = -bound[0]; a <= bound[0]; ++a)
    for (long b = -bound[1]; b <= bound[1]; ++b)
      for (long c = -bound[2]; c <= bound[2]; ++c)
        for (long d = -bound[3]; d <= bound[3]; ++d) {
          const IntCoords x{a, b, c, d};
          if (!canonical_sign(x)) continue;
          const FieldElement beta = ring.to_field(x);
          if (dominates(t, beta * beta)) out.insert(x);
        }
  return out;
}

namespace detail {
inline bool naive_split(const std::vector<FieldElement>& squares, std::size_t from, const FieldElement& rest, int k) {
  if (rest.is_zero()) return true;
  if (k == 0) return false;
  for (std::size_t i = from; i < squares.size(); ++i) {
    if (dominates(rest, squares[i]) && naive_split(squares, i, rest - squares[i], k - 1)) return true;
  }
  return false;
}
}  // namespace detail

// Fewest squares summing to t (up to max_k), by plain depth-first search over
// the naive square list. -1 when more than max_k are needed.
inline int naive_rank(const Ring& ring, const FieldElement& t, int max_k) {
  std::vector<FieldElement> squares;
  for (const IntCoords& c : naive_squares(ring, t)) {
    const FieldElement b = ring.to_field(c);
    squares.push_back(b * b);
  }
  for (int k = 0; k <= max_k; ++k)
    if (detail::naive_split(squares, 0, t, k)) return k;
  return -1;
}

// Fewest squares of rational integers summing to n.
inline int classical_rank(int n) {
  std::vector<int> best(n + 1, 1 << 20);
  best[0] = 0;
  for (int k = 1; k <= n; ++k)
    for (int s = 1; s * s <= k; ++s) best[k] = std::min(best[k], best[k - s * s] + 1);
  return best[n];
}

}  // namespace biquad::testing
