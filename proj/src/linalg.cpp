#include "biquad/linalg.hpp"

#include <utility>

#include "biquad/error.hpp"

namespace biquad {

namespace {

// Scales each row by the lcm of its denominators.
IntMatrix clear_denominators(const RatMatrix& a, std::vector<Integer>& row_scale) {
  IntMatrix out(a.rows(), a.cols());
  row_scale.assign(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    row_scale[i] = l;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = a(i, j).get_num() * (l / a(i, j).get_den());
    }
  }
  return out;
}

// Fraction-free Gauss-Jordan on an augmented integer matrix whose first n
// columns are square. Returns the signed final pivot (the determinant of the
// leading block) and leaves det * A^-1 B in the trailing columns.
Integer bareiss_jordan(IntMatrix& m, std::size_t n) {
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m(pivot, k) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(k, j));
      sign = -sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j == k) continue;
        Integer v = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * prev;
}

}  // namespace

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::OutOfRange, "determinant of non-square matrix");
  if (a.rows() == 0) return 1;
  IntMatrix m = a;
  return bareiss_jordan(m, a.rows());
}

Rational determinant(const RatMatrix& a) {
  std::vector<Integer> scale;
  const IntMatrix m = clear_denominators(a, scale);
  Integer denom = 1;
  for (const auto& s : scale) denom *= s;
  return make_rational(determinant(m), denom);
}

RatMatrix solve(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw Error(ErrorCode::OutOfRange, "dimension mismatch");
  RatMatrix joined(n, n + b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) joined(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) joined(i, n + j) = b(i, j);
  }
  std::vector<Integer> scale;
  IntMatrix m = clear_denominators(joined, scale);
  const Integer det = bareiss_jordan(m, n);
  if (det == 0) throw Error(ErrorCode::OutOfRange, "singular matrix");
  // After elimination every diagonal entry equals the last pivot.
  const Integer pivot = m(n - 1, n - 1);
  RatMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = make_rational(m(i, n + j), pivot);
  return x;
}

RatMatrix inverse(const RatMatrix& a) { return solve(a, RatMatrix::identity(a.rows())); }

}  // namespace biquad
