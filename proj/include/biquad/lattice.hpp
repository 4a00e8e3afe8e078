#pragma once

// Enumeration of lattice points whose four real embeddings lie in a box.
//
// The lattice is the Z-span of a basis g_1..g_4 with trace-dual basis
// h_1..h_4, so the k-th coordinate of x is Tr(h_k x) = sum_i sigma_i(h_k)
// sigma_i(x). Coordinate bounds for the outer loops are derived with exact
// rational interval arithmetic and outer rounding; the innermost coordinate
// range is solved from the four embedding constraints in floating point and
// widened by a safety margin, so no lattice point of the box is skipped.
// Points handed to the visitor are approximate members only; callers apply an
// exact test.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include "biquad/ring.hpp"

namespace biquad {

/// lo_i <= sigma_i(x) <= hi_i for i = 1..4 (stored 0-based).
struct EmbeddingBox {
  std::array<Rational, 4> lo, hi;
};

/// sum_k coeffs_k c_k = value on the lattice coordinates.
struct LinearEquation {
  IntCoords coeffs;
  Integer value;
};

enum class EnumerationStatus { Completed, Stopped, BudgetExceeded };

struct EnumerationStats {
  EnumerationStatus status = EnumerationStatus::Completed;
  std::uint64_t outer_steps = 0;
  std::uint64_t points = 0;
};

class LatticeEnumerator {
 public:
  using Visitor = std::function<bool(const IntCoords&)>;

  LatticeEnumerator(const std::array<FieldElement, 4>& basis,
                    const std::array<FieldElement, 4>& dual);

  /// Rigorous integer bounds [lo_k, hi_k] for every coordinate.
  std::array<std::pair<Integer, Integer>, 4> coordinate_bounds(const EmbeddingBox& box) const;

  /// Calls visit on every candidate in the box (and on the equation's
  /// hyperplane when given). The visitor returns false to stop early.
  /// natural_order iterates c_1 outermost ... c_4 innermost, ascending.
  EnumerationStats enumerate(const EmbeddingBox& box, const std::optional<LinearEquation>& eq,
                             const Visitor& visit, std::uint64_t step_limit = 0,
                             bool natural_order = false) const;

 private:
  std::array<FieldElement, 4> basis_;
  std::array<FieldElement, 4> dual_;
  double emb_[4][4];  // emb_[k][i] ~ sigma_{i+1}(g_k)
};

/// Embedding approximations of the integral basis, emb[k][i] ~ sigma_{i+1}(gamma_k).
std::array<std::array<double, 4>, 4> basis_embeddings(const Ring& ring);

}  // namespace biquad
