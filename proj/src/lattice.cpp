#include "biquad/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "biquad/error.hpp"

namespace biquad {

namespace {

constexpr std::int64_t kMaxCoordinate = std::int64_t{1} << 52;

struct Interval {
  Rational lo, hi;
};

Interval times(const Interval& a, const Rational& lo, const Rational& hi) {
  const Rational c[4] = {a.lo * lo, a.lo * hi, a.hi * lo, a.hi * hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

std::int64_t to_int64(const Integer& v) {
  if (v > kMaxCoordinate || v < -kMaxCoordinate) {
    throw Error(ErrorCode::OutOfRange, "lattice coordinate bound too large: " + v.get_str());
  }
  return v.get_si();
}

double safety_margin(double a, double b) {
  return 1e-6 + 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

LatticeEnumerator::LatticeEnumerator(const std::array<FieldElement, 4>& basis,
                                     const std::array<FieldElement, 4>& dual)
    : basis_(basis), dual_(dual) {
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i) emb_[k][i] = approx_embedding(basis_[k], i + 1);
}

std::array<std::pair<Integer, Integer>, 4> LatticeEnumerator::coordinate_bounds(
    const EmbeddingBox& box) const {
  const Rational width(1, Integer(1) << 48);
  std::array<std::pair<Integer, Integer>, 4> out;
  for (int k = 0; k < 4; ++k) {
    Rational lo = 0, hi = 0;
    for (int i = 0; i < 4; ++i) {
      const EmbeddingInterval e = refine_embedding(dual_[k], i + 1, width);
      const Interval prod = times({e.lo, e.hi}, box.lo[i], box.hi[i]);
      lo += prod.lo;
      hi += prod.hi;
    }
    out[k] = {ceil_of(lo), floor_of(hi)};
  }
  return out;
}

EnumerationStats LatticeEnumerator::enumerate(const EmbeddingBox& box,
                                              const std::optional<LinearEquation>& eq,
                                              const Visitor& visit, std::uint64_t step_limit,
                                              bool natural_order) const {
  EnumerationStats stats;
  const auto bounds = coordinate_bounds(box);
  std::int64_t lo[4], hi[4];
  for (int k = 0; k < 4; ++k) {
    lo[k] = to_int64(bounds[k].first);
    hi[k] = to_int64(bounds[k].second);
    if (lo[k] > hi[k]) return stats;
  }
  double box_lo[4], box_hi[4];
  for (int i = 0; i < 4; ++i) {
    box_lo[i] = box.lo[i].get_d();
    box_hi[i] = box.hi[i].get_d();
  }

  std::int64_t e[4] = {0, 0, 0, 0};
  std::int64_t target = 0;
  bool use_eq = false;
  if (eq) {
    for (int k = 0; k < 4; ++k) e[k] = to_int64(eq->coeffs[k]);
    target = to_int64(eq->value);
    use_eq = std::any_of(e, e + 4, [](std::int64_t v) { return v != 0; });
    if (!use_eq && target != 0) return stats;
  }

  // Coordinate roles: pivot (solved from the equation), inner (solved from the
  // embedding constraints) and the remaining outer loops.
  std::array<int, 4> order{0, 1, 2, 3};
  auto width = [&](int k) { return hi[k] - lo[k]; };
  if (!natural_order) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return width(a) < width(b); });
  }
  int pivot = -1;
  if (use_eq) {
    for (int idx = 3; idx >= 0; --idx) {
      if (e[order[idx]] != 0) {
        pivot = order[idx];
        break;
      }
    }
  }
  int inner = -1;
  for (int idx = 3; idx >= 0; --idx) {
    if (order[idx] != pivot) {
      inner = order[idx];
      break;
    }
  }
  std::array<int, 3> outer{};
  int n_outer = 0;
  for (int idx = 0; idx < 4; ++idx) {
    const int k = order[idx];
    if (k != pivot && k != inner) outer[n_outer++] = k;
  }

  // Direction of the inner coordinate in embedding space, with the pivot
  // substituted: x = base + (rem / e_p) g_p + c_inner (g_inner - e_inner / e_p g_p).
  double dir[4];
  for (int i = 0; i < 4; ++i) {
    dir[i] = emb_[inner][i];
    if (pivot >= 0) dir[i] -= static_cast<double>(e[inner]) / e[pivot] * emb_[pivot][i];
  }

  std::int64_t c[4] = {0, 0, 0, 0};
  IntCoords point;
  bool stop = false;

  auto run_inner = [&](const double* base, std::int64_t rem) {
    double shifted[4];
    for (int i = 0; i < 4; ++i) {
      shifted[i] = base[i];
      if (pivot >= 0) shifted[i] += static_cast<double>(rem) / e[pivot] * emb_[pivot][i];
    }
    double cmin = -std::numeric_limits<double>::infinity();
    double cmax = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      const double v = dir[i];
      const double a = box_lo[i] - shifted[i];
      const double b = box_hi[i] - shifted[i];
      if (std::fabs(v) < 1e-300) {
        const double m = safety_margin(a, b);
        if (a > m || b < -m) return;
        continue;
      }
      double t0 = a / v, t1 = b / v;
      if (v < 0) std::swap(t0, t1);
      cmin = std::max(cmin, t0);
      cmax = std::min(cmax, t1);
    }
    const double margin = safety_margin(cmin, cmax);
    std::int64_t from = lo[inner], to = hi[inner];
    if (std::isfinite(cmin)) from = std::max(from, static_cast<std::int64_t>(std::ceil(cmin - margin)));
    if (std::isfinite(cmax)) to = std::min(to, static_cast<std::int64_t>(std::floor(cmax + margin)));
    for (std::int64_t v = from; v <= to; ++v) {
      c[inner] = v;
      if (pivot >= 0) {
        const std::int64_t num = rem - e[inner] * v;
        if (num % e[pivot] != 0) continue;
        c[pivot] = num / e[pivot];
      }
      ++stats.points;
      for (int k = 0; k < 4; ++k) point[k] = static_cast<long>(c[k]);
      if (!visit(point)) {
        stop = true;
        stats.status = EnumerationStatus::Stopped;
        return;
      }
    }
  };

  // Recursive descent over the outer coordinates.
  std::function<void(int, const double*, std::int64_t)> descend =
      [&](int level, const double* base, std::int64_t rem) {
        if (stop) return;
        if (level == n_outer) {
          run_inner(base, rem);
          return;
        }
        const int k = outer[level];
        double next[4];
        for (std::int64_t v = lo[k]; v <= hi[k] && !stop; ++v) {
          if (step_limit != 0 && ++stats.outer_steps > step_limit) {
            stop = true;
            stats.status = EnumerationStatus::BudgetExceeded;
            return;
          }
          c[k] = v;
          for (int i = 0; i < 4; ++i) next[i] = base[i] + static_cast<double>(v) * emb_[k][i];
          descend(level + 1, next, rem - e[k] * v);
        }
      };
  const double zero[4] = {0, 0, 0, 0};
  descend(0, zero, target);
  if (step_limit == 0) stats.outer_steps = 0;
  return stats;
}

std::array<std::array<double, 4>, 4> basis_embeddings(const Ring& ring) {
  std::array<std::array<double, 4>, 4> out{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i) out[k][i] = approx_embedding(ring.basis()[k], i + 1);
  return out;
}

}  // namespace biquad
