#include "biquad/sos.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <unordered_map>

#include "biquad/error.hpp"
#include "biquad/lattice.hpp"

namespace biquad {

namespace {

using Clock = std::chrono::steady_clock;
using Vec = std::array<std::int64_t, 4>;

constexpr std::int64_t kMaxSearchCoordinate = std::int64_t{1} << 40;

Vec to_vec(const IntCoords& c) {
  Vec v{};
  for (int k = 0; k < 4; ++k) {
    if (c[k] > kMaxSearchCoordinate || c[k] < -kMaxSearchCoordinate) {
      throw Error(ErrorCode::OutOfRange, "coordinates too large for the square search");
    }
    v[k] = c[k].get_si();
  }
  return v;
}

IntCoords to_coords(const Vec& v) {
  IntCoords c;
  for (int k = 0; k < 4; ++k) c[k] = static_cast<long>(v[k]);
  return c;
}

bool canonical_sign(const IntCoords& c) {
  for (const auto& v : c) {
    if (v != 0) return v > 0;
  }
  return false;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct MemoKey {
  Vec res;
  std::uint32_t start;
  bool operator==(const MemoKey& o) const { return start == o.start && res == o.res; }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = k.start;
    for (auto v : k.res) h = mix(h, static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

struct VecHash {
  std::size_t operator()(const Vec& v) const {
    std::uint64_t h = 0;
    for (auto x : v) h = mix(h, static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

// Largest k for which (res, start) is known to need more than k squares.
using Memo = std::unordered_map<MemoKey, int, MemoHash>;

struct BudgetHit {};

class SquareSearch {
 public:
  SquareSearch(const Ring& ring, const std::vector<SquareCandidate>& candidates,
               const SearchBudget& budget)
      : ring_(ring), budget_(budget), emb_(basis_embeddings(ring)), start_time_(Clock::now()) {
    for (int k = 0; k < 4; ++k) basis_trace_[k] = ring.basis_traces()[k].get_si();
    cands_.reserve(candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      Entry e;
      e.sq = to_vec(ring.to_integral(candidates[j].square).coords);
      e.trace = trace_of(e.sq);
      embed(e.sq, e.emb);
      cands_.push_back(e);
      index_.emplace(e.sq, j);
    }
  }

  std::uint64_t nodes() const { return nodes_.load(); }

  // Indices of at most k candidate squares summing to target, or nullopt.
  std::optional<std::vector<std::size_t>> represent(const Vec& target, int k,
                                                    std::vector<Memo>& memos) {
    if (is_zero(target)) return std::vector<std::size_t>{};
    if (k <= 0) return std::nullopt;
    count_node();
    if (k == 1) {
      auto it = index_.find(target);
      if (it == index_.end()) return std::nullopt;
      return std::vector<std::size_t>{it->second};
    }
    const std::int64_t t = trace_of(target);
    std::vector<std::size_t> roots;
    for (std::size_t j = 0; j < cands_.size(); ++j) {
      if (cands_[j].trace * k < t) break;
      if (cands_[j].trace <= t) roots.push_back(j);
    }
    memos.resize(cands_.size());

    const unsigned threads = std::max(1u, budget_.threads);
    std::vector<std::optional<std::vector<std::size_t>>> found(roots.size());
    std::atomic<std::size_t> best{roots.size()};
    std::atomic<std::size_t> next{0};
    std::atomic<bool> budget_hit{false};
    std::vector<std::uint64_t> branch_nodes(roots.size(), 0);

    auto worker = [&] {
      std::vector<std::size_t> path;
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= roots.size() || idx > best.load() || budget_hit.load()) return;
        const std::size_t j = roots[idx];
        Vec child;
        for (int c = 0; c < 4; ++c) child[c] = target[c] - cands_[j].sq[c];
        path.assign(1, j);
        try {
          std::uint64_t local = 0;
          const bool ok = dfs(child, k - 1, j, memos[j], path, local);
          branch_nodes[idx] = local;
          if (ok) {
            found[idx] = path;
            std::size_t cur = best.load();
            while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
            }
          }
        } catch (const BudgetHit&) {
          budget_hit = true;
          return;
        }
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    // Only branches up to the first success count, so the total does not
    // depend on scheduling.
    const std::size_t last = best.load();
    std::uint64_t counted = 0;
    for (std::size_t idx = 0; idx < roots.size() && idx <= last; ++idx) counted += branch_nodes[idx];
    reported_nodes_ += counted + 1;
    if (last < roots.size()) return found[last];
    if (budget_hit.load()) throw BudgetHit{};
    return std::nullopt;
  }

  std::uint64_t reported_nodes() const { return reported_nodes_; }

 private:
  struct Entry {
    Vec sq;
    std::int64_t trace;
    double emb[4];
  };

  static bool is_zero(const Vec& v) { return v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0; }

  std::int64_t trace_of(const Vec& v) const {
    std::int64_t t = 0;
    for (int k = 0; k < 4; ++k) t += v[k] * basis_trace_[k];
    return t;
  }

  void embed(const Vec& v, double* out) const {
    for (int i = 0; i < 4; ++i) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += static_cast<double>(v[k]) * emb_[k][i];
      out[i] = s;
    }
  }

  void count_node() {
    const std::uint64_t n = ++nodes_;
    if (budget_.node_limit != 0 && n > budget_.node_limit) throw BudgetHit{};
    if (budget_.time_limit_seconds > 0 && (n & 0xfff) == 0) {
      const std::chrono::duration<double> elapsed = Clock::now() - start_time_;
      if (elapsed.count() > budget_.time_limit_seconds) throw BudgetHit{};
    }
  }

  // res - cand is zero or totally positive. Floating point decides the clear
  // cases; anything within rounding distance of zero is settled exactly.
  bool dominates_candidate(const Vec& res, const double* res_emb, const Entry& c) const {
    bool certain = true;
    for (int i = 0; i < 4; ++i) {
      const double d = res_emb[i] - c.emb[i];
      const double tol = 1e-9 * (std::fabs(res_emb[i]) + std::fabs(c.emb[i]) + 1.0);
      if (d < -tol) return false;
      if (d <= tol) certain = false;
    }
    if (certain) return true;
    Vec diff;
    for (int k = 0; k < 4; ++k) diff[k] = res[k] - c.sq[k];
    if (is_zero(diff)) return true;
    return is_totally_positive(ring_.to_field(to_coords(diff)));
  }

  bool dfs(const Vec& res, int k, std::size_t start, Memo& memo, std::vector<std::size_t>& path,
           std::uint64_t& local) {
    if (is_zero(res)) return true;
    if (k == 0) return false;
    count_node();
    ++local;
    if (k == 1) {
      auto it = index_.find(res);
      if (it == index_.end() || it->second < start) return false;
      path.push_back(it->second);
      return true;
    }
    const MemoKey key{res, static_cast<std::uint32_t>(start)};
    auto hit = memo.find(key);
    if (hit != memo.end() && hit->second >= k) return false;

    const std::int64_t t = trace_of(res);
    double res_emb[4];
    embed(res, res_emb);
    for (std::size_t j = start; j < cands_.size(); ++j) {
      const Entry& c = cands_[j];
      if (c.trace * k < t) break;
      if (c.trace > t) continue;
      if (!dominates_candidate(res, res_emb, c)) continue;
      Vec child;
      for (int q = 0; q < 4; ++q) child[q] = res[q] - c.sq[q];
      path.push_back(j);
      if (dfs(child, k - 1, j, memo, path, local)) return true;
      path.pop_back();
    }
    int& slot = memo[key];
    slot = std::max(slot, k);
    return false;
  }

  const Ring& ring_;
  SearchBudget budget_;
  std::array<std::array<double, 4>, 4> emb_;
  std::int64_t basis_trace_[4];
  std::vector<Entry> cands_;
  std::unordered_map<Vec, std::size_t, VecHash> index_;
  std::atomic<std::uint64_t> nodes_{0};
  std::uint64_t reported_nodes_ = 0;
  Clock::time_point start_time_;
};

void require_nonnegative(const Ring& ring, const IntegralElement& target) {
  if (!target.field->same_field(ring.field())) {
    throw Error(ErrorCode::FieldMismatch, "target from another field");
  }
  if (target.is_zero()) return;
  if (!is_totally_positive(ring.to_field(target))) {
    throw Error(ErrorCode::NotTotallyNonnegative, format_element(ring.to_field(target)));
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FieldElement sq(const FieldElement& a) { return a * a; }

}  // namespace

std::vector<SquareCandidate> enumerate_dominated_squares(const Ring& ring,
                                                         const IntegralElement& target) {
  require_nonnegative(ring, target);
  std::vector<SquareCandidate> out;
  if (target.is_zero()) return out;
  const FieldElement t = ring.to_field(target);
  EmbeddingBox box;
  const Rational width(1, 1 << 20);
  for (int i = 0; i < 4; ++i) {
    const EmbeddingInterval e = refine_embedding(t, i + 1, width);
    Rational lo, hi;
    sqrt_bounds(e.hi, 20, lo, hi);
    box.lo[i] = -hi;
    box.hi[i] = hi;
  }
  const LatticeEnumerator enumerator(ring.basis(), ring.codifferent());
  enumerator.enumerate(box, std::nullopt, [&](const IntCoords& c) {
    if (!canonical_sign(c)) return true;
    const FieldElement beta = ring.to_field(c);
    FieldElement square = beta * beta;
    if (dominates(t, square)) out.push_back({ring.make(c), std::move(square)});
    return true;
  });
  std::sort(out.begin(), out.end(), [](const SquareCandidate& a, const SquareCandidate& b) {
    const Rational ta = trace(a.square), tb = trace(b.square);
    if (ta != tb) return ta > tb;
    return a.beta.coords < b.beta.coords;
  });
  return out;
}

SearchBudget SearchBudget::from_environment() {
  SearchBudget b;
  if (const char* v = std::getenv("BIQUAD_MAX_NODES")) {
    try {
      b.node_limit = std::stoull(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("BIQUAD_MAX_NODES=") + v);
    }
  }
  if (const char* v = std::getenv("BIQUAD_TIME_LIMIT")) {
    try {
      b.time_limit_seconds = std::stod(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("BIQUAD_TIME_LIMIT=") + v);
    }
  }
  return b;
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Exact: return "Exact";
    case CertificateKind::LowerBound: return "LowerBound";
    case CertificateKind::Refuted: return "Refuted";
    case CertificateKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

RankCertificate sos_rank(const Ring& ring, const IntegralElement& target, const SearchBudget& budget) {
  const auto t0 = Clock::now();
  RankCertificate cert;
  cert.target = target;
  cert.budget = budget;
  const auto candidates = enumerate_dominated_squares(ring, target);
  cert.candidate_count = candidates.size();
  SquareSearch search(ring, candidates, budget);
  const Vec v = to_vec(target.coords);
  std::vector<Memo> memos;
  try {
    for (int k = 0; k <= budget.max_depth; ++k) {
      auto rep = search.represent(v, k, memos);
      if (rep) {
        cert.kind = CertificateKind::Exact;
        cert.rank_or_bound = static_cast<int>(rep->size());
        for (std::size_t j : *rep) cert.witness.push_back(candidates[j].beta);
        break;
      }
      cert.kind = CertificateKind::LowerBound;
      cert.rank_or_bound = k + 1;
    }
  } catch (const BudgetHit&) {
    cert.kind = CertificateKind::Inconclusive;
  }
  cert.nodes_explored = search.reported_nodes();
  cert.wall_time = seconds_since(t0);
  if (cert.kind == CertificateKind::Exact && !(sum_of_squares(ring, cert.witness) == ring.to_field(target))) {
    throw Error(ErrorCode::SelfCheckFailed, "witness does not sum to the target");
  }
  return cert;
}

RankCertificate certify_min_rank(const Ring& ring, const IntegralElement& target, int m,
                                 SearchBudget budget) {
  if (m < 1) throw Error(ErrorCode::OutOfRange, "m must be positive");
  budget.max_depth = m - 1;
  RankCertificate cert = sos_rank(ring, target, budget);
  if (cert.kind == CertificateKind::Exact) cert.kind = CertificateKind::Refuted;
  return cert;
}

FieldElement sum_of_squares(const Ring& ring, const std::vector<IntegralElement>& witness) {
  FieldElement s(ring.field_ptr());
  for (const auto& w : witness) s += sq(ring.to_field(w));
  return s;
}

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::B1a: return "B1a";
    case WitnessKind::B1b: return "B1b";
    case WitnessKind::B23: return "B23";
    case WitnessKind::B23Coprime: return "B23_coprime";
    case WitnessKind::B4: return "B4";
    case WitnessKind::Main7: return "Main7";
  }
  return "?";
}

WitnessKind parse_witness_kind(const std::string& name) {
  for (auto k : {WitnessKind::B1a, WitnessKind::B1b, WitnessKind::B23, WitnessKind::B23Coprime,
                 WitnessKind::B4, WitnessKind::Main7}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown witness kind " + name);
}

WitnessConstruction witness_construction(WitnessKind kind, const Ring& ring) {
  const FieldSpec& f = ring.field();
  const FieldPtr& fp = ring.field_ptr();
  const BasisType type = f.basis_type;
  auto require = [&](std::initializer_list<BasisType> allowed) {
    if (std::find(allowed.begin(), allowed.end(), type) == allowed.end()) {
      throw Error(ErrorCode::WrongBasisType,
                  to_string(kind) + " does not apply to basis type " + to_string(type));
    }
  };
  const FieldElement one = FieldElement::from_rational(fp, 1);
  const FieldElement sp = FieldElement::sqrt_of(fp, f.roles[0]);
  const FieldElement sq_ = FieldElement::sqrt_of(fp, f.roles[1]);
  const FieldElement sr = FieldElement::sqrt_of(fp, f.roles[2]);
  const Rational half(1, 2), quarter(1, 4);
  WitnessConstruction w{7, {}};
  switch (kind) {
    case WitnessKind::B1a:
      require({BasisType::T1});
      w.roots = {one + sp, one + sq_};
      break;
    case WitnessKind::B1b:
      require({BasisType::T1});
      w.roots = {one + (sp + sr) * half, (sp - sr) * half};
      break;
    case WitnessKind::B23Coprime:
      require({BasisType::T2, BasisType::T3});
      w.roots = {one + (sp + sr) * half, (sp - sr) * half};
      break;
    case WitnessKind::B23:
      require({BasisType::T2, BasisType::T3});
      w.roots = {one + (sp + sr) * half, (one - sq_) * half};
      break;
    case WitnessKind::B4:
      require({BasisType::T4a, BasisType::T4b});
      // The last root is the field's own fourth basis generator.
      w.roots = {(one + sp) * half, ring.basis()[3]};
      break;
    case WitnessKind::Main7:
      require({BasisType::T3});
      w.roots = {(one - sq_) * half, one + (sp + sr) * half, one * Rational(2) + (sr - sp) * half};
      break;
  }
  return w;
}

IntegralElement witness_element(WitnessKind kind, const Ring& ring) {
  const WitnessConstruction w = witness_construction(kind, ring);
  const FieldSpec& f = ring.field();
  const FieldPtr& fp = ring.field_ptr();
  FieldElement value = FieldElement::from_rational(fp, Rational(w.rational_part));
  for (const auto& r : w.roots) value += sq(r);

  // Expanded closed forms on the role radicands.
  const Rational P(f.role_radicand(0)), Q(f.role_radicand(1)), R(f.role_radicand(2));
  const Rational p0(f.cofactor(f.roles[0])), q0(f.cofactor(f.roles[1])), r0(f.cofactor(f.roles[2]));
  auto make = [&](const Rational& x, const Rational& y, const Rational& z, const Rational& wv) {
    FieldElement::Coords c{x, 0, 0, 0};
    c[1 + f.roles[0]] = y;
    c[1 + f.roles[1]] = z;
    c[1 + f.roles[2]] = wv;
    for (auto& v : c) v.canonicalize();
    return FieldElement(fp, c);
  };
  std::optional<FieldElement> expected;
  switch (kind) {
    case WitnessKind::B1a:
      expected = make(9 + P + Q, 2, 2, 0);
      break;
    case WitnessKind::B1b:
    case WitnessKind::B23Coprime:
      expected = make(8 + P / 2 + R / 2, 1, 0, 1);
      break;
    case WitnessKind::B23:
      expected = make(Rational(33, 4) + P / 4 + Q / 4 + R / 4, 1, (q0 - 1) / 2, 1);
      break;
    case WitnessKind::B4:
      if (f.basis_type == BasisType::T4a) {
        expected = make(Rational(117, 16) + 5 * P / 16 + Q / 16 + R / 16, (p0 + 5) / 8,
                        (q0 + 1) / 8, (r0 + 1) / 8);
      }
      break;
    case WitnessKind::Main7:
      expected = make(Rational(49, 4) + P / 2 + Q / 4 + R / 2, -1, Rational(-1, 2), 3);
      break;
  }
  if (expected && !(*expected == value)) {
    throw Error(ErrorCode::FormulaMismatch, to_string(kind) + ": " + format_element(value) +
                                                " vs " + format_element(*expected));
  }
  if (!is_totally_positive(value)) {
    throw Error(ErrorCode::SelfCheckFailed, to_string(kind) + " is not totally positive");
  }
  for (const auto& r : w.roots) {
    if (!is_algebraic_integer(r)) throw Error(ErrorCode::SelfCheckFailed, "non-integral root");
  }
  return ring.to_integral(value);
}

std::vector<FieldElement> main7_decomposition(const Ring& ring) {
  const WitnessConstruction w = witness_construction(WitnessKind::Main7, ring);
  const FieldPtr& fp = ring.field_ptr();
  std::vector<FieldElement> out{FieldElement::from_rational(fp, 2), FieldElement::from_rational(fp, 1),
                                FieldElement::from_rational(fp, 1), FieldElement::from_rational(fp, 1)};
  out.insert(out.end(), w.roots.begin(), w.roots.end());
  return out;
}

ScanResult pythagoras_scan(const Ring& ring, int samples, const SearchBudget& budget,
                           std::uint64_t seed) {
  std::vector<IntegralElement> pool{ring.make({2, 0, 0, 0})};
  for (auto k : {WitnessKind::B1a, WitnessKind::B1b, WitnessKind::B23, WitnessKind::B23Coprime,
                 WitnessKind::B4, WitnessKind::Main7}) {
    try {
      pool.push_back(witness_element(k, ring));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WrongBasisType) throw;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 7), coord(-1, 1);
  for (int s = 0; s < samples; ++s) {
    FieldElement sum(ring.field_ptr());
    const int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
      IntCoords c{coord(rng), coord(rng), coord(rng), coord(rng)};
      sum += sq(ring.to_field(c));
    }
    if (!sum.is_zero()) pool.push_back(ring.to_integral(sum));
  }
  ScanResult out;
  for (const auto& a : pool) {
    const RankCertificate cert = sos_rank(ring, a, budget);
    ++out.examined;
    if (cert.kind != CertificateKind::Exact) {
      ++out.inconclusive;
      continue;
    }
    if (cert.rank_or_bound > out.best_rank) {
      out.best_rank = cert.rank_or_bound;
      out.best_element = a;
    }
  }
  return out;
}

}  // namespace biquad
