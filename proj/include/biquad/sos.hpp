#pragma once

// Sums of squares of algebraic integers: enumeration of the squares below a
// target, exhaustive minimal-rank search with certificates, and the witness
// elements whose ranks bound the Pythagoras number from below.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biquad/ring.hpp"

namespace biquad {

struct SquareCandidate {
  IntegralElement beta;  // first nonzero coordinate positive
  FieldElement square;
};

/// Every canonical-sign beta != 0 with target - beta^2 zero or totally
/// positive, sorted by Tr(beta^2) descending and then by coordinates.
/// Throws NotTotallyNonnegative.
std::vector<SquareCandidate> enumerate_dominated_squares(const Ring& ring,
                                                         const IntegralElement& target);

struct SearchBudget {
  int max_depth = 7;
  std::uint64_t node_limit = 200'000'000;
  double time_limit_seconds = 0;  // 0: unlimited
  unsigned threads = 1;

  /// Defaults overridden by BIQUAD_MAX_NODES and BIQUAD_TIME_LIMIT.
  static SearchBudget from_environment();
};

enum class CertificateKind { Exact, LowerBound, Refuted, Inconclusive };

std::string to_string(CertificateKind kind);

struct RankCertificate {
  IntegralElement target;
  CertificateKind kind = CertificateKind::Inconclusive;
  // Exact / Refuted: the rank. LowerBound / Inconclusive: proven lower bound.
  int rank_or_bound = 0;
  std::vector<IntegralElement> witness;
  std::uint64_t nodes_explored = 0;
  std::size_t candidate_count = 0;
  SearchBudget budget;
  double wall_time = 0;
};

/// Minimal number of squares, by iterative deepening up to budget.max_depth.
RankCertificate sos_rank(const Ring& ring, const IntegralElement& target, const SearchBudget& budget);

/// LowerBound m when no representation with fewer than m squares exists;
/// Refuted with a witness otherwise.
RankCertificate certify_min_rank(const Ring& ring, const IntegralElement& target, int m,
                                 SearchBudget budget);

/// Sum of the squares of the witness, for replaying a certificate.
FieldElement sum_of_squares(const Ring& ring, const std::vector<IntegralElement>& witness);

enum class WitnessKind { B1a, B1b, B23, B23Coprime, B4, Main7 };

std::string to_string(WitnessKind kind);
WitnessKind parse_witness_kind(const std::string& name);

/// The squares (plus the rational part) from which a witness is built.
struct WitnessConstruction {
  Integer rational_part;
  std::vector<FieldElement> roots;  // element = rational_part + sum roots_i^2
};

WitnessConstruction witness_construction(WitnessKind kind, const Ring& ring);

/// Builds the witness from its squares, checks it against the expanded
/// closed form, total positivity and integrality. Throws WrongBasisType when
/// the field's basis type does not match the kind.
IntegralElement witness_element(WitnessKind kind, const Ring& ring);

/// A decomposition of the Main7 element into seven squares.
std::vector<FieldElement> main7_decomposition(const Ring& ring);

struct ScanResult {
  int best_rank = 0;
  std::optional<IntegralElement> best_element;
  std::size_t examined = 0;
  std::size_t inconclusive = 0;
};

/// Largest exact rank over 2, the applicable witnesses and `samples` random
/// sums of small squares. An empirical lower bound for the Pythagoras number.
ScanResult pythagoras_scan(const Ring& ring, int samples, const SearchBudget& budget,
                           std::uint64_t seed);

}  // namespace biquad
