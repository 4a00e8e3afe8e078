#include "biquad/family.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "biquad/error.hpp"

namespace biquad {

namespace {

struct Range {
  ElementName name;
  int from, to;
};

// t-ranges of the listed elements; names without a range carry no t.
std::vector<Range> ranges(const FamilyParam& fp) {
  const int n = fp.n;
  switch (fp.family) {
    case Family::F1:
      return {{ElementName::Alpha, 3, 2 * n - 2},
              {ElementName::Beta, 3, 2 * n - 2},
              {ElementName::Gamma, 4, 2 * n - 1},
              {ElementName::Delta, 4, 2 * n - 1},
              {ElementName::Omega, 2, 2 * n - 1}};
    case Family::F2:
    case Family::F3:
      return {{ElementName::Alpha, 0, 2 * n - 2}, {ElementName::Beta, 1, 2 * n - 1}};
  }
  return {};
}

std::vector<ElementName> singletons(Family family) {
  switch (family) {
    case Family::F1: return {ElementName::One, ElementName::HalfMix, ElementName::Mu};
    case Family::F2: return {ElementName::One};
    case Family::F3: return {ElementName::One, ElementName::HalfMix};
  }
  return {};
}

Integer sq(const Integer& x) { return x * x; }

FieldElement constant(const FamilyParam& fp, const Rational& v) {
  return FieldElement::from_rational(fp.ring->field_ptr(), v);
}

FieldElement radical(const FamilyParam& fp, int k) {
  return FieldElement::sqrt_of(fp.ring->field_ptr(), k);
}

// Direct value of a label at parameter t (no range check).
FieldElement value_at(const FamilyParam& fp, ElementName name, int t) {
  const FamilyUnits u = family_units(fp);
  const Rational half(1, 2);
  const FieldElement one = constant(fp, 1);
  const FieldElement ep_inv = conjugate(u.eps_p, 2);
  const FieldElement eq_inv = conjugate(u.eps_q, 3);
  const FieldElement er_inv = conjugate(u.eps_r, 2);
  const FieldElement mix = (ep_inv + u.eps_r) * half;
  const Rational tr(t);
  switch (fp.family) {
    case Family::F1: {
      const FieldElement mu =
          constant(fp, Rational(2 * fp.n + 3, 2)) + (radical(fp, 0) + radical(fp, 1) + radical(fp, 2)) * half;
      const FieldElement step = (mu - one) * tr;
      const FieldElement pr = (one + u.eps_p * u.eps_r) * half;
      switch (name) {
        case ElementName::One: return one;
        case ElementName::HalfMix: return mix;
        case ElementName::Mu: return mu;
        case ElementName::Alpha: return one + u.eps_p + step;
        case ElementName::Beta: return pr + u.eps_p + step;
        case ElementName::Gamma: return one + eq_inv + step;
        case ElementName::Delta: return pr + eq_inv + step;
        case ElementName::Omega: return (er_inv + u.eps_p) * half + (mu - constant(fp, 2)) * tr;
      }
      break;
    }
    case Family::F2:
      switch (name) {
        case ElementName::One: return one;
        case ElementName::Alpha: return mix + (u.eps_q - ep_inv) * tr;
        case ElementName::Beta: return ep_inv - u.eps_q + (u.eps_p * u.eps_q - one) * tr;
        default: break;
      }
      break;
    case Family::F3:
      switch (name) {
        case ElementName::One: return one;
        case ElementName::HalfMix: return mix;
        case ElementName::Alpha: return (u.eps_p + u.eps_r) * half + (u.eps_p - eq_inv) * tr;
        case ElementName::Beta: return eq_inv - u.eps_p + (u.eps_p * u.eps_q - one) * tr;
        default: break;
      }
      break;
  }
  throw Error(ErrorCode::OutOfRange, "label not in family " + to_string(fp.family));
}

// Reference terms of N(beta_t) for F1, in reference order, as coefficients.
std::array<Integer, 5> beta_norm_terms(int n) {
  const Integer N(n);
  return {Integer(1), -(4 * N + 2), -(4 * N * N + 12 * N + 3), 16 * N * N * N + 40 * N * N + 24 * N + 4,
          16 * N * N * N + 48 * N * N + 44 * N + 13};
}

Integer beta_norm_f1(int n, int t) {
  // Direct norms fit the reference terms with exponents 4, 3, 2, 1, 0.
  const auto c = beta_norm_terms(n);
  const Integer T(t);
  return (((c[0] * T + c[1]) * T + c[2]) * T + c[3]) * T + c[4];
}

Integer alpha_norm(const FamilyParam& fp, int t) {
  const Integer n(fp.n), T(t);
  switch (fp.family) {
    case Family::F1: return sq((4 * n + 2) * (T + 1) - T * T);
    case Family::F2: return sq(T * T - 4 * n * n + 1);
    case Family::F3: return sq(T * T + T - 4 * n * n - 2 * n + 1);
  }
  return 0;
}

EmbeddingBox positive_box(const FieldElement& upper_of, const Rational& scale, bool reciprocal) {
  EmbeddingBox box;
  const Rational width(1, Integer(1) << 40);
  for (int i = 0; i < 4; ++i) {
    const EmbeddingInterval e = refine_embedding(upper_of, i + 1, width);
    box.lo[i] = 0;
    if (reciprocal) {
      if (e.lo <= 0) throw Error(ErrorCode::NotTotallyNonnegative, "element must be totally positive");
      box.hi[i] = scale / e.lo;
    } else {
      box.hi[i] = e.hi * scale;
    }
  }
  return box;
}

void require_totally_positive(const FieldElement& a) {
  if (!is_totally_positive(a)) {
    throw Error(ErrorCode::NotTotallyNonnegative, format_element(a) + " is not totally positive");
  }
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::F1: return "f1";
    case Family::F2: return "f2";
    case Family::F3: return "f3";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "f1" || name == "F1") return Family::F1;
  if (name == "f2" || name == "F2") return Family::F2;
  if (name == "f3" || name == "F3") return Family::F3;
  throw Error(ErrorCode::ParseError, "unknown family " + name);
}

std::optional<std::string> admissibility_failure(Family family, int n) {
  const int min_n = family == Family::F1 ? 6 : (family == Family::F2 ? 9 : 2);
  if (n < min_n) return "n must be at least " + std::to_string(min_n);
  if (n > 100000) return "n too large";
  const std::int64_t N = n;
  const std::int64_t p = (2 * N - 1) * (2 * N + 1);
  std::int64_t q = 0, r = 0;
  switch (family) {
    case Family::F1:
      q = (2 * N - 1) * (2 * N + 3);
      r = (2 * N + 1) * (2 * N + 3);
      break;
    case Family::F2:
      q = (4 * N - 3) * (4 * N + 1);
      r = p * q;
      break;
    case Family::F3:
      q = (4 * N - 1) * (4 * N + 3);
      r = p * q;
      break;
  }
  if (!is_square_free(p)) return "p=" + std::to_string(p) + " is not square-free";
  if (!is_square_free(q)) return "q=" + std::to_string(q) + " is not square-free";
  if (family == Family::F1) {
    if (!is_square_free(r)) return "r=" + std::to_string(r) + " is not square-free";
  } else if (gcd64(p, q) != 1) {
    return "gcd(p,q)=" + std::to_string(gcd64(p, q)) + " for p=" + std::to_string(p) +
           ", q=" + std::to_string(q);
  }
  return std::nullopt;
}

FamilyParam make_family(Family family, int n) {
  if (auto why = admissibility_failure(family, n)) {
    throw Error(ErrorCode::InadmissibleParameter, to_string(family) + " n=" + std::to_string(n) + ": " + *why);
  }
  const std::int64_t N = n;
  FamilyParam fp;
  fp.family = family;
  fp.n = n;
  fp.p = (2 * N - 1) * (2 * N + 1);
  switch (family) {
    case Family::F1: fp.q = (2 * N - 1) * (2 * N + 3); break;
    case Family::F2: fp.q = (4 * N - 3) * (4 * N + 1); break;
    case Family::F3: fp.q = (4 * N - 1) * (4 * N + 3); break;
  }
  fp.ring = make_ring(fp.p, fp.q);
  fp.r = fp.ring->field().r;
  const auto& f = fp.ring->field();
  if (f.basis_type != BasisType::T3 || f.roles != std::array<int, 3>{0, 1, 2}) {
    throw Error(ErrorCode::SelfCheckFailed, "family field is expected to be type T3 in natural roles");
  }
  return fp;
}

FamilyUnits family_units(const FamilyParam& fp) {
  const Integer n(fp.n);
  const auto c = [&](const Integer& v) { return constant(fp, Rational(v)); };
  const Rational half(1, 2);
  const FieldElement ep = c(2 * n) + radical(fp, 0);
  switch (fp.family) {
    case Family::F1:
      return {ep, (c(2 * n + 1) + radical(fp, 1)) * half, c(2 * n + 2) + radical(fp, 2)};
    case Family::F2:
      return {ep, (c(4 * n - 1) + radical(fp, 1)) * half, c(8 * n * n - 2 * n - 2) + radical(fp, 2)};
    case Family::F3:
      return {ep, (c(4 * n + 1) + radical(fp, 1)) * half, c(8 * n * n + 2 * n - 2) + radical(fp, 2)};
  }
  throw Error(ErrorCode::OutOfRange, "unknown family");
}

std::string FamilyElementLabel::str() const {
  std::string s;
  switch (name) {
    case ElementName::One: s = "1"; break;
    case ElementName::HalfMix: s = "half"; break;
    case ElementName::Mu: s = "mu"; break;
    case ElementName::Alpha: s = "alpha"; break;
    case ElementName::Beta: s = "beta"; break;
    case ElementName::Gamma: s = "gamma"; break;
    case ElementName::Delta: s = "delta"; break;
    case ElementName::Omega: s = "omega"; break;
  }
  if (t) s += "_" + std::to_string(*t);
  return s;
}

FieldElement family_element_value(const FamilyParam& fp, const FamilyElementLabel& label) {
  if (label.t) {
    for (const auto& rg : ranges(fp)) {
      if (rg.name == label.name) {
        if (*label.t < rg.from || *label.t > rg.to) {
          throw Error(ErrorCode::OutOfRange, label.str() + " outside its range");
        }
        return value_at(fp, label.name, *label.t);
      }
    }
    throw Error(ErrorCode::OutOfRange, label.str() + " is not indexed in this family");
  }
  const auto names = singletons(fp.family);
  if (std::find(names.begin(), names.end(), label.name) == names.end()) {
    throw Error(ErrorCode::OutOfRange, label.str() + " is not in family " + to_string(fp.family));
  }
  return value_at(fp, label.name, 0);
}

namespace {

FamilyElement checked(const FamilyParam& fp, const FamilyElementLabel& label) {
  const FieldElement v = family_element_value(fp, label);
  require_totally_positive(v);
  return {label, fp.ring->to_integral(v)};
}

}  // namespace

std::vector<FamilyElement> family_elements(const FamilyParam& fp) {
  std::vector<FamilyElement> out;
  for (auto name : singletons(fp.family)) out.push_back(checked(fp, {name, std::nullopt}));
  for (const auto& rg : ranges(fp)) {
    for (int t = rg.from; t <= rg.to; ++t) out.push_back(checked(fp, {rg.name, t}));
  }
  return out;
}

std::vector<FamilyElement> reduced_elements(const FamilyParam& fp) {
  std::vector<FamilyElement> out;
  const int n = fp.n;
  switch (fp.family) {
    case Family::F1:
      for (auto name : {ElementName::One, ElementName::HalfMix, ElementName::Mu}) {
        out.push_back(checked(fp, {name, std::nullopt}));
      }
      for (int t = 3; t <= 2 * n - 2; ++t) out.push_back(checked(fp, {ElementName::Alpha, t}));
      for (int t = 3; t <= n; ++t) out.push_back(checked(fp, {ElementName::Beta, t}));
      for (int t = 2; t <= n; ++t) out.push_back(checked(fp, {ElementName::Omega, t}));
      break;
    case Family::F2:
    case Family::F3:
      out.push_back(checked(fp, {ElementName::One, std::nullopt}));
      for (int t = 0; t <= 2 * n - 2; ++t) out.push_back(checked(fp, {ElementName::Alpha, t}));
      out.push_back(checked(fp, {ElementName::Beta, 1}));
      break;
  }
  return out;
}

std::optional<Integer> family_norm(const FamilyElementLabel& label, const FamilyParam& fp) {
  const Integer n(fp.n);
  const int N = fp.n;
  const int t = label.t.value_or(0);
  switch (fp.family) {
    case Family::F1:
      switch (label.name) {
        case ElementName::One: return Integer(1);
        case ElementName::HalfMix: return sq(2 * n + 1);
        case ElementName::Mu: return Integer(4);
        case ElementName::Alpha: return alpha_norm(fp, t);
        case ElementName::Beta: return beta_norm_f1(N, t);
        // Associates: gamma_{t+1} ~ beta_t and delta_{2n+2-t} ~ alpha_t.
        case ElementName::Gamma: return beta_norm_f1(N, t - 1);
        case ElementName::Delta: return alpha_norm(fp, 2 * N + 2 - t);
        case ElementName::Omega: {
          const Integer T(t);
          return sq(2 * n + 1 + (4 * n + 2) * T - 2 * T * T);
        }
      }
      break;
    case Family::F2:
    case Family::F3:
      switch (label.name) {
        case ElementName::One: return Integer(1);
        case ElementName::HalfMix: return alpha_norm(fp, 0);
        case ElementName::Alpha: return alpha_norm(fp, t);
        case ElementName::Beta:
          // beta_{2n-t} ~ alpha_t for 1 <= t <= 2n-2; beta_1 has no closed form.
          if (t >= 2) return alpha_norm(fp, 2 * N - t);
          return std::nullopt;
        default: break;
      }
      break;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> fit_beta_norm_exponents(int n, const std::vector<std::pair<int, Integer>>& norms) {
  const auto c = beta_norm_terms(n);
  std::vector<std::vector<int>> fits;
  std::vector<int> e(5, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == 5) {
      for (const auto& [t, value] : norms) {
        Integer s = 0;
        for (int i = 0; i < 5; ++i) {
          Integer pw;
          mpz_pow_ui(pw.get_mpz_t(), Integer(t).get_mpz_t(), static_cast<unsigned long>(e[i]));
          s += c[i] * pw;
        }
        if (s != value) return;
      }
      fits.push_back(e);
      return;
    }
    for (int x = 0; x <= 4; ++x) {
      e[k] = x;
      rec(k + 1);
    }
  };
  rec(0);
  return fits;
}

NormReport verify_norm_formulas(const FamilyParam& fp) {
  NormReport report;
  std::vector<std::pair<int, Integer>> beta_norms;
  for (const auto& fe : family_elements(fp)) {
    const Rational d = norm(fp.ring->to_field(fe.element));
    NormRow row{fe.label, d.get_num(), family_norm(fe.label, fp)};
    if (row.formula && *row.formula != row.direct) {
      throw Error(ErrorCode::FormulaMismatch, fe.label.str() + ": direct " + row.direct.get_str() +
                                                  ", formula " + row.formula->get_str());
    }
    if (fp.family == Family::F1 && fe.label.name == ElementName::Beta) beta_norms.emplace_back(*fe.label.t, row.direct);
    report.rows.push_back(std::move(row));
  }
  if (fp.family == Family::F1) {
    const auto fits = fit_beta_norm_exponents(fp.n, beta_norms);
    if (fits.size() != 1) {
      throw Error(ErrorCode::FormulaMismatch, "N(beta_t): " + std::to_string(fits.size()) + " exponent fits");
    }
    report.beta_exponents = fits.front();
  }
  return report;
}

Integer norm_bound(const FamilyParam& fp) {
  const Integer n(fp.n);
  const Integer n2 = n * n, n3 = n2 * n, n4 = n3 * n;
  switch (fp.family) {
    case Family::F1: return 16 * n4 + 64 * n3 + 16 * n2 - 96 * n + 36;
    case Family::F2: return 16 * n4 - 8 * n2 + 1;
    case Family::F3: return 16 * n4 + 16 * n3 - 4 * n2 - 4 * n + 1;
  }
  return 0;
}

FamilyElementLabel norm_bound_attainer(const FamilyParam& fp) {
  if (fp.family == Family::F1) return {ElementName::Alpha, 2 * fp.n - 2};
  return {ElementName::Alpha, 0};
}

std::optional<IntegralElement> is_decomposable(const Ring& ring, const IntegralElement& a,
                                               std::uint64_t step_limit) {
  const FieldElement av = ring.to_field(a);
  require_totally_positive(av);
  const LatticeEnumerator enumerator(ring.basis(), ring.codifferent());
  std::optional<IntegralElement> found;
  const auto stats = enumerator.enumerate(
      positive_box(av, 1, false), std::nullopt,
      [&](const IntCoords& c) {
        if (c == a.coords) return true;
        const FieldElement b = ring.to_field(c);
        if (b.is_zero() || !is_totally_positive(b) || !is_totally_positive(av - b)) return true;
        found = ring.make(c);
        return false;
      },
      step_limit, true);
  if (stats.status == EnumerationStatus::BudgetExceeded) {
    throw Error(ErrorCode::BudgetExceeded, "decomposability search exceeded its step limit");
  }
  return found;
}

MinTrace min_codiff_trace(const Ring& ring, const IntegralElement& a, int t_max) {
  if (t_max < 1) throw Error(ErrorCode::OutOfRange, "t_max must be at least 1");
  const FieldElement av = ring.to_field(a);
  require_totally_positive(av);
  const LatticeEnumerator enumerator(ring.codifferent(), ring.basis());
  for (int T = 1; T <= t_max; ++T) {
    std::optional<IntCoords> witness;
    enumerator.enumerate(positive_box(av, T, true), LinearEquation{a.coords, Integer(T)},
                         [&](const IntCoords& b) {
                           const FieldElement delta = ring.codifferent_element(b);
                           if (!is_totally_positive(delta)) return true;
                           witness = b;
                           return false;
                         });
    if (witness) return {Integer(T), witness};
  }
  return {};
}

AssociationReport association_identities(const FamilyParam& fp) {
  AssociationReport report;
  const FamilyUnits u = family_units(fp);
  for (const auto* e : {&u.eps_p, &u.eps_q, &u.eps_r}) {
    if (norm(*e) != 1 || !is_totally_positive(*e) || !is_algebraic_integer(*e)) {
      throw Error(ErrorCode::IdentityFailed, "unit " + format_element(*e) + " fails sanity checks");
    }
  }
  const int n = fp.n;
  auto v = [&](ElementName name, int t) { return family_element_value(fp, {name, t}); };
  auto check = [&](const std::string& relation, int t, const FieldElement& lhs, const FieldElement& rhs,
                   FamilyElementLabel associated) {
    const bool holds = lhs == rhs;
    report.rows.push_back({relation, t, holds});
    if (!holds) {
      throw Error(ErrorCode::IdentityFailed, relation + " at t=" + std::to_string(t) + ": " +
                                                 format_element(lhs) + " vs " + format_element(rhs));
    }
    if (std::find(report.associated.begin(), report.associated.end(), associated) == report.associated.end()) {
      report.associated.push_back(associated);
    }
  };
  using EN = ElementName;
  switch (fp.family) {
    case Family::F1:
      for (int t = 3; t <= 2 * n - 2; ++t) {
        check("delta_{2n+2-t} = s3(alpha_t) eps_r", t, v(EN::Delta, 2 * n + 2 - t),
              conjugate(v(EN::Alpha, t), 3) * u.eps_r, {EN::Delta, 2 * n + 2 - t});
        // The relation pairs t with 2n+1-t, so only the upper half is new.
        check("beta_{2n+1-t} = s3(beta_t) eps_r", t, v(EN::Beta, 2 * n + 1 - t),
              conjugate(v(EN::Beta, t), 3) * u.eps_r, {EN::Beta, std::max(t, 2 * n + 1 - t)});
        check("gamma_{t+1} = s4(beta_t) eps_p", t, v(EN::Gamma, t + 1),
              conjugate(v(EN::Beta, t), 4) * u.eps_p, {EN::Gamma, t + 1});
      }
      for (int t = 2; t <= 2 * n - 1; ++t) {
        check("omega_{2n+1-t} = s2(omega_t) eps_p", t, v(EN::Omega, 2 * n + 1 - t),
              conjugate(v(EN::Omega, t), 2) * u.eps_p, {EN::Omega, std::max(t, 2 * n + 1 - t)});
      }
      break;
    case Family::F2:
      for (int t = 1; t <= 2 * n - 2; ++t) {
        check("beta_{2n-t} = s2(alpha_t) eps_r", t, v(EN::Beta, 2 * n - t), conjugate(v(EN::Alpha, t), 2) * u.eps_r,
              {EN::Beta, 2 * n - t});
      }
      break;
    case Family::F3: {
      const FieldElement mix = family_element_value(fp, {EN::HalfMix, std::nullopt});
      check("alpha_0 = s3(half) eps_p eps_r", 0, v(EN::Alpha, 0), conjugate(mix, 3) * u.eps_p * u.eps_r,
            {EN::HalfMix, std::nullopt});
      for (int t = 1; t <= 2 * n - 2; ++t) {
        check("beta_{2n-t} = s3(alpha_t) eps_r", t, v(EN::Beta, 2 * n - t), conjugate(v(EN::Alpha, t), 3) * u.eps_r,
              {EN::Beta, 2 * n - t});
      }
      break;
    }
  }
  return report;
}

std::vector<IntCoords> documented_trace_witnesses(const FamilyParam& fp) {
  const long n = fp.n;
  switch (fp.family) {
    case Family::F1:
      return {{1, 2 * n - 1, -(n - 1), -1}, {1, -(2 * n - 1), n, -2 * n}, {1, -(2 * n - 1), -(n - 1), 0}};
    case Family::F2:
      return {{1, 2 * n - 1, -(2 * n - 2), -(4 * n * n - 2 * n - 1)}};
    case Family::F3:
      return {{1, -(2 * n - 1), 2 * n, -(4 * n * n + 2 * n - 2)}};
  }
  return {};
}

std::vector<FieldElement> auxiliary_elements(const FamilyParam& fp) {
  std::vector<FieldElement> out;
  if (fp.family == Family::F1) return out;
  const FamilyUnits u = family_units(fp);
  for (int t = 1; t <= 2 * fp.n - 1; ++t) out.push_back(conjugate(value_at(fp, ElementName::Beta, t), 4));
  if (fp.family == Family::F2) {
    out.push_back(conjugate(u.eps_p, 2));
    out.push_back(u.eps_q);
  } else {
    out.push_back(u.eps_p);
    out.push_back(conjugate(u.eps_q, 3));
  }
  out.push_back(u.eps_r);
  out.push_back(conjugate(u.eps_p * u.eps_q, 4));
  out.push_back(conjugate(u.eps_p * u.eps_r, 4));
  out.push_back(conjugate(u.eps_q * u.eps_r, 4));
  return out;
}

UniversalFormBounds universal_form_bounds(const FamilyParam& fp) {
  const Ring& ring = *fp.ring;
  std::vector<IntegralElement> pool;
  auto add = [&](const FieldElement& x) {
    require_totally_positive(x);
    const IntegralElement e = ring.to_integral(x);
    if (std::find(pool.begin(), pool.end(), e) == pool.end()) pool.push_back(e);
  };
  for (const auto& fe : family_elements(fp)) add(ring.to_field(fe.element));
  for (const auto& x : auxiliary_elements(fp)) add(x);

  auto count = [&](const IntCoords& b, int T) {
    int c = 0;
    for (const auto& e : pool) c += trace_pairing(e, b) == T ? 1 : 0;
    return c;
  };
  UniversalFormBounds out;
  const auto witnesses = documented_trace_witnesses(fp);
  out.trace1_witness = out.trace2_witness = witnesses.front();
  for (const auto& b : witnesses) {
    require_totally_positive(ring.codifferent_element(b));
    const int c1 = count(b, 1), c2 = count(b, 2);
    if (c1 > out.trace1_count) {
      out.trace1_count = c1;
      out.trace1_witness = b;
    }
    if (c2 > out.trace2_count) {
      out.trace2_count = c2;
      out.trace2_witness = b;
    }
  }
  out.classical = Rational(out.trace1_count, 4);
  out.diagonal = std::max(out.classical, Rational(out.trace2_count, 12));
  out.classical.canonicalize();
  out.diagonal.canonicalize();
  return out;
}

}  // namespace biquad
