// biquad: command-line front end.
//
// Exit codes: 0 success or certificate produced, 1 usage or input error,
// 2 refuted, 3 inconclusive.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "biquad/error.hpp"
#include "biquad/family.hpp"
#include "biquad/sos.hpp"

using namespace biquad;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 1, kRefuted = 2, kInconclusive = 3 };

std::string str(const FieldElement& a) { return format_element(a); }

json coords_json(const IntCoords& c) {
  json out = json::array();
  for (const auto& v : c) out.push_back(v.get_str());
  return out;
}

json field_json(const Ring& ring) {
  const FieldSpec& f = ring.field();
  json basis = json::array(), codiff = json::array();
  for (const auto& g : ring.basis()) basis.push_back(str(g));
  for (const auto& g : ring.codifferent()) codiff.push_back(str(g));
  return {{"p", f.p},
          {"q", f.q},
          {"r", f.r},
          {"p0", f.p0},
          {"q0", f.q0},
          {"r0", f.r0},
          {"basis_type", to_string(f.basis_type)},
          {"roles", {f.role_radicand(0), f.role_radicand(1), f.role_radicand(2)}},
          {"basis", basis},
          {"codifferent", codiff},
          {"discriminant", ring.discriminant().get_str()}};
}

json field_summary(const Ring& ring) {
  const FieldSpec& f = ring.field();
  return {{"p", f.p}, {"q", f.q}, {"r", f.r}, {"basis_type", to_string(f.basis_type)}};
}

json budget_json(const SearchBudget& b) {
  return {{"max_depth", b.max_depth},
          {"node_limit", b.node_limit},
          {"time_limit", b.time_limit_seconds},
          {"threads", b.threads}};
}

json certificate_json(const Ring& ring, const RankCertificate& c) {
  json witness = json::array();
  for (const auto& w : c.witness) witness.push_back(str(ring.to_field(w)));
  return {{"target", str(ring.to_field(c.target))},
          {"target_coords", coords_json(c.target.coords)},
          {"kind", to_string(c.kind)},
          {"rank_or_bound", c.rank_or_bound},
          {"witness", witness},
          {"nodes_explored", c.nodes_explored},
          {"candidates", c.candidate_count},
          {"wall_time", c.wall_time}};
}

int exit_for(const RankCertificate& c) {
  switch (c.kind) {
    case CertificateKind::Refuted: return kRefuted;
    case CertificateKind::Inconclusive: return kInconclusive;
    default: return kOk;
  }
}

struct Report {
  json doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Report(const std::string& command) {
    doc["command"] = command;
    doc["version"] = kVersion;
  }

  void emit() {
    doc["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << doc.dump(2) << '\n';
  }
};

struct BudgetFlags {
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> time_limit;
  std::optional<int> max_depth;
  unsigned threads = 1;

  void attach(CLI::App* app) {
    app->add_option("--max-nodes", max_nodes, "Node limit (default BIQUAD_MAX_NODES or built-in)");
    app->add_option("--time-limit", time_limit, "Seconds (default BIQUAD_TIME_LIMIT or none)");
    app->add_option("--max-depth", max_depth, "Deepest rank tried");
    app->add_option("--threads", threads, "Worker threads for root branches")->check(CLI::Range(1u, 256u));
  }

  SearchBudget make() const {
    SearchBudget b = SearchBudget::from_environment();
    if (max_nodes) b.node_limit = *max_nodes;
    if (time_limit) b.time_limit_seconds = *time_limit;
    if (max_depth) b.max_depth = *max_depth;
    b.threads = threads;
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic, sums of squares and indecomposables in real biquadratic fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::int64_t p = 0, q = 0;
  auto add_field = [&](CLI::App* sub) {
    sub->add_option("--p", p, "First radicand")->required();
    sub->add_option("--q", q, "Second radicand")->required();
  };

  auto* field_cmd = app.add_subcommand("field", "Field data: basis type, integral and codifferent bases");
  add_field(field_cmd);

  std::string a_lit, b_lit, op = "norm";
  int conj_index = 1;
  auto* elt_cmd = app.add_subcommand("elt", "Element arithmetic and invariants");
  add_field(elt_cmd);
  elt_cmd->add_option("--a", a_lit, "Element literal")->required();
  elt_cmd->add_option("--b", b_lit, "Second operand for add, sub, mul");
  elt_cmd->add_option("--op", op, "add|sub|mul|inv|conj|trace|norm|charpoly|tp|coords|embed")
      ->check(CLI::IsMember({"add", "sub", "mul", "inv", "conj", "trace", "norm", "charpoly", "tp", "coords", "embed"}));
  elt_cmd->add_option("--i", conj_index, "Embedding index for conj")->check(CLI::Range(1, 4));

  std::string elt_lit;
  std::optional<int> min_rank;
  BudgetFlags sos_budget;
  auto* sos_cmd = app.add_subcommand("sos-rank", "Minimal number of squares, or a certified lower bound");
  add_field(sos_cmd);
  sos_cmd->add_option("--elt", elt_lit, "Target literal")->required();
  sos_cmd->add_option("--min", min_rank, "Certify rank >= MIN instead of computing the rank");
  sos_budget.attach(sos_cmd);

  std::string witness_kind;
  BudgetFlags cert_budget;
  auto* cert_cmd = app.add_subcommand("certify", "Build a witness element and certify its rank bound");
  add_field(cert_cmd);
  cert_cmd->add_option("--witness", witness_kind, "B1a|B1b|B23|B23_coprime|B4|Main7")->required();
  cert_cmd->add_option("--min", min_rank, "Bound to certify (default 6, Main7: 7)");
  cert_budget.attach(cert_cmd);

  std::string family_name = "f1";
  int fam_n = 6, n_from = 6, n_to = 30, t_max = 2;
  bool csv = false, check_indecomposable = true;
  auto* family_cmd = app.add_subcommand("family", "Indecomposables of the three parametric families");
  family_cmd->add_option("--family", family_name, "f1|f2|f3")->check(CLI::IsMember({"f1", "f2", "f3"}));
  family_cmd->require_subcommand(1);
  auto* report_cmd = family_cmd->add_subcommand("report", "Per-element norms, minimal traces, indecomposability");
  report_cmd->add_option("--n", fam_n, "Family parameter")->required();
  report_cmd->add_option("--t-max", t_max, "Largest minimal trace searched")->check(CLI::Range(1, 20));
  report_cmd->add_flag("--csv", csv, "Element table as CSV");
  report_cmd->add_flag("!--skip-indecomposable", check_indecomposable, "Skip the decomposability search");
  auto* fscan_cmd = family_cmd->add_subcommand("scan", "Admissible parameters in a range");
  fscan_cmd->add_option("--n-from", n_from, "First n")->required();
  fscan_cmd->add_option("--n-to", n_to, "Last n")->required();

  int samples = 50;
  std::uint64_t seed = 1;
  BudgetFlags scan_budget;
  auto* scan_cmd = app.add_subcommand("scan", "Empirical Pythagoras-number lower bound");
  add_field(scan_cmd);
  scan_cmd->add_option("--samples", samples, "Random sums of squares to rank");
  scan_cmd->add_option("--seed", seed, "Random seed");
  scan_budget.attach(scan_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*field_cmd) {
      Report rep("field");
      const RingPtr ring = make_ring(p, q);
      rep.doc["result"] = field_json(*ring);
      rep.emit();
      return kOk;
    }

    if (*elt_cmd) {
      Report rep("elt");
      const RingPtr ring = make_ring(p, q);
      const FieldPtr& f = ring->field_ptr();
      const FieldElement a = parse_element(f, a_lit);
      json res{{"op", op}, {"a", str(a)}};
      auto need_b = [&] {
        if (b_lit.empty()) throw Error(ErrorCode::ParseError, "--b is required for " + op);
        return parse_element(f, b_lit);
      };
      if (op == "add") {
        res["value"] = str(a + need_b());
      } else if (op == "sub") {
        res["value"] = str(a - need_b());
      } else if (op == "mul") {
        res["value"] = str(a * need_b());
      } else if (op == "inv") {
        res["value"] = str(inverse(a));
      } else if (op == "conj") {
        res["value"] = str(conjugate(a, conj_index));
      } else if (op == "trace") {
        res["value"] = to_string(trace(a));
      } else if (op == "norm") {
        res["value"] = to_string(norm(a));
      } else if (op == "charpoly") {
        const CharPoly cp = char_poly(a);
        res["value"] = {{"A", to_string(cp.A)}, {"B", to_string(cp.B)}, {"C", to_string(cp.C)}, {"D", to_string(cp.D)}};
      } else if (op == "tp") {
        res["value"] = is_totally_positive(a);
      } else if (op == "coords") {
        const auto c = ring->try_integral(a);
        res["value"] = c ? coords_json(c->coords) : json(nullptr);
        res["algebraic_integer"] = is_algebraic_integer(a);
      } else if (op == "embed") {
        json v = json::array();
        for (int i = 1; i <= 4; ++i) {
          const EmbeddingInterval e = refine_embedding(a, i, Rational(1, 1000000));
          v.push_back({{"index", i}, {"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}, {"approx", approx_embedding(a, i)}});
        }
        res["value"] = v;
      }
      rep.doc["field"] = field_summary(*ring);
      rep.doc["result"] = res;
      rep.emit();
      return kOk;
    }

    if (*sos_cmd) {
      Report rep("sos-rank");
      const RingPtr ring = make_ring(p, q);
      const IntegralElement target = ring->to_integral(parse_element(ring->field_ptr(), elt_lit));
      const SearchBudget budget = sos_budget.make();
      const RankCertificate cert =
          min_rank ? certify_min_rank(*ring, target, *min_rank, budget) : sos_rank(*ring, target, budget);
      rep.doc["field"] = field_summary(*ring);
      rep.doc["budget"] = budget_json(budget);
      rep.doc["result"] = certificate_json(*ring, cert);
      rep.emit();
      return exit_for(cert);
    }

    if (*cert_cmd) {
      Report rep("certify");
      const RingPtr ring = make_ring(p, q);
      const WitnessKind kind = parse_witness_kind(witness_kind);
      const IntegralElement target = witness_element(kind, *ring);
      const int m = min_rank.value_or(kind == WitnessKind::Main7 ? 7 : 6);
      const SearchBudget budget = cert_budget.make();
      const RankCertificate cert = certify_min_rank(*ring, target, m, budget);
      const WitnessConstruction w = witness_construction(kind, *ring);
      json roots = json::array();
      for (const auto& r : w.roots) roots.push_back(str(r));
      rep.doc["field"] = field_summary(*ring);
      rep.doc["budget"] = budget_json(budget);
      rep.doc["construction"] = {{"kind", to_string(kind)}, {"rational_part", w.rational_part.get_str()}, {"roots", roots}};
      rep.doc["result"] = certificate_json(*ring, cert);
      rep.emit();
      return exit_for(cert);
    }

    if (*family_cmd) {
      const Family family = parse_family(family_name);
      if (*fscan_cmd) {
        Report rep("family scan");
        json rows = json::array();
        for (int n = n_from; n <= n_to; ++n) {
          const auto why = admissibility_failure(family, n);
          rows.push_back({{"n", n}, {"admissible", !why}, {"reason", why ? *why : ""}});
        }
        rep.doc["family"] = to_string(family);
        rep.doc["result"] = rows;
        rep.emit();
        return kOk;
      }
      Report rep("family report");
      const FamilyParam fp = make_family(family, fam_n);
      const Ring& ring = *fp.ring;
      const NormReport norms = verify_norm_formulas(fp);
      const auto elements = family_elements(fp);
      json rows = json::array();
      if (csv) std::cout << "label,t,integral_coords,norm,formula_norm,minTr,minTr_witness,indecomposable_verified\n";
      for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& fe = elements[i];
        const MinTrace mt = min_codiff_trace(ring, fe.element, t_max);
        json indec = nullptr;
        if (check_indecomposable) indec = !is_decomposable(ring, fe.element).has_value();
        const std::string label = fe.label.str();
        const std::string name = label.substr(0, label.find('_'));
        json row{{"label", name},
                 {"t", fe.label.t ? json(*fe.label.t) : json(nullptr)},
                 {"element", str(ring.to_field(fe.element))},
                 {"integral_coords", coords_json(fe.element.coords)},
                 {"norm", norms.rows[i].direct.get_str()},
                 {"formula_norm", norms.rows[i].formula ? json(norms.rows[i].formula->get_str()) : json(nullptr)},
                 {"minTr", mt.value ? json(mt.value->get_str()) : json("> " + std::to_string(t_max))},
                 {"minTr_witness", mt.witness ? coords_json(*mt.witness) : json(nullptr)},
                 {"indecomposable_verified", indec}};
        if (csv) {
          std::cout << name << ',' << (fe.label.t ? std::to_string(*fe.label.t) : "") << ','
                    << to_string(fe.element.coords) << ',' << norms.rows[i].direct << ','
                    << (norms.rows[i].formula ? norms.rows[i].formula->get_str() : "") << ','
                    << (mt.value ? mt.value->get_str() : "> " + std::to_string(t_max)) << ','
                    << (mt.witness ? to_string(*mt.witness) : "") << ','
                    << (indec.is_null() ? "" : (indec.get<bool>() ? "true" : "false")) << '\n';
        }
        rows.push_back(row);
      }
      if (csv) return kOk;
      const AssociationReport assoc = association_identities(fp);
      const UniversalFormBounds ub = universal_form_bounds(fp);
      Integer max_norm = 0;
      for (const auto& r : norms.rows) max_norm = std::max(max_norm, r.direct);
      json associated = json::array();
      for (const auto& l : assoc.associated) associated.push_back(l.str());
      rep.doc["field"] = field_json(ring);
      rep.doc["family"] = {{"family", to_string(family)}, {"n", fam_n}};
      rep.doc["result"] = {
          {"elements", rows},
          {"max_norm", max_norm.get_str()},
          {"norm_bound", norm_bound(fp).get_str()},
          {"norm_bound_attainer", norm_bound_attainer(fp).str()},
          {"beta_norm_exponents", norms.beta_exponents},
          {"association_identities_checked", assoc.rows.size()},
          {"associated_elements", associated},
          {"universal_forms",
           {{"trace1_count", ub.trace1_count},
            {"trace2_count", ub.trace2_count},
            {"trace1_witness", coords_json(ub.trace1_witness)},
            {"trace2_witness", coords_json(ub.trace2_witness)},
            {"classical", to_string(ub.classical)},
            {"classical_ceil", ceil_of(ub.classical).get_str()},
            {"diagonal", to_string(ub.diagonal)},
            {"diagonal_ceil", ceil_of(ub.diagonal).get_str()}}}};
      rep.emit();
      return kOk;
    }

    if (*scan_cmd) {
      Report rep("scan");
      const RingPtr ring = make_ring(p, q);
      const SearchBudget budget = scan_budget.make();
      const ScanResult res = pythagoras_scan(*ring, samples, budget, seed);
      rep.doc["field"] = field_summary(*ring);
      rep.doc["budget"] = budget_json(budget);
      rep.doc["result"] = {{"best_rank", res.best_rank},
                           {"best_element", res.best_element ? json(str(ring->to_field(*res.best_element))) : json(nullptr)},
                           {"examined", res.examined},
                           {"inconclusive", res.inconclusive},
                           {"seed", seed},
                           {"note", "empirical lower bound for the Pythagoras number"}};
      rep.emit();
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return kUsage;
  }
  return kUsage;
}
