// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>

#include "json.hpp"
#include "twistforge/pipeline.hpp"
#include "twistforge/twist.hpp"

using namespace twistforge;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

ParamScalar P(Param p) { return ParamScalar::param(p); }
AlgebraElement gen(Generator g) { return AlgebraElement::generator(g); }
AlgebraElement mom(int mu) { return gen(momentum(mu)); }
PhaseGenerator X(int k) { return {PhaseGenerator::x, k}; }

AlgebraElement leg_of(const MomentumFunction& f) {
  AlgebraElement x;
  for (const auto& [m, c] : f.terms()) {
    Word w;
    for (int mu = 0; mu < 4; ++mu) w.append(m.p[static_cast<std::size_t>(mu)], encode(momentum(mu)));
    x += AlgebraElement::ordered_word(w, c.without_order());
  }
  return x;
}

// carrier (x) f + f (x) carrier, each with its own sign
TensorElement carriers(Generator g, const MomentumFunction& f, int left_sign, int right_sign, int n) {
  AlgebraElement leg = leg_of(f.expand(n));
  return ParamScalar(left_sign) * TensorElement::product({gen(g), leg}) +
         ParamScalar(right_sign) * TensorElement::product({leg, gen(g)});
}

LinearForm form(int mu, ParamScalar a, int nu, ParamScalar b) {
  LinearForm l;
  l.coeff[static_cast<std::size_t>(mu)] = a;
  l.coeff[static_cast<std::size_t>(nu)] = b;
  return l;
}

bool closed(const TwistedCoproduct& t) {
  if (!t.decomposed) return false;
  for (const auto& p : t.pieces)
    if (!p.closed) return false;
  return true;
}

json load(const std::string& name) {
  std::ifstream in(std::string(TWISTFORGE_GOLDEN_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing reference file " + name);
  return json::parse(in);
}

std::size_t table_mismatches(const RelationTable& t, const json& ref) {
  std::size_t bad = 0;
  for (const auto& line : ref["lines"]) {
    auto a = PhaseGenerator::parse(line["pair"][0].get<std::string>());
    auto b = PhaseGenerator::parse(line["pair"][1].get<std::string>());
    bool same = t.value(*a, *b).str() == line["value"].get<std::string>();
    if (same == line.value("expected_mismatch", false)) ++bad;
  }
  return bad;
}

// -------------------------------------------------------------------------

Outcome coproducts() {
  Outcome o;
  using G = Generator;
  for (int n : {4, 6}) {
    std::string at = " at order " + std::to_string(n);
    Twist Fi = build_twist(TwistSpec::simplified(TwistCase::i, n));
    LinearForm a = form(0, P(Param::delta0_m), 3, P(Param::delta3_m));
    auto c = MomentumFunction::atom(Trans::cos, a), s = MomentumFunction::atom(Trans::sin, a);
    auto d1 = twisted_coproduct(Fi, mom(1)), d2 = twisted_coproduct(Fi, mom(2));
    o.require(d1.series == carriers(G::P1, c, 1, 1, n) + carriers(G::P2, s, 1, -1, n), "case i D(P1)" + at);
    o.require(d2.series == carriers(G::P2, c, 1, 1, n) + carriers(G::P1, s, -1, 1, n), "case i D(P2)" + at);
    o.require(closed(d1) && closed(d2), "case i closed forms" + at);
    o.require(d1.str() ==
                  "P1 (x) cos(delta0m*P0 + delta3m*P3) + cos(delta0m*P0 + delta3m*P3) (x) P1 + "
                  "P2 (x) sin(delta0m*P0 + delta3m*P3) - sin(delta0m*P0 + delta3m*P3) (x) P2",
              "case i D(P1) text" + at);
    for (int mu : {0, 3})
      o.require(twisted_coproduct(Fi, mom(mu)).str() == "P" + std::to_string(mu) + " (x) 1 + 1 (x) P" +
                                                            std::to_string(mu),
                "case i primitive P" + std::to_string(mu) + at);

    Twist Fii = build_twist(TwistSpec::simplified(TwistCase::ii, n));
    LinearForm b = form(1, P(Param::xi1_m), 2, P(Param::xi2_m));
    auto ch = MomentumFunction::atom(Trans::cosh, b), sh = MomentumFunction::atom(Trans::sinh, b);
    auto d0 = twisted_coproduct(Fii, mom(0)), d3 = twisted_coproduct(Fii, mom(3));
    o.require(d0.series == carriers(G::P0, ch, 1, 1, n) + carriers(G::P3, sh, -1, 1, n), "case ii D(P0)" + at);
    o.require(d3.series == carriers(G::P3, ch, 1, 1, n) + carriers(G::P0, sh, -1, 1, n), "case ii D(P3)" + at);
    o.require(closed(d0) && closed(d3), "case ii closed forms" + at);
    for (int sign : {1, -1})
      o.require(twisted_series(Fii, combo_plus_minus('P', sign)) == coproduct0(combo_plus_minus('P', sign)),
                "case ii P+- primitive" + at);
  }
  return o;
}

Outcome twist_axioms() {
  Outcome o;
  for (auto c : {TwistCase::i, TwistCase::ii}) {
    Twist F = build_twist(TwistSpec::simplified(c, 4));
    Report cy = check_cocycle(F);
    o.require(cy.pass && cy.residual == "0", "cocycle residual " + cy.residual);
    Report co = check_coassoc_all(F);
    o.require(co.pass && co.residual == "0", "coassociativity residual " + co.residual);
    o.require(check_hermiticity(F).pass, "hermiticity");
  }
  Report a = adjudicate_variants(TwistSpec::simplified(TwistCase::ii, 4));
  Report b = adjudicate_variants(TwistSpec::simplified(TwistCase::ii, 4));
  o.require(a.to_json() == b.to_json(), "adjudication report not deterministic");
  o.require(!a.notes.empty() && a.notes.back() == "passing variant: corrected", "adjudication verdict");
  return o;
}

Outcome relation_tables() {
  Outcome o;
  for (int n : {4, 6}) {
    o.require(table_mismatches(relation_table(TwistSpec::simplified(TwistCase::i, n)), load("case_i_reference.json")) == 0,
              "case i table");
    o.require(
        table_mismatches(relation_table(TwistSpec::simplified(TwistCase::ii, n)), load("case_ii_reference.json")) == 0,
        "case ii table");
    o.require(table_mismatches(relation_table("iso2", n), load("iso2_reference.json")) == 0, "iso2 table");
    o.require(table_mismatches(relation_table("iso11", n), load("iso11_reference.json")) == 0, "iso11 table");
  }
  for (auto name : {"iso2", "iso11"}) o.require(check_jacobi(relation_table(name)).pass, "jacobi on derived table");
  RelationTable printed = relation_table("iso2");
  printed.set(X(0), X(2),
              PhaseValue::coordinate(1, ParamScalar(2) * ParamScalar::i() * P(Param::hbar) * P(Param::alpha)));
  o.require(!check_jacobi(printed).pass, "jacobi accepted the inconsistent sign");
  return o;
}

Outcome realization() {
  Outcome o;
  for (auto preset : {"iso2", "iso11"}) {
    Report r = verify_realization(preset);
    o.require(r.pass && r.residual == "0" && r.notes.size() == 28, std::string(preset) + " realization " + r.residual);
  }
  return o;
}

Outcome canonical_limit() {
  Outcome o;
  auto relations = [](const json& cfg) {
    CommandResult r = run_command("derive", config_from_json(cfg));
    if (r.exit_code != 0) throw std::runtime_error(r.error);
    return json::parse(r.output)["relations"]["relations"];
  };
  json canonical = relations({{"format", "json"}});
  std::size_t diagonal = 0;
  for (const auto& e : canonical) {
    std::string a = e["pair"][0], b = e["pair"][1];
    bool ok = a[0] == 'p' && b[0] == 'x' && a[1] == b[1] && e["value"] == (a == "p0" ? "i*hbar" : "-i*hbar");
    diagonal += ok ? 1 : 0;
  }
  o.require(diagonal == 4 && canonical.size() == 4, "canonical table is not -i*hbar*g");

  json zeros_i, zeros_ii;
  for (Param p : case_parameters(TwistCase::i)) zeros_i[std::string(param_name(p))] = "0";
  for (Param p : case_parameters(TwistCase::ii)) zeros_ii[std::string(param_name(p))] = "0";
  for (const json& cfg : {json{{"preset", "iso2"}, {"parameters", {{"alpha", 0}}}},
                          json{{"preset", "iso11"}, {"parameters", {{"beta", 0}}}},
                          json{{"case", "i"}, {"parameters", zeros_i}}, json{{"case", "ii"}, {"parameters", zeros_ii}}}) {
    json c = cfg;
    c["format"] = "json";
    o.require(relations(c) == canonical, "relations at zero for " + cfg.dump());
  }
  CommandResult e = run_command(
      "expand", config_from_json(json{{"preset", "iso2"}, {"parameters", {{"alpha", 0}}}, {"generator", "P1"}}));
  o.require(e.output == "D(P1) = P1 (x) 1 + 1 (x) P1\n", "coproduct at zero");
  for (auto preset : {"iso2", "iso11"}) {
    Realization r = realize(preset, ParamScalar{});
    for (const auto& [g, img] : r.images)
      o.require(img == (g.kind == PhaseGenerator::x ? WeylExpression::position(g.index)
                                                    : WeylExpression::momentum(g.index)),
                "realization at zero is not the identity");
  }
  return o;
}

Outcome numeric_uncertainty() {
  Outcome o;
  StateSampler sm;  // 100 states, seed 1
  SuiteReport r = uncertainty_suite("iso2", 0.1, 1.0, GridSettings{256, 22.0}, sm);
  double worst_slack = 1e300, worst_res = 0;
  for (const auto& l : r.lines) {
    worst_slack = std::min(worst_slack, l.slack);
    worst_res = std::max(worst_res, l.commutator_residual);
  }
  o.require(r.lines.size() == 800, "expected 800 lines");
  o.require(worst_slack >= -1e-9, "slack " + std::to_string(worst_slack));
  o.require(worst_res <= 1e-6, "commutator residual " + std::to_string(worst_res));
  o.require(r.pass, "suite failed");
  o.detail = o.pass ? "min slack " + std::to_string(worst_slack) : o.detail;
  return o;
}

Outcome asymptotics() {
  Outcome o;
  std::vector<double> c2;
  for (int k = 0; k <= 16; ++k) c2.push_back(k * std::numbers::pi / 4);
  ScanReport s2 = limit_scan("iso2", 1.0, 1.0, {}, c2, 0.5);
  o.require(s2.max_rhs <= 0.5 + 1e-6, "iso2 max rhs " + std::to_string(s2.max_rhs));
  GridSettings g11{256, 12.0};
  double sigma = 0.2;  // 0.017 of the cutoff
  ScanReport s11 = limit_scan("iso11", 1.0, 1.0, g11, {0, 1, 2, 3, 4}, sigma);
  o.require(sigma <= 0.05 * g11.cutoff, "scan not narrow");
  o.require(s11.monotone, "iso11 rhs not monotone");
  o.require(s11.max_ratio_deviation <= 0.05,
            "iso11 deviation from cosh " + std::to_string(s11.max_ratio_deviation));
  o.require(s2.pass && s11.pass, "scan report failed");
  return o;
}

Outcome quantized_energy() {
  Outcome o;
  GridSettings grid{512, 8.0};
  GridRep rep = preset_grid("iso2", 1.0, 1.0, grid);
  GridState s = rep.gaussian({{0, {std::numbers::pi, 0.0, 0.1}}, {1, {0.0, 0.0, 0.5}}, {2, {0.0, 0.0, 0.5}}});
  SuiteReport r = uncertainty_suite("iso2", 1.0, 1.0, grid, {s});
  double rhs = -1;
  for (const auto& l : r.lines)
    if (l.a == "p1" && l.b == "x1") rhs = l.rhs;
  o.require(std::abs(rhs - 0.5) <= 0.005, "(p1,x1) rhs " + std::to_string(rhs));
  o.require(r.pass, "suite failed");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "coproduct reproduction", 10, coproducts},
      {2, "twist axioms", 0, twist_axioms},
      {3, "relation tables", 10, relation_tables},
      {4, "realization homomorphism", 0, realization},
      {5, "canonical limit", 0, canonical_limit},
      {6, "numeric uncertainty", 60, numeric_uncertainty},
      {7, "asymptotics", 0, asymptotics},
      {8, "quantized energy", 0, quantized_energy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget) o.require(false, "over the " + std::to_string(int(c.budget)) + " s budget");
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " (" << timing << ")";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
