#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "twistforge/twist.hpp"

using namespace twistforge;

namespace {

ParamScalar P(Param p) { return ParamScalar::param(p); }
AlgebraElement gen(Generator g) { return AlgebraElement::generator(g); }
AlgebraElement mom(int mu) { return gen(momentum(mu)); }

// momentum series -> enveloping algebra element
AlgebraElement leg_of(const MomentumFunction& f) {
  AlgebraElement x;
  for (const auto& [m, c] : f.terms()) {
    REQUIRE_FALSE(m.has_atoms());
    Word w;
    for (int mu = 0; mu < 4; ++mu) w.append(m.p[static_cast<std::size_t>(mu)], encode(momentum(mu)));
    x += AlgebraElement::ordered_word(w, c.without_order());
  }
  return x;
}

TensorElement carrier_left(Generator g, const MomentumFunction& f, int n) {
  return TensorElement::product({gen(g), leg_of(f.expand(n))});
}

TensorElement carrier_right(Generator g, const MomentumFunction& f, int n) {
  return TensorElement::product({leg_of(f.expand(n)), gen(g)});
}

MomentumFunction atom(Trans k, const LinearForm& l) { return MomentumFunction::atom(k, l); }

LinearForm form(int mu, ParamScalar a, int nu, ParamScalar b) {
  LinearForm l;
  l.coeff[static_cast<std::size_t>(mu)] = a;
  l.coeff[static_cast<std::size_t>(nu)] = b;
  return l;
}

// ad_f series for F = exp(f)
TensorElement adjoint_series(const TensorElement& f, const TensorElement& y, int n) {
  TensorElement sum = y, term = y;
  Rational fact(1);
  for (int k = 1; k <= n; ++k) {
    term = (tensor_mul(f, term) - tensor_mul(term, f)).truncated(n);
    fact *= k;
    sum += ParamScalar(GaussRational(Rational(1) / fact)) * term;
  }
  return sum.truncated(n);
}

}  // namespace

TEST_CASE("trivial twist") {
  TwistSpec s = TwistSpec::simplified(TwistCase::i, 3);
  s.assignment[Param::delta0_m] = ParamScalar{};
  s.assignment[Param::delta3_m] = ParamScalar{};
  Twist F = build_twist(s);
  CHECK(F.left == TensorElement::unit(2, 3));
  CHECK(check_cocycle(F).pass);
  CHECK(check_coassoc(F, mom(1)).pass);
  CHECK(check_hermiticity(F).pass);
  CHECK(twisted_series(F, mom(1)) == coproduct0(mom(1)));
}

TEST_CASE("simplified case i twist at first order") {
  Twist F = build_twist(TwistSpec::simplified(TwistCase::i, 2));
  TensorElement first(2);
  for (const auto& [k, c] : F.left.terms())
    if (c.min_deformation_degree() == 1) first += TensorElement::pure(TensorElement::split(k), c);
  // hermitean exponent -i*dm^r*(M3 (x) P_r - P_r (x) M3)
  TensorElement want(2);
  for (auto [mu, p] : {std::pair{0, Param::delta0_m}, std::pair{3, Param::delta3_m}}) {
    want += (-ParamScalar::i() * P(p)) * TensorElement::product({gen(Generator::M3), mom(mu)});
    want += (ParamScalar::i() * P(p)) * TensorElement::product({mom(mu), gen(Generator::M3)});
  }
  CHECK(first == want.truncated(2));
}

TEST_CASE("simplified coproducts") {
  for (int n : {4, 6}) {
    CAPTURE(n);
    Twist Fi = build_twist(TwistSpec::simplified(TwistCase::i, n));
    LinearForm a = form(0, P(Param::delta0_m), 3, P(Param::delta3_m));
    auto c = atom(Trans::cos, a), s = atom(Trans::sin, a);
    using G = Generator;
    CHECK(twisted_series(Fi, mom(1)) == (carrier_left(G::P1, c, n) + carrier_right(G::P1, c, n) +
                                          carrier_left(G::P2, s, n) - carrier_right(G::P2, s, n)));
    CHECK(twisted_series(Fi, mom(2)) == (carrier_left(G::P2, c, n) + carrier_right(G::P2, c, n) -
                                          carrier_left(G::P1, s, n) + carrier_right(G::P1, s, n)));
    CHECK(twisted_coproduct(Fi, mom(3)).str() == "P3 (x) 1 + 1 (x) P3");

    Twist Fii = build_twist(TwistSpec::simplified(TwistCase::ii, n));
    LinearForm b = form(1, P(Param::xi1_m), 2, P(Param::xi2_m));
    auto ch = atom(Trans::cosh, b), sh = atom(Trans::sinh, b);
    CHECK(twisted_series(Fii, mom(0)) == (carrier_left(G::P0, ch, n) + carrier_right(G::P0, ch, n) -
                                           carrier_left(G::P3, sh, n) + carrier_right(G::P3, sh, n)));
    CHECK(twisted_series(Fii, mom(3)) == (carrier_left(G::P3, ch, n) + carrier_right(G::P3, ch, n) -
                                           carrier_left(G::P0, sh, n) + carrier_right(G::P0, sh, n)));
    for (int sign : {1, -1}) CHECK(twisted_series(Fii, combo_plus_minus('P', sign)) ==
                                   coproduct0(combo_plus_minus('P', sign)));
  }
}

TEST_CASE("closed form presentation") {
  Twist Fi = build_twist(TwistSpec::simplified(TwistCase::i, 4));
  auto d = twisted_coproduct(Fi, mom(1));
  REQUIRE(d.decomposed);
  CHECK(d.str(false) ==
        "P1 ⊗ cos(delta0m*P0 + delta3m*P3) + cos(delta0m*P0 + delta3m*P3) ⊗ P1 + "
        "P2 ⊗ sin(delta0m*P0 + delta3m*P3) - sin(delta0m*P0 + delta3m*P3) ⊗ P2");
  for (const auto& p : d.pieces) CHECK(p.closed);
}

TEST_CASE("subalgebra elements keep the primitive coproduct") {
  for (auto c : {TwistCase::i, TwistCase::ii}) {
    Twist F = build_twist(TwistSpec::generic(c, 3));
    for (Generator g : subalgebra(c)) CHECK(twisted_series(F, gen(g)) == coproduct0(gen(g)).truncated(3));
  }
}

TEST_CASE("conjugation agrees with the adjoint series") {
  TwistSpec s = TwistSpec::generic(TwistCase::i, 3);
  Twist F = build_twist(s);
  // full exponent of the left form; all pieces commute
  TensorElement f = TensorElement::product({gen(Generator::M3), F.factors.a1});
  auto args = argument_momenta(TwistCase::i);
  for (std::size_t k = 0; k < args.size(); ++k) f += TensorElement::product({mom(args[k]), F.factors.b[k]});
  for (Generator g : {Generator::P1, Generator::P2, Generator::M1, Generator::N2})
    CHECK(twisted_series(F, gen(g)) == adjoint_series(f, coproduct0(gen(g)), 3));
}

TEST_CASE("cocycle and counit for generic hermitean parameters") {
  for (auto c : {TwistCase::i, TwistCase::ii}) {
    Report r = check_cocycle(build_twist(TwistSpec::generic(c, c == TwistCase::i ? 4 : 3)));
    CHECK_MESSAGE(r.pass, r.residual);
  }
}

TEST_CASE("case ii variants are adjudicated") {
  Report r = adjudicate_variants(TwistSpec::generic(TwistCase::ii, 3));
  CHECK(r.pass);
  CHECK(r.notes.back() == "passing variant: corrected");
  TwistSpec printed = TwistSpec::generic(TwistCase::ii, 3);
  printed.variant = TwistVariant::printed;
  Twist a = build_twist(printed), b = build_twist(TwistSpec::generic(TwistCase::ii, 3));
  CHECK_FALSE(a.right == b.right);
  CHECK_FALSE(check_cocycle(a).pass);
}

TEST_CASE("coassociativity follows from the cocycle") {
  for (int n = 2; n <= 4; ++n) {
    Twist F = build_twist(TwistSpec::simplified(TwistCase::ii, n));
    REQUIRE(check_cocycle(F).pass);
    Report parallel = check_coassoc_all(F, true);
    Report serial = check_coassoc_all(F, false);
    CHECK(parallel.pass);
    CHECK(parallel.to_json() == serial.to_json());
  }
  Twist Fi = build_twist(TwistSpec::simplified(TwistCase::i, 4));
  for (int mu = 0; mu < 4; ++mu) CHECK(check_coassoc(Fi, mom(mu)).pass);
}

TEST_CASE("hermiticity") {
  TwistSpec s = TwistSpec::generic(TwistCase::i, 3);
  s.assignment[Param::alpha_p] = ParamScalar{};
  CHECK(check_hermiticity(build_twist(s)).pass);
  s.hermitean = false;
  Report bad = check_hermiticity(build_twist(s));
  CHECK_FALSE(bad.pass);
  CHECK(bad.residual != "0");

  TwistSpec complex = TwistSpec::simplified(TwistCase::i, 3);
  complex.assignment[Param::delta0_m] = ParamScalar::i() * P(Param::delta0_m);
  CHECK_THROWS_WITH_AS(build_twist(complex), doctest::Contains("delta0m"), std::invalid_argument);
}

TEST_CASE("spec validation") {
  TwistSpec s = TwistSpec::generic(TwistCase::i, 1);
  CHECK_THROWS_AS(build_twist(s), std::invalid_argument);
  s.order = 3;
  s.assignment[Param::xi1_m] = P(Param::xi1_m);
  CHECK_THROWS_WITH_AS(build_twist(s), doctest::Contains("xi1m"), std::invalid_argument);
  TwistSpec numeric = TwistSpec::generic(TwistCase::ii, 3);
  numeric.assignment[Param::gamma_p] = ParamScalar(GaussRational::frac(1, 10));
  CHECK_THROWS_AS(build_twist(numeric), std::invalid_argument);
}

TEST_CASE("bracket convention calibration") {
  std::ifstream in("golden/calibration.json");
  REQUIRE(in.good());
  auto golden = nlohmann::json::parse(in);
  const int n = 3;
  using G = Generator;
  std::vector<std::string> both;
  for (Convention conv : {Convention{1, 1}, Convention{1, -1}, Convention{-1, 1}, Convention{-1, -1}}) {
    CAPTURE(conv.str());
    // real exponents, translation sector only
    TwistSpec si = TwistSpec::generic(TwistCase::i, n);
    si.hermitean = false;
    si.conv = conv;
    si.assignment[Param::alpha_p] = ParamScalar{};
    Twist Fi = build_twist(si);
    auto dp = [](Param a, Param b) { return P(a) + P(b); };
    auto dmn = [](Param a, Param b) { return P(a) - P(b); };
    LinearForm a1 = form(0, dp(Param::delta0_p, Param::delta0_m), 3, dp(Param::delta3_p, Param::delta3_m));
    LinearForm a2 = form(0, dmn(Param::delta0_p, Param::delta0_m), 3, dmn(Param::delta3_p, Param::delta3_m));
    ParamScalar i = ParamScalar::i();
    TensorElement p1 = carrier_left(G::P1, atom(Trans::cosh, a1), n) + carrier_right(G::P1, atom(Trans::cosh, a2), n) +
                       i * carrier_left(G::P2, atom(Trans::sinh, a1), n) +
                       i * carrier_right(G::P2, atom(Trans::sinh, a2), n);
    TensorElement p2 = carrier_left(G::P2, atom(Trans::cosh, a1), n) + carrier_right(G::P2, atom(Trans::cosh, a2), n) -
                       i * carrier_left(G::P1, atom(Trans::sinh, a1), n) -
                       i * carrier_right(G::P1, atom(Trans::sinh, a2), n);
    bool match_i = twisted_series(Fi, mom(1)) == p1 && twisted_series(Fi, mom(2)) == p2;
    CHECK(match_i == golden["case i"][conv.str()].get<bool>());

    TwistSpec sii = TwistSpec::generic(TwistCase::ii, n);
    sii.hermitean = false;
    sii.conv = conv;
    sii.assignment[Param::gamma_p] = ParamScalar{};
    Twist Fii = build_twist(sii);
    LinearForm b1 = form(1, dmn(Param::xi1_p, Param::xi1_m), 2, dmn(Param::xi2_p, Param::xi2_m));
    LinearForm b2 = form(1, dp(Param::xi1_p, Param::xi1_m), 2, dp(Param::xi2_p, Param::xi2_m));
    TensorElement p3 = carrier_left(G::P3, atom(Trans::cos, b1), n) + carrier_right(G::P3, atom(Trans::cos, b2), n) +
                       i * carrier_left(G::P0, atom(Trans::sin, b1), n) +
                       i * carrier_right(G::P0, atom(Trans::sin, b2), n);
    TensorElement p0 = carrier_left(G::P0, atom(Trans::cos, b1), n) + carrier_right(G::P0, atom(Trans::cos, b2), n) +
                       i * carrier_left(G::P3, atom(Trans::sin, b1), n) +
                       i * carrier_right(G::P3, atom(Trans::sin, b2), n);
    bool match_ii = twisted_series(Fii, mom(3)) == p3 && twisted_series(Fii, mom(0)) == p0;
    CHECK(match_ii == golden["case ii"][conv.str()].get<bool>());
    if (match_i && match_ii) both.push_back(conv.str());
  }
  // case i is blind to N -> -N, so only the two cases together fix the convention
  REQUIRE(both.size() == 1);
  CHECK(both[0] == golden["selected"].get<std::string>());
  CHECK(both[0] == Convention::physical().str());
}

TEST_CASE("report serialisation") {
  Report r = check_cocycle(build_twist(TwistSpec::simplified(TwistCase::i, 2)));
  auto j = r.to_json();
  CHECK(j["name"] == "cocycle");
  CHECK(j["order"] == 2);
  CHECK(j["residual"] == "0");
  CHECK(j["pass"] == true);
}
