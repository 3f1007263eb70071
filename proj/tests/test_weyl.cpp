#include <random>

#include "doctest.h"
#include "twistforge/weyl.hpp"

using namespace twistforge;

namespace {

using W = WeylExpression;
ParamScalar P(Param p) { return ParamScalar::param(p); }
ParamScalar ih() { return ParamScalar::i() * P(Param::hbar); }
W c(ParamScalar s) { return W(MomentumFunction(std::move(s))); }

// F(p) x-word with small integer coefficients, F of degree <= 2 and word of degree <= 2
W random_expression(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3), idx(0, 3), len(0, 2), count(1, 3);
  W out;
  for (int t = count(rng); t > 0; --t) {
    W term = c(ParamScalar(coeff(rng)));
    for (int k = len(rng); k > 0; --k) term = term * W::momentum(idx(rng));
    for (int k = len(rng); k > 0; --k) term = term * W::position(idx(rng));
    out += term;
  }
  return out;
}

}  // namespace

TEST_CASE("canonical commutators") {
  CHECK(weyl_commutator(W::position(0), W::momentum(0)) == c(-ih()));
  CHECK(weyl_commutator(W::position(2), W::momentum(2)) == c(ih()));
  CHECK(weyl_commutator(W::position(1), W::momentum(2)).is_zero());
  CHECK(weyl_commutator(W::momentum(1), W::momentum(2)).is_zero());
  CHECK(weyl_commutator(W::position(1), W::position(3)).is_zero());

  LinearForm arg = LinearForm::single(0, P(Param::alpha));
  W cosine(MomentumFunction::atom(Trans::cos, arg));
  W sine(MomentumFunction::atom(Trans::sin, arg));
  CHECK(weyl_commutator(W::position(0), cosine) == c(ih() * P(Param::alpha)) * sine);
}

TEST_CASE("normal ordering") {
  // x p = p x + i hbar g
  W xp = W::position(1) * W::momentum(1);
  CHECK(xp == W::momentum(1) * W::position(1) + c(ih()));
  CHECK((W::position(1) * W::momentum(2)).str() == "ph2*xh1");
  W x2p2 = W::position(3) * W::position(3) * W::momentum(3) * W::momentum(3);
  // x^2 p^2 = p^2 x^2 + 4 i hbar p x - 2 hbar^2
  W want = W::momentum(3) * W::momentum(3) * W::position(3) * W::position(3) +
           c(ParamScalar(4) * ih()) * W::momentum(3) * W::position(3) +
           c(ParamScalar(2) * ih() * ih());
  CHECK(x2p2 == want);
}

TEST_CASE("lie properties on random triples") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    W a = random_expression(rng), b = random_expression(rng), d = random_expression(rng);
    CHECK((weyl_commutator(a, b) + weyl_commutator(b, a)).is_zero());
    CHECK(weyl_commutator(a, b + d) == weyl_commutator(a, b) + weyl_commutator(a, d));
    W jac = weyl_commutator(a, weyl_commutator(b, d)) + weyl_commutator(b, weyl_commutator(d, a)) +
            weyl_commutator(d, weyl_commutator(a, b));
    CHECK(jac.is_zero());
    CHECK((a * b) * d == a * (b * d));
  }
}

TEST_CASE("realizations reproduce the relation tables") {
  for (auto preset : {"iso2", "iso11", "canonical"}) {
    CAPTURE(preset);
    Report r = verify_realization(preset);
    CHECK(r.pass);
    CHECK(r.residual == "0");
    CHECK(r.notes.size() == 28);
  }
  CHECK(verify_realization("iso2", ParamScalar(GaussRational::frac(1, 2))).pass);
  CHECK(verify_realization("iso11", ParamScalar(3)).pass);
  CHECK_THROWS_AS(realize("iso3"), std::invalid_argument);
}

TEST_CASE("zero deformation is the identity map") {
  for (auto preset : {"iso2", "iso11"}) {
    Realization r = realize(preset, ParamScalar{});
    for (const auto& [g, img] : r.images) {
      W want = g.kind == PhaseGenerator::x ? W::position(g.index) : W::momentum(g.index);
      CHECK(img == want);
    }
    CHECK(verify_realization(preset, ParamScalar{}).pass);
  }
}

TEST_CASE("realization images") {
  Realization r = realize("iso2");
  CHECK(r.images.at({PhaseGenerator::x, 1}).str() == "-sin(alpha*ph0)*xh2 + cos(alpha*ph0)*xh1");
  CHECK(r.images.at({PhaseGenerator::x, 0}).str() == "-alpha*ph1*xh2 + alpha*ph2*xh1 + xh0");
}

TEST_CASE("a wrong realization is caught") {
  Realization r = realize("iso2");
  // dropping the rotation of x2 breaks [x0, x2]
  W broken = W::position(2);
  W lhs = weyl_commutator(r.images.at({PhaseGenerator::x, 0}), broken);
  PhaseValue v = relation_table("iso2").value({PhaseGenerator::x, 0}, {PhaseGenerator::x, 2});
  CHECK_FALSE((lhs - r.image(v)).expand(8).is_zero());
}

TEST_CASE("determinant identities") {
  CHECK(rotation_determinant_defect(8).is_zero());
  CHECK(boost_determinant_defect(8).is_zero());
}
