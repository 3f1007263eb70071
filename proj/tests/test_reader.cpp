#include "doctest.h"
#include "twistforge/reader.hpp"

using namespace twistforge;

namespace {

ParamScalar P(Param p) { return ParamScalar::param(p); }

void round_trip(const RelationTable& t) {
  for (const auto& e : t.entries) {
    CAPTURE(e.value.str());
    CHECK(parse_phase_value(e.value.str()) == e.value);
  }
}

}  // namespace

TEST_CASE("reader basics") {
  CHECK(parse_scalar("2*i*hbar*alpha") == ParamScalar(2) * ParamScalar::i() * P(Param::hbar) * P(Param::alpha));
  CHECK(parse_scalar("-3/2*alpha^2") == ParamScalar(GaussRational::frac(-3, 2)) * P(Param::alpha) * P(Param::alpha));
  CHECK(parse_scalar("(delta0p + delta0m)") == P(Param::delta0_p) + P(Param::delta0_m));
  CHECK(parse_scalar("0").is_zero());
  CHECK(parse_scalar("0.25") == ParamScalar(GaussRational::frac(1, 4)));
  CHECK(parse_scalar("1.5*beta") == ParamScalar(GaussRational::frac(3, 2)) * P(Param::beta));
  CHECK_THROWS_AS(parse_scalar("1."), ParseError);
  LinearForm a = LinearForm::single(0, P(Param::alpha));
  CHECK(parse_momentum_function("-i*hbar*cos(alpha*p0)") ==
        (-ParamScalar::i() * P(Param::hbar)) * MomentumFunction::atom(Trans::cos, a));
  CHECK(parse_phase_value("2*i*hbar*alpha*x2") ==
        PhaseValue::coordinate(2, ParamScalar(2) * ParamScalar::i() * P(Param::hbar) * P(Param::alpha)));
}

TEST_CASE("reader errors") {
  CHECK_THROWS_AS(parse_phase_value("x1*x2"), ParseError);
  CHECK_THROWS_AS(parse_phase_value("cos(x1)"), ParseError);
  CHECK_THROWS_AS(parse_phase_value("cos(p1*p2)"), ParseError);
  CHECK_THROWS_AS(parse_phase_value("gamma7"), ParseError);
  CHECK_THROWS_AS(parse_phase_value("2*(alpha"), ParseError);
  CHECK_THROWS_AS(parse_phase_value("alpha/p0"), ParseError);
  CHECK_THROWS_AS(parse_scalar("alpha*p1"), ParseError);
  try {
    parse_phase_value("alpha + $");
  } catch (const ParseError& e) {
    CHECK(e.position == 8);
  }
}

TEST_CASE("every emitted relation parses back") {
  for (auto preset : {"iso2", "iso11", "canonical"}) round_trip(relation_table(preset));
  round_trip(relation_table(TwistSpec::simplified(TwistCase::i, 4)));
  round_trip(relation_table(TwistSpec::simplified(TwistCase::ii, 4)));
  TwistSpec g = TwistSpec::generic(TwistCase::i, 3);
  g.assignment[Param::alpha_p] = ParamScalar{};
  round_trip(relation_table(g));
  TwistSpec h = TwistSpec::generic(TwistCase::ii, 3);
  h.assignment[Param::gamma_p] = ParamScalar{};
  round_trip(relation_table(h));
}
