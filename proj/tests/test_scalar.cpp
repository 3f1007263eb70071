#include <random>

#include "doctest.h"
#include "twistforge/errors.hpp"
#include "twistforge/scalar.hpp"

using namespace twistforge;

namespace {

ParamScalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kParamCount) - 1);
  ParamScalar s;
  for (int t = 0; t < 3; ++t) {
    ParamScalar term(GaussRational(Rational(small(rng), 1 + std::abs(small(rng))), Rational(small(rng))));
    for (int k = 0; k < 2; ++k) term *= ParamScalar::param(static_cast<Param>(pick(rng)));
    s += term;
  }
  return s;
}

}  // namespace

TEST_CASE("unit arithmetic") {
  ParamScalar i = ParamScalar::i();
  CHECK(i * -i == ParamScalar(1));
  CHECK((ParamScalar::param(Param::hbar) * ParamScalar(0)).is_zero());
  ParamScalar d = ParamScalar::param(Param::delta0_m) + ParamScalar::i() * ParamScalar::param(Param::delta3_m);
  CHECK(d.conj() == ParamScalar::param(Param::delta0_m) - ParamScalar::i() * ParamScalar::param(Param::delta3_m));
}

TEST_CASE("rendering is canonical") {
  ParamScalar s = ParamScalar(2) * ParamScalar::i() * ParamScalar::param(Param::hbar) *
                  ParamScalar::param(Param::delta0_m);
  CHECK(s.str() == "2*i*hbar*delta0m");
  ParamScalar t = ParamScalar(1) - ParamScalar(GaussRational::frac(1, 2)) * ParamScalar::param(Param::alpha, 2);
  CHECK(t.str() == "1 - 1/2*alpha^2");
  CHECK(ParamScalar(-1).str() == "-1");
  CHECK((-ParamScalar::i()).str() == "-i");
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    ParamScalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(a.conj().conj() == a);
  }
}

TEST_CASE("truncation order travels with values") {
  ParamScalar a = (ParamScalar(1) + ParamScalar::param(Param::alpha)).truncated(2);
  ParamScalar sq = a * a * a;
  CHECK(sq.max_deformation_degree() == 2);
  CHECK(sq.order() == 2);
  ParamScalar b = ParamScalar::param(Param::beta).truncated(3);
  CHECK_THROWS_AS(a * b, TruncationMismatch);
  CHECK_THROWS_AS(a + b, TruncationMismatch);
  // exact values combine freely
  CHECK((a * ParamScalar(3)).order() == 2);
}

TEST_CASE("hbar does not count towards deformation degree") {
  ParamScalar h = ParamScalar::param(Param::hbar, 3) * ParamScalar::param(Param::alpha);
  CHECK(h.truncated(1) == h);
  CHECK(h.truncated(0).is_zero());
}

TEST_CASE("substitution and evaluation") {
  ParamScalar s = ParamScalar::param(Param::delta0_m) * ParamScalar::param(Param::hbar);
  auto sub = s.substitute({{Param::delta0_m, ParamScalar::param(Param::alpha)}});
  CHECK(sub.str() == "hbar*alpha");
  auto v = sub.evaluate({{Param::hbar, 1.0}, {Param::alpha, 0.5}});
  CHECK(v.real() == doctest::Approx(0.5));
  CHECK_THROWS(s.evaluate({}));
}

TEST_CASE("parameter names round-trip") {
  for (std::size_t k = 0; k < kParamCount; ++k) {
    auto p = static_cast<Param>(k);
    CHECK(param_from_name(param_name(p)) == p);
  }
  CHECK_FALSE(param_from_name("omega").has_value());
}
