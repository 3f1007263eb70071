#include <random>
#include <vector>

#include "doctest.h"
#include "twistforge/algebra.hpp"
#include "twistforge/errors.hpp"

using namespace twistforge;

namespace {

using G = Generator;

AlgebraElement gen(G g) { return AlgebraElement::generator(g); }
ParamScalar I() { return ParamScalar::i(); }

// naive rewriting: always fix the leftmost descent, no memo
AlgebraElement oracle_order(std::vector<G> w, const Convention& conv) {
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    if (w[k] <= w[k + 1]) continue;
    std::vector<G> swapped = w;
    std::swap(swapped[k], swapped[k + 1]);
    AlgebraElement out = oracle_order(swapped, conv);
    for (const auto& [g, c] : bracket_generators(w[k], w[k + 1], conv)) {
      std::vector<G> shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
      shorter.push_back(g);
      shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 2, w.end());
      out += ParamScalar(c) * oracle_order(shorter, conv);
    }
    return out;
  }
  Word word;
  for (G g : w) word.push_back(encode(g));
  return AlgebraElement::ordered_word(word);
}

std::vector<Convention> all_conventions() { return {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}; }

AlgebraElement random_element(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> pick(0, kGeneratorCount - 1), len(0, max_len), coef(-2, 2);
  AlgebraElement x;
  for (int t = 0; t < 3; ++t) {
    std::vector<G> w(static_cast<std::size_t>(len(rng)));
    for (auto& g : w) g = static_cast<G>(pick(rng));
    x += ParamScalar(coef(rng)) * normal_order(w);
  }
  return x;
}

}  // namespace

TEST_CASE("bracket examples") {
  CHECK(bracket(gen(G::P0), gen(G::P3)).is_zero());
  CHECK(bracket(gen(G::M3), gen(G::P1)) == I() * gen(G::P2));
  CHECK(bracket(gen(G::N3), gen(G::P0)) == I() * gen(G::P3));
  CHECK(bracket(gen(G::N1), gen(G::N2)) == -I() * gen(G::M3));
}

TEST_CASE("normal ordering examples") {
  std::vector<G> w1{G::P1, G::P0};
  CHECK(normal_order(w1) == AlgebraElement::ordered_word(Word{encode(G::P0), encode(G::P1)}));
  std::vector<G> w2{G::M3, G::P1};
  CHECK(normal_order(w2) == AlgebraElement::ordered_word(Word{encode(G::P1), encode(G::M3)}) + I() * gen(G::P2));
  CHECK(normal_order(std::vector<G>{}) == AlgebraElement::unit());
}

TEST_CASE("jacobi holds for every convention") {
  for (const auto& conv : all_conventions()) {
    int failures = 0;
    for (int a = 0; a < kGeneratorCount; ++a)
      for (int b = a + 1; b < kGeneratorCount; ++b)
        for (int c = b + 1; c < kGeneratorCount; ++c) {
          auto x = gen(static_cast<G>(a)), y = gen(static_cast<G>(b)), z = gen(static_cast<G>(c));
          auto j = bracket(x, bracket(y, z, conv), conv) + bracket(y, bracket(z, x, conv), conv) +
                   bracket(z, bracket(x, y, conv), conv);
          if (!j.is_zero()) ++failures;
        }
    CHECK_MESSAGE(failures == 0, conv.str());
  }
}

TEST_CASE("normal ordering is confluent and idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, kGeneratorCount - 1), len(0, 5);
  for (const auto& conv : all_conventions()) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<G> w(static_cast<std::size_t>(len(rng)));
      for (auto& g : w) g = static_cast<G>(pick(rng));
      auto n = normal_order(w, conv);
      CHECK(n == oracle_order(w, conv));
      CHECK(multiply(n, AlgebraElement::unit(), conv) == n);
    }
  }
}

TEST_CASE("associativity of the product") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(rng, 2), b = random_element(rng, 2), c = random_element(rng, 2);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
  }
}

TEST_CASE("primitive coproduct and counit") {
  auto d = coproduct0(gen(G::P1));
  CHECK(d == TensorElement::product({gen(G::P1), AlgebraElement::unit()}) +
                 TensorElement::product({AlgebraElement::unit(), gen(G::P1)}));
  CHECK(counit(gen(G::M3)).is_zero());
  CHECK(counit(AlgebraElement::unit()) == ParamScalar(1));
  // (eps (x) id) D = id
  CHECK(d.counit_on_leg(0) == TensorElement::product({gen(G::P1)}));
}

TEST_CASE("coproduct is coassociative and multiplicative") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_element(rng, 3);
    auto d = coproduct0(x);
    CHECK(d.coproduct_on_leg(0) == d.coproduct_on_leg(1));
    auto y = random_element(rng, 2);
    CHECK(coproduct0(multiply(x, y)) == tensor_mul(d, coproduct0(y)));
  }
}

TEST_CASE("tensor multiplication") {
  auto one = AlgebraElement::unit();
  auto a = TensorElement::product({gen(G::P0), one});
  auto b = TensorElement::product({one, gen(G::P1)});
  CHECK(tensor_mul(a, b) == TensorElement::product({gen(G::P0), gen(G::P1)}));
  auto m = TensorElement::product({gen(G::M3), one});
  auto p = TensorElement::product({gen(G::P1), one});
  CHECK(tensor_mul(m, p) == TensorElement::product({multiply(gen(G::M3), gen(G::P1)), one}));
  CHECK(multiply(gen(G::M3), gen(G::P1)) ==
        AlgebraElement::ordered_word(Word{encode(G::P1), encode(G::M3)}) + I() * gen(G::P2));
  CHECK(tensor_mul(TensorElement::unit(2), m) == m);
  CHECK_THROWS_AS(tensor_mul(m, TensorElement::unit(3)), ArityMismatch);
}

TEST_CASE("tensor exponential inverts") {
  auto al = ParamScalar::param(Param::alpha);
  auto f = al * TensorElement::product({gen(G::M3), gen(G::P1)});
  auto e = tensor_exp(f, 4);
  auto einv = tensor_exp(-f, 4);
  CHECK(tensor_mul(e, einv) == TensorElement::unit(2, 4));
  CHECK_THROWS(tensor_exp(TensorElement::product({gen(G::M3), gen(G::P1)}), 4));
}
