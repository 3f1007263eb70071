#include "twistforge/algebra.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <tuple>
#include <unordered_map>

#include "twistforge/errors.hpp"

namespace twistforge {

namespace {

constexpr std::array<std::string_view, kGeneratorCount> kGeneratorNames = {
    "P0", "P1", "P2", "P3", "M1", "M2", "M3", "N1", "N2", "N3"};

enum class Family { P, M, N };

Family family_of(Generator g) {
  int k = static_cast<int>(g);
  if (k < 4) return Family::P;
  if (k < 7) return Family::M;
  return Family::N;
}

// spatial index 1..3 for M, N, P1..P3; 0 for P0
int index_of(Generator g) {
  int k = static_cast<int>(g);
  if (k < 4) return k;
  if (k < 7) return k - 3;
  return k - 6;
}

Generator make(Family f, int idx) {
  switch (f) {
    case Family::P: return static_cast<Generator>(idx);
    case Family::M: return static_cast<Generator>(idx + 3);
    case Family::N: return static_cast<Generator>(idx + 6);
  }
  return Generator::P0;
}

int levi(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // cyclic permutations of (1,2,3) are even
  if ((i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1)) return 1;
  return -1;
}

int third(int i, int j) { return 6 - i - j; }

// bracket for a canonical pair ordering; returns false when it must be
// obtained from the swapped pair.
bool bracket_direct(Generator a, Generator b, const Convention& c, LinearCombination& out) {
  const Family fa = family_of(a), fb = family_of(b);
  const int i = index_of(a), j = index_of(b);
  const GaussRational si = GaussRational(Rational(0), Rational(c.sigma));
  const GaussRational sni = GaussRational(Rational(0), Rational(c.sigma * c.nu));
  if (fa == Family::P && fb == Family::P) return true;
  if (fa == Family::M && (fb == Family::M || fb == Family::N)) {
    if (i == j) return true;
    int k = third(i, j);
    out.emplace_back(make(fb, k), si * GaussRational(levi(i, j, k)));
    return true;
  }
  if (fa == Family::N && fb == Family::N) {
    if (i == j) return true;
    int k = third(i, j);
    out.emplace_back(make(Family::M, k), -si * GaussRational(levi(i, j, k)));
    return true;
  }
  if (fa == Family::M && fb == Family::P) {
    if (j == 0 || i == j) return true;
    int k = third(i, j);
    out.emplace_back(make(Family::P, k), si * GaussRational(levi(i, j, k)));
    return true;
  }
  if (fa == Family::N && fb == Family::P) {
    if (j == 0) out.emplace_back(make(Family::P, i), sni);
    else if (i == j) out.emplace_back(Generator::P0, sni);
    return true;
  }
  return false;
}

using WordCombination = std::vector<std::pair<Word, GaussRational>>;

struct OrderCache {
  Convention conv;
  std::unordered_map<Word, WordCombination> memo;
};

OrderCache& cache_for(const Convention& conv) {
  thread_local std::vector<OrderCache> caches;
  for (auto& c : caches)
    if (c.conv == conv) return c;
  caches.push_back(OrderCache{conv, {}});
  return caches.back();
}

void accumulate(std::map<Word, GaussRational>& acc, const WordCombination& part, const GaussRational& scale) {
  for (const auto& [w, c] : part) {
    auto [it, inserted] = acc.try_emplace(w, c * scale);
    if (!inserted) it->second += c * scale;
  }
}

const WordCombination& order_word(const Word& word, OrderCache& cache) {
  auto found = cache.memo.find(word);
  if (found != cache.memo.end()) return found->second;
  std::size_t descent = word.size();
  for (std::size_t k = 0; k + 1 < word.size(); ++k) {
    if (word[k] > word[k + 1]) {
      descent = k;
      break;
    }
  }
  WordCombination result;
  if (descent == word.size()) {
    result.emplace_back(word, GaussRational(1));
  } else {
    std::map<Word, GaussRational> acc;
    Word swapped = word;
    std::swap(swapped[descent], swapped[descent + 1]);
    accumulate(acc, order_word(swapped, cache), GaussRational(1));
    for (const auto& [g, coef] : bracket_generators(decode(word[descent]), decode(word[descent + 1]), cache.conv)) {
      Word reduced = word.substr(0, descent) + encode(g) + word.substr(descent + 2);
      accumulate(acc, order_word(reduced, cache), coef);
    }
    for (auto& [w, c] : acc)
      if (!c.is_zero()) result.emplace_back(w, std::move(c));
  }
  return cache.memo.emplace(word, std::move(result)).first->second;
}

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

}  // namespace

std::string_view generator_name(Generator g) { return kGeneratorNames[static_cast<std::size_t>(g)]; }

std::string Convention::str() const {
  return "sigma=" + std::to_string(sigma) + ",nu=" + std::to_string(nu);
}

LinearCombination bracket_generators(Generator a, Generator b, const Convention& conv) {
  LinearCombination out;
  if (a == b) return out;
  if (bracket_direct(a, b, conv, out)) return out;
  LinearCombination swapped;
  bracket_direct(b, a, conv, swapped);
  for (auto& [g, c] : swapped) out.emplace_back(g, -c);
  return out;
}

// ---------------------------------------------------------------------------

AlgebraElement::AlgebraElement(ParamScalar c) {
  if (!c.is_zero()) terms_.emplace(Word{}, std::move(c));
}

AlgebraElement AlgebraElement::generator(Generator g) { return ordered_word(Word(1, encode(g))); }

AlgebraElement AlgebraElement::ordered_word(const Word& w, ParamScalar c) {
  AlgebraElement x;
  x.add(w, c);
  return x;
}

void AlgebraElement::add(const Word& w, const ParamScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

int AlgebraElement::max_word_length() const {
  int d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

bool AlgebraElement::translation_only() const {
  for (const auto& [w, c] : terms_)
    for (char ch : w)
      if (!is_momentum(decode(ch))) return false;
  return true;
}

AlgebraElement AlgebraElement::truncated(int order) const {
  AlgebraElement r;
  for (const auto& [w, c] : terms_) r.add(w, c.truncated(order));
  return r;
}

AlgebraElement AlgebraElement::dagger(const Convention& conv) const {
  AlgebraElement r;
  for (const auto& [w, c] : terms_) {
    std::vector<Generator> rev;
    for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back(decode(*it));
    r += c.conj() * normal_order(rev, conv);
  }
  return r;
}

AlgebraElement AlgebraElement::substitute(const std::map<Param, ParamScalar>& values) const {
  AlgebraElement r;
  for (const auto& [w, c] : terms_) r.add(w, c.substitute(values));
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) { return *this += -o; }

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r = *this;
  for (auto& [w, c] : r.terms_) c = -c;
  return r;
}

AlgebraElement operator*(const ParamScalar& s, const AlgebraElement& x) {
  AlgebraElement r;
  for (const auto& [w, c] : x.terms_) r.add(w, s * c);
  return r;
}

std::string render_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size();) {
    std::size_t run = 1;
    while (k + run < w.size() && w[k + run] == w[k]) ++run;
    if (!s.empty()) s += "*";
    s += generator_name(decode(w[k]));
    if (run > 1) s += "^" + std::to_string(run);
    k += run;
  }
  return s;
}

namespace {

std::string render_terms(const std::map<std::string, ParamScalar>& terms,
                         const std::function<std::string(const std::string&)>& key_str) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    std::string mono = key_str(k);
    bool neg = false;
    std::string body;
    if (c.terms().size() == 1) {
      body = c.str();
      if (body[0] == '-') {
        neg = true;
        body.erase(0, 1);
      }
    } else {
      body = c.factor_str();
    }
    if (mono != "1") body = (body == "1") ? mono : body + "*" + mono;
    else if (c.terms().size() > 1) body = c.factor_str();
    if (first) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

}  // namespace

std::string AlgebraElement::str() const { return render_terms(terms_, render_word); }

AlgebraElement normal_order(std::span<const Generator> word, const Convention& conv) {
  Word w;
  for (auto g : word) w.push_back(encode(g));
  AlgebraElement r;
  for (const auto& [out, c] : order_word(w, cache_for(conv))) r += AlgebraElement::ordered_word(out, ParamScalar(c));
  return r;
}

const std::vector<std::pair<Word, GaussRational>>& word_product(const Word& a, const Word& b,
                                                                const Convention& conv) {
  return order_word(a + b, cache_for(conv));
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const Convention& conv) {
  AlgebraElement r;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      ParamScalar c = ca * cb;
      if (c.is_zero()) continue;
      for (const auto& [w, k] : word_product(wa, wb, conv)) r += AlgebraElement::ordered_word(w, c * ParamScalar(k));
    }
  return r;
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b, const Convention& conv) {
  return multiply(a, b, conv) - multiply(b, a, conv);
}

ParamScalar counit(const AlgebraElement& x) {
  auto it = x.terms().find(Word{});
  return it == x.terms().end() ? ParamScalar{} : it->second;
}

AlgebraElement combo_plus_minus(char family, int sign) {
  Family f = family == 'M' ? Family::M : family == 'N' ? Family::N : Family::P;
  return AlgebraElement::generator(make(f, 1)) +
         ParamScalar(GaussRational(Rational(0), Rational(sign))) * AlgebraElement::generator(make(f, 2));
}

// ---------------------------------------------------------------------------

std::vector<Word> TensorElement::split(const std::string& key) {
  std::vector<Word> legs(1);
  for (char c : key) {
    if (c == '|') legs.emplace_back();
    else legs.back().push_back(c);
  }
  return legs;
}

std::string TensorElement::join(const std::vector<Word>& legs) {
  std::string key;
  for (std::size_t k = 0; k < legs.size(); ++k) {
    if (k) key.push_back('|');
    key += legs[k];
  }
  return key;
}

TensorElement TensorElement::unit(int arity, std::optional<int> order) {
  ParamScalar one(1);
  if (order) one = one.truncated(*order);
  return pure(std::vector<Word>(static_cast<std::size_t>(arity)), one);
}

TensorElement TensorElement::pure(const std::vector<Word>& legs, ParamScalar c) {
  TensorElement t(static_cast<int>(legs.size()));
  t.add(join(legs), c);
  return t;
}

TensorElement TensorElement::product(const std::vector<AlgebraElement>& legs) {
  TensorElement t(static_cast<int>(legs.size()));
  std::vector<std::pair<std::vector<Word>, ParamScalar>> partial{{{}, ParamScalar(1)}};
  for (const auto& leg : legs) {
    std::vector<std::pair<std::vector<Word>, ParamScalar>> next;
    for (const auto& [ws, c] : partial)
      for (const auto& [w, lc] : leg.terms()) {
        auto nws = ws;
        nws.push_back(w);
        next.emplace_back(std::move(nws), c * lc);
      }
    partial = std::move(next);
  }
  for (const auto& [ws, c] : partial) t.add(join(ws), c);
  return t;
}

void TensorElement::add(const std::string& key, const ParamScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::optional<int> TensorElement::order() const {
  for (const auto& [k, c] : terms_)
    if (c.order()) return c.order();
  return std::nullopt;
}

int TensorElement::min_deformation_degree() const {
  int d = 1 << 20;
  for (const auto& [k, c] : terms_) d = std::min(d, c.min_deformation_degree());
  return terms_.empty() ? 0 : d;
}

TensorElement TensorElement::truncated(int order) const {
  TensorElement r(arity_);
  for (const auto& [k, c] : terms_) r.add(k, c.truncated(order));
  return r;
}

TensorElement TensorElement::dagger(const Convention& conv) const {
  TensorElement r(arity_);
  for (const auto& [k, c] : terms_) {
    std::vector<AlgebraElement> legs;
    for (const auto& w : split(k)) {
      std::vector<Generator> rev;
      for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back(decode(*it));
      legs.push_back(normal_order(rev, conv));
    }
    legs[0] = c.conj() * legs[0];
    r += product(legs);
  }
  return r;
}

TensorElement TensorElement::coproduct_on_leg(int k) const {
  TensorElement r(arity_ + 1);
  for (const auto& [key, c] : terms_) {
    auto legs = split(key);
    const Word& w = legs[static_cast<std::size_t>(k)];
    // runs of equal generators: g^m -> sum_j C(m,j) g^j (x) g^(m-j)
    std::vector<std::pair<char, int>> runs;
    for (char ch : w) {
      if (!runs.empty() && runs.back().first == ch) ++runs.back().second;
      else runs.emplace_back(ch, 1);
    }
    std::vector<std::tuple<Word, Word, Rational>> splits{{Word{}, Word{}, Rational(1)}};
    for (const auto& [ch, m] : runs) {
      std::vector<std::tuple<Word, Word, Rational>> next;
      for (const auto& [l, rr, coef] : splits)
        for (int j = 0; j <= m; ++j)
          next.emplace_back(l + Word(static_cast<std::size_t>(j), ch), rr + Word(static_cast<std::size_t>(m - j), ch),
                            coef * binomial(m, j));
      splits = std::move(next);
    }
    for (const auto& [l, rr, coef] : splits) {
      std::vector<Word> out;
      for (int q = 0; q < arity_; ++q) {
        if (q == k) {
          out.push_back(l);
          out.push_back(rr);
        } else {
          out.push_back(legs[static_cast<std::size_t>(q)]);
        }
      }
      r.add(join(out), c * ParamScalar(GaussRational(coef)));
    }
  }
  return r;
}

TensorElement TensorElement::counit_on_leg(int k) const {
  TensorElement r(arity_ - 1);
  for (const auto& [key, c] : terms_) {
    auto legs = split(key);
    if (!legs[static_cast<std::size_t>(k)].empty()) continue;
    legs.erase(legs.begin() + k);
    r.add(join(legs), c);
  }
  return r;
}

TensorElement TensorElement::insert_unit(int k) const {
  TensorElement r(arity_ + 1);
  for (const auto& [key, c] : terms_) {
    auto legs = split(key);
    legs.insert(legs.begin() + k, Word{});
    r.add(join(legs), c);
  }
  return r;
}

TensorElement TensorElement::substitute(const std::map<Param, ParamScalar>& values) const {
  TensorElement r(arity_);
  for (const auto& [k, c] : terms_) r.add(k, c.substitute(values));
  return r;
}

bool TensorElement::translation_only() const {
  for (const auto& [k, c] : terms_)
    for (char ch : k)
      if (ch != '|' && !is_momentum(decode(ch))) return false;
  return true;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (o.arity_ != arity_) throw ArityMismatch("tensor arity mismatch");
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) { return *this += -o; }

TensorElement TensorElement::operator-() const {
  TensorElement r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

TensorElement operator*(const ParamScalar& s, const TensorElement& t) {
  TensorElement r(t.arity_);
  for (const auto& [k, c] : t.terms_) r.add(k, s * c);
  return r;
}

std::string TensorElement::str(bool ascii) const {
  const std::string sep = ascii ? " (x) " : " ⊗ ";
  return render_terms(terms_, [&](const std::string& key) {
    std::string s;
    auto legs = split(key);
    for (std::size_t q = 0; q < legs.size(); ++q) {
      if (q) s += sep;
      s += render_word(legs[q]);
    }
    if (s.find_first_not_of("1 (x)⊗") == std::string::npos) return std::string("1");
    return legs.size() > 1 ? "(" + s + ")" : s;
  });
}

TensorElement tensor_mul(const TensorElement& s, const TensorElement& t, const Convention& conv) {
  if (s.arity_ != t.arity_) throw ArityMismatch("tensor_mul: arity " + std::to_string(s.arity_) + " vs " +
                                                std::to_string(t.arity_));
  std::optional<int> order = s.order();
  if (auto o = t.order()) {
    if (order && *order != *o) throw TruncationMismatch("tensor_mul: truncation order mismatch");
    order = o;
  }
  struct Split {
    std::vector<Word> legs;
    const ParamScalar* coeff;
    int degree;
  };
  auto prepare = [](const TensorElement& x) {
    std::vector<Split> out;
    out.reserve(x.terms_.size());
    for (const auto& [k, c] : x.terms_) out.push_back({TensorElement::split(k), &c, c.min_deformation_degree()});
    return out;
  };
  const auto left = prepare(s), right = prepare(t);
  const std::size_t arity = static_cast<std::size_t>(s.arity_);

  std::unordered_map<std::string, ScalarBuilder> acc;
  std::vector<std::pair<std::string, GaussRational>> partial, next;
  for (const auto& a : left) {
    for (const auto& b : right) {
      if (order && a.degree + b.degree > *order) continue;
      ParamScalar coeff = *a.coeff * *b.coeff;
      if (coeff.is_zero()) continue;
      partial.assign(1, {std::string{}, GaussRational(1)});
      for (std::size_t q = 0; q < arity; ++q) {
        const auto& prod = word_product(a.legs[q], b.legs[q], conv);
        next.clear();
        for (const auto& [key, k] : partial)
          for (const auto& [w, kk] : prod) next.emplace_back(q ? key + '|' + w : w, k * kk);
        std::swap(partial, next);
      }
      for (const auto& [key, k] : partial) {
        auto& builder = acc[key];
        builder.order = order;
        for (const auto& [m, cc] : coeff.terms()) builder.add(m, cc * k);
      }
    }
  }
  TensorElement r(s.arity_);
  for (auto& [key, builder] : acc) {
    ParamScalar c = builder.build();
    if (!c.is_zero()) r.terms_.emplace(key, std::move(c));
  }
  return r;
}

TensorElement coproduct0(const AlgebraElement& x) {
  TensorElement one(1);
  for (const auto& [w, c] : x.terms()) one += TensorElement::pure({w}, c);
  return one.coproduct_on_leg(0);
}

TensorElement tensor_exp(const TensorElement& f, int n, const Convention& conv) {
  if (!f.is_zero() && f.min_deformation_degree() < 1)
    throw std::invalid_argument("tensor_exp: exponent has a part of deformation order 0");
  TensorElement fn = f.truncated(n);
  TensorElement sum = TensorElement::unit(f.arity(), n);
  TensorElement power = TensorElement::unit(f.arity(), n);
  Rational factorial(1);
  for (int k = 1; k <= n; ++k) {
    power = tensor_mul(power, fn, conv);
    if (power.is_zero()) break;
    factorial *= k;
    sum += ParamScalar(GaussRational(Rational(1) / factorial)) * power;
  }
  return sum;
}

}  // namespace twistforge
