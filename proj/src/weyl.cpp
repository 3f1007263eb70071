#include "twistforge/weyl.hpp"

#include <stdexcept>

namespace twistforge {

const VariableNames kHatMomenta = {"ph0", "ph1", "ph2", "ph3"};

WeylExpression::WeylExpression(MomentumFunction f) { add(XWord{}, f); }

WeylExpression WeylExpression::position(int mu) {
  XWord w{};
  w[static_cast<std::size_t>(mu)] = 1;
  return term(MomentumFunction(ParamScalar(1)), w);
}

WeylExpression WeylExpression::momentum(int mu) { return WeylExpression(MomentumFunction::momentum(mu)); }

WeylExpression WeylExpression::term(const MomentumFunction& f, const XWord& w) {
  WeylExpression e;
  e.add(w, f);
  return e;
}

void WeylExpression::add(const XWord& w, const MomentumFunction& f) {
  if (f.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) terms_.erase(it);
}

int WeylExpression::x_degree() const {
  int d = 0;
  for (const auto& [w, f] : terms_) d = std::max(d, w[0] + w[1] + w[2] + w[3]);
  return d;
}

WeylExpression WeylExpression::expand(int n) const {
  WeylExpression r;
  for (const auto& [w, f] : terms_) r.add(w, f.expand(n));
  return r;
}

WeylExpression WeylExpression::substitute(const std::map<Param, ParamScalar>& values) const {
  WeylExpression r;
  for (const auto& [w, f] : terms_) r.add(w, f.substitute(values));
  return r;
}

WeylExpression& WeylExpression::operator+=(const WeylExpression& o) {
  for (const auto& [w, f] : o.terms_) add(w, f);
  return *this;
}

WeylExpression& WeylExpression::operator-=(const WeylExpression& o) {
  for (const auto& [w, f] : o.terms_) add(w, -f);
  return *this;
}

WeylExpression WeylExpression::operator-() const {
  WeylExpression r;
  for (const auto& [w, f] : terms_) r.terms_.emplace(w, -f);
  return r;
}

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// xh^a G = sum_k prod C(a,k) (i hbar g)^k d^k G xh^(a-k)
std::vector<std::pair<WeylExpression::XWord, MomentumFunction>> move_past(const WeylExpression::XWord& a,
                                                                         const MomentumFunction& g) {
  std::vector<std::pair<WeylExpression::XWord, MomentumFunction>> out{{WeylExpression::XWord{}, g}};
  for (std::size_t mu = 0; mu < 4; ++mu) {
    if (a[mu] == 0) continue;
    ParamScalar c = ParamScalar::i() * ParamScalar::param(Param::hbar) * ParamScalar(metric(static_cast<int>(mu)));
    std::vector<std::pair<WeylExpression::XWord, MomentumFunction>> next;
    for (const auto& [w, f] : out) {
      MomentumFunction d = f;
      ParamScalar ck(1);
      for (int k = 0; k <= a[mu]; ++k) {
        if (d.is_zero()) break;
        auto nw = w;
        nw[mu] = static_cast<std::uint8_t>(a[mu] - k);
        next.emplace_back(nw, ParamScalar(binomial(a[mu], k)) * ck * d);
        d = d.diff(static_cast<int>(mu));
        ck = ck * c;
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

WeylExpression operator*(const WeylExpression& a, const WeylExpression& b) {
  WeylExpression r;
  for (const auto& [wa, fa] : a.terms_)
    for (const auto& [wb, fb] : b.terms_)
      for (const auto& [w, g] : move_past(wa, fb)) {
        WeylExpression::XWord sum{};
        for (std::size_t k = 0; k < 4; ++k) sum[k] = static_cast<std::uint8_t>(w[k] + wb[k]);
        r.add(sum, fa * g);
      }
  return r;
}

std::string WeylExpression::str() const {
  std::vector<std::pair<std::string, ParamScalar>> pieces;
  for (const auto& [w, f] : terms_) {
    std::string xs;
    for (std::size_t k = 0; k < 4; ++k) {
      if (w[k] == 0) continue;
      if (!xs.empty()) xs += "*";
      xs += "xh" + std::to_string(k);
      if (w[k] > 1) xs += "^" + std::to_string(w[k]);
    }
    for (const auto& [m, c] : f.terms()) {
      std::string mono = render_monomial(m, kHatMomenta);
      if (mono.empty()) mono = xs;
      else if (!xs.empty()) mono += "*" + xs;
      pieces.emplace_back(mono, c);
    }
  }
  return render_sum(pieces);
}

WeylExpression weyl_commutator(const WeylExpression& a, const WeylExpression& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

WeylExpression Realization::image(const PhaseValue& v) const {
  WeylExpression r(v.scalar);
  for (int l = 0; l < 4; ++l) {
    const MomentumFunction& f = v.x[static_cast<std::size_t>(l)];
    if (f.is_zero()) continue;
    r += WeylExpression(f) * images.at({PhaseGenerator::x, l});
  }
  return r;
}

Realization realize(std::string_view preset, std::optional<ParamScalar> parameter) {
  using W = WeylExpression;
  Realization r;
  r.preset = std::string(preset);
  auto x = [](int mu) { return W::position(mu); };
  auto p = [](int mu) { return W::momentum(mu); };
  for (int mu = 0; mu < 4; ++mu) {
    r.images[{PhaseGenerator::x, mu}] = x(mu);
    r.images[{PhaseGenerator::p, mu}] = p(mu);
  }
  if (preset == "canonical") return r;
  if (preset != "iso2" && preset != "iso11")
    throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (iso2, iso11, canonical)");
  bool euclid = preset == "iso2";
  r.parameter = parameter.value_or(ParamScalar::param(euclid ? Param::alpha : Param::beta));
  const ParamScalar& a = r.parameter;
  if (euclid) {
    // x0 = xh0 + a (xh1 ph2 - ph1 xh2); (x1, x2) rotated by a ph0
    LinearForm arg = LinearForm::single(0, a);
    W c(MomentumFunction::atom(Trans::cos, arg)), s(MomentumFunction::atom(Trans::sin, arg));
    r.images[{PhaseGenerator::x, 0}] = x(0) + W(MomentumFunction(a)) * (x(1) * p(2) - p(1) * x(2));
    r.images[{PhaseGenerator::x, 1}] = c * x(1) - s * x(2);
    r.images[{PhaseGenerator::x, 2}] = s * x(1) + c * x(2);
  } else {
    // x1 = xh1 + b (xh3 ph0 - ph3 xh0); (x0, x3) boosted by b ph1
    LinearForm arg = LinearForm::single(1, a);
    W ch(MomentumFunction::atom(Trans::cosh, arg)), sh(MomentumFunction::atom(Trans::sinh, arg));
    r.images[{PhaseGenerator::x, 1}] = x(1) + W(MomentumFunction(a)) * (x(3) * p(0) - p(3) * x(0));
    r.images[{PhaseGenerator::x, 0}] = ch * x(0) + sh * x(3);
    r.images[{PhaseGenerator::x, 3}] = sh * x(0) + ch * x(3);
  }
  return r;
}

Report verify_realization(std::string_view preset, std::optional<ParamScalar> parameter, int n) {
  Realization real = realize(preset, parameter);
  RelationTable table = relation_table(preset, 4);
  std::map<Param, ParamScalar> sub;
  if (parameter) sub[preset == "iso2" ? Param::alpha : Param::beta] = *parameter;

  std::vector<PhaseGenerator> gens;
  for (int k = 0; k < 4; ++k) gens.push_back({PhaseGenerator::x, k});
  for (int k = 0; k < 4; ++k) gens.push_back({PhaseGenerator::p, k});
  Report r{"realization " + std::string(preset), n, "0", true, {}};
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto &a = gens[i], &b = gens[j];
      WeylExpression lhs = weyl_commutator(real.images.at(a), real.images.at(b));
      PhaseValue v = table.value(a, b);
      if (!sub.empty()) v = v.substitute(sub);
      WeylExpression rhs = real.image(v);
      std::string label = "[" + a.name() + "," + b.name() + "]";
      if (lhs == rhs) {
        r.notes.push_back(label + ": match");
        continue;
      }
      WeylExpression diff = (lhs - rhs).expand(n);
      if (diff.is_zero()) {
        r.notes.push_back(label + ": match at order " + std::to_string(n));
        continue;
      }
      r.notes.push_back(label + ": mismatch " + diff.str());
      if (r.pass) r.residual = label + ": " + diff.str();
      r.pass = false;
    }
  return r;
}

namespace {

MomentumFunction square(const MomentumFunction& f) { return f * f; }

}  // namespace

MomentumFunction rotation_determinant_defect(int n) {
  LinearForm arg = LinearForm::single(0, ParamScalar::param(Param::alpha));
  auto c = MomentumFunction::atom(Trans::cos, arg), s = MomentumFunction::atom(Trans::sin, arg);
  return (square(c) + square(s) - MomentumFunction(ParamScalar(1))).expand(n);
}

MomentumFunction boost_determinant_defect(int n) {
  LinearForm arg = LinearForm::single(1, ParamScalar::param(Param::beta));
  auto c = MomentumFunction::atom(Trans::cosh, arg), s = MomentumFunction::atom(Trans::sinh, arg);
  return (square(c) - square(s) - MomentumFunction(ParamScalar(1))).expand(n);
}

}  // namespace twistforge
