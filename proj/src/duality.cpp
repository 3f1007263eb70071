#include "twistforge/duality.hpp"

#include <algorithm>
#include <sstream>

#include "twistforge/errors.hpp"

namespace twistforge {

std::optional<PhaseGenerator> PhaseGenerator::parse(std::string_view s) {
  if (s.size() != 2 || (s[0] != 'x' && s[0] != 'p') || s[1] < '0' || s[1] > '3') return std::nullopt;
  return PhaseGenerator{s[0] == 'x' ? x : p, s[1] - '0'};
}

// ---------------------------------------------------------------------------
// PhaseValue

PhaseValue PhaseValue::coordinate(int lambda, ParamScalar c) {
  PhaseValue v;
  v.x[static_cast<std::size_t>(lambda)] = MomentumFunction(std::move(c));
  return v;
}

bool PhaseValue::is_zero() const {
  return scalar.is_zero() && std::all_of(x.begin(), x.end(), [](const auto& f) { return f.is_zero(); });
}

namespace {

template <typename Fn>
PhaseValue map_parts(const PhaseValue& v, Fn fn) {
  PhaseValue r;
  r.scalar = fn(v.scalar);
  for (std::size_t k = 0; k < 4; ++k) r.x[k] = fn(v.x[k]);
  return r;
}

}  // namespace

PhaseValue PhaseValue::expand(int n) const {
  return map_parts(*this, [n](const MomentumFunction& f) { return f.expand(n); });
}

PhaseValue PhaseValue::truncated(int n) const {
  return map_parts(*this, [n](const MomentumFunction& f) { return f.truncated(n); });
}

PhaseValue PhaseValue::substitute(const std::map<Param, ParamScalar>& values) const {
  return map_parts(*this, [&](const MomentumFunction& f) { return f.substitute(values); });
}

PhaseValue& PhaseValue::operator+=(const PhaseValue& o) {
  scalar += o.scalar;
  for (std::size_t k = 0; k < 4; ++k) x[k] += o.x[k];
  return *this;
}

PhaseValue& PhaseValue::operator-=(const PhaseValue& o) { return *this += -o; }

PhaseValue PhaseValue::operator-() const {
  return map_parts(*this, [](const MomentumFunction& f) { return -f; });
}

PhaseValue operator*(const MomentumFunction& f, const PhaseValue& v) {
  return map_parts(v, [&](const MomentumFunction& g) { return f * g; });
}

std::string PhaseValue::str() const {
  std::vector<std::pair<std::string, ParamScalar>> pieces;
  for (const auto& [m, c] : scalar.terms()) pieces.emplace_back(render_monomial(m, kLowerMomenta), c);
  for (std::size_t k = 0; k < 4; ++k) {
    std::string xs = "x" + std::to_string(k);
    for (const auto& [m, c] : x[k].terms()) {
      std::string mono = render_monomial(m, kLowerMomenta);
      pieces.emplace_back(mono.empty() ? xs : mono + "*" + xs, c);
    }
  }
  return render_sum(pieces);
}

// ---------------------------------------------------------------------------
// pairing

namespace {

ParamScalar minus_i_hbar() { return -ParamScalar::i() * ParamScalar::param(Param::hbar); }

void require_translation(const Word& w) {
  for (char ch : w)
    if (!is_momentum(decode(ch)))
      throw SectorError("pairing is defined on the translation sector only; found " +
                        std::string(generator_name(decode(ch))));
}

// <x_mu, word> without the -i hbar factor
int unit_pair(int mu, const Word& w) {
  return w.size() == 1 && decode(w[0]) == momentum(mu) ? metric(mu) : 0;
}

MomentumFunction word_function(const Word& w) {
  MomentumFunction f(ParamScalar(1));
  for (char ch : w) f = f * MomentumFunction::momentum(static_cast<int>(decode(ch)));
  return f;
}

}  // namespace

ParamScalar pair(int mu, const MomentumFunction& f) {
  return minus_i_hbar() * ParamScalar(metric(mu)) * f.diff(mu).at_zero();
}

ParamScalar pair(int mu, const AlgebraElement& f) {
  ParamScalar s;
  for (const auto& [w, c] : f.terms()) {
    require_translation(w);
    s += c * ParamScalar(unit_pair(mu, w));
  }
  return minus_i_hbar() * s;
}

CoproductTable coproduct_table(const Twist& F) {
  CoproductTable t;
  t.order = F.order();
  for (int mu = 0; mu < 4; ++mu) {
    t.momenta[static_cast<std::size_t>(mu)] = twisted_series(F, AlgebraElement::generator(momentum(mu)));
    if (!t.momenta[static_cast<std::size_t>(mu)].translation_only())
      throw SectorError("twisted coproduct of " + std::string(generator_name(momentum(mu))) +
                        " leaves the translation sector (Lorentz generators in its legs)");
  }
  return t;
}

MomentumFunction cross_commutator(int mu, int nu, const CoproductTable& table) {
  MomentumFunction r;
  for (const auto& [key, c] : table.momenta[static_cast<std::size_t>(mu)].terms()) {
    auto legs = TensorElement::split(key);
    require_translation(legs[0]);
    require_translation(legs[1]);
    int e = unit_pair(nu, legs[0]);
    if (e == 0) continue;
    r += (minus_i_hbar() * ParamScalar(e) * c) * word_function(legs[1]);
  }
  return r.truncated(table.order);
}

namespace {

// antisymmetrised bilinear pairing sum c (e_mu(l) e_nu(r) - e_nu(l) e_mu(r))
ParamScalar antisym(int mu, int nu, const TensorElement& t) {
  ParamScalar s;
  for (const auto& [key, c] : t.terms()) {
    auto legs = TensorElement::split(key);
    int v = unit_pair(mu, legs[0]) * unit_pair(nu, legs[1]) - unit_pair(nu, legs[0]) * unit_pair(mu, legs[1]);
    if (v != 0) s += c * ParamScalar(v);
  }
  return s;
}

}  // namespace

std::array<std::array<PhaseValue, 4>, 4> dual_brackets(const CoproductTable& table) {
  std::array<std::array<PhaseValue, 4>, 4> out{};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      PhaseValue v;
      for (int l = 0; l < 4; ++l) {
        ParamScalar s = antisym(mu, nu, table.momenta[static_cast<std::size_t>(l)]);
        // c_l (-i hbar g_l) = (-i hbar)^2 s
        if (!s.is_zero())
          v.x[static_cast<std::size_t>(l)] = MomentumFunction(minus_i_hbar() * ParamScalar(metric(l)) * s.without_order());
      }
      out[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] = v;
      out[static_cast<std::size_t>(nu)][static_cast<std::size_t>(mu)] = -v;
    }
  // a Lie bracket pairs to zero against products of momenta
  std::vector<std::string> residual;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      TensorElement prod = tensor_mul(table.momenta[static_cast<std::size_t>(a)],
                                      table.momenta[static_cast<std::size_t>(b)]);
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
          ParamScalar s = antisym(mu, nu, prod);
          if (!s.is_zero())
            residual.push_back("<[x" + std::to_string(mu) + ",x" + std::to_string(nu) + "], P" +
                               std::to_string(a) + "P" + std::to_string(b) + "> = " + s.str());
        }
    }
  if (!residual.empty()) {
    std::string r;
    for (const auto& s : residual) r += (r.empty() ? "" : "; ") + s;
    throw NonLieError("coordinate brackets are not linear in the coordinates", r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// tables

PhaseValue RelationTable::value(const PhaseGenerator& a, const PhaseGenerator& b, bool series) const {
  for (const auto& e : entries) {
    if (e.a == a && e.b == b) return series ? e.series : e.value;
    if (e.a == b && e.b == a) return -(series ? e.series : e.value);
  }
  return {};
}

void RelationTable::set(const PhaseGenerator& a, const PhaseGenerator& b, const PhaseValue& v) {
  for (auto& e : entries) {
    if (e.a == a && e.b == b) {
      e.value = e.series = v;
      return;
    }
    if (e.a == b && e.b == a) {
      e.value = e.series = -v;
      return;
    }
  }
  entries.push_back({a, b, v, v, true});
}

void RelationTable::orient(const PhaseGenerator& a, const PhaseGenerator& b) {
  for (auto& e : entries)
    if (e.a == b && e.b == a) {
      std::swap(e.a, e.b);
      e.value = -e.value;
      e.series = -e.series;
    }
}

nlohmann::json RelationTable::to_json() const {
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& e : entries)
    rel.push_back({{"pair", {e.a.name(), e.b.name()}}, {"value", e.value.str()}, {"closed_form", e.closed_form}});
  nlohmann::json j{{"name", name}, {"order", order}, {"relations", rel}};
  if (!annotations.empty()) j["annotations"] = annotations;
  return j;
}

std::string RelationTable::text() const {
  std::ostringstream out;
  out << name << " (order " << order << ")\n";
  for (const auto& e : entries) {
    out << "  [" << e.a.name() << "," << e.b.name() << "] = " << e.value.str();
    if (!e.closed_form) out << "   (series)";
    out << "\n";
  }
  for (const auto& a : annotations) out << "  note: " << a << "\n";
  return out.str();
}

TwistSpec preset_spec(std::string_view preset, int order) {
  if (preset == "iso2") {
    TwistSpec s = TwistSpec::simplified(TwistCase::i, order);
    s.assignment[Param::delta3_m] = ParamScalar{};
    s.assignment[Param::delta0_m] = ParamScalar::param(Param::alpha);
    return s;
  }
  if (preset == "iso11") {
    TwistSpec s = TwistSpec::simplified(TwistCase::ii, order);
    s.assignment[Param::xi2_m] = ParamScalar{};
    s.assignment[Param::xi1_m] = ParamScalar::param(Param::beta);
    return s;
  }
  if (preset == "canonical") {
    TwistSpec s = TwistSpec::simplified(TwistCase::i, order);
    s.assignment[Param::delta0_m] = ParamScalar{};
    s.assignment[Param::delta3_m] = ParamScalar{};
    return s;
  }
  throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (iso2, iso11, canonical)");
}

RelationTable relation_table(const TwistSpec& spec, std::string name) {
  Twist F = build_twist(spec);
  CoproductTable table = coproduct_table(F);
  RelationTable t;
  t.name = std::move(name);
  t.order = spec.order;
  auto xx = dual_brackets(table);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const PhaseValue& v = xx[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
      if (!v.is_zero()) t.entries.push_back({{PhaseGenerator::x, mu}, {PhaseGenerator::x, nu}, v, v, true});
    }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      MomentumFunction s = cross_commutator(mu, nu, table);
      if (s.is_zero()) continue;
      auto [closed, ok] = to_closed_form(s);
      PhaseValue v, sv;
      v.scalar = closed;
      sv.scalar = s;
      t.entries.push_back({{PhaseGenerator::p, mu}, {PhaseGenerator::x, nu}, v, sv, ok});
    }
  // case (ii) reads naturally with x3 first
  if (spec.which == TwistCase::ii)
    for (int a = 0; a < 3; ++a) t.orient({PhaseGenerator::x, 3}, {PhaseGenerator::x, a});
  return t;
}

RelationTable relation_table(std::string_view preset, int order) {
  RelationTable t = relation_table(preset_spec(preset, order), std::string(preset));
  if (preset == "iso2")
    t.annotations.push_back("[x0,x2] = -2*i*hbar*alpha*x1 is the sign Jacobi admits; +2*i*hbar*alpha*x1 fails check_jacobi");
  if (preset == "iso11")
    t.annotations.push_back("[p3,x0] = -i*hbar*sinh(beta*p1); momenta commute, so no [p3,p0] relation exists");
  return t;
}

// ---------------------------------------------------------------------------
// Jacobi

namespace {

struct Brackets {
  const RelationTable& table;

  PhaseValue gen_gen(const PhaseGenerator& a, const PhaseGenerator& b) const { return table.value(a, b, true); }

  // [g, F(p)] as a momentum function
  MomentumFunction gen_fun(const PhaseGenerator& g, const MomentumFunction& f) const {
    if (g.kind == PhaseGenerator::p || f.is_zero()) return {};
    // [x, F] = -sum_nu dF/dp_nu [p_nu, x]
    MomentumFunction r;
    for (int nu = 0; nu < 4; ++nu) {
      MomentumFunction d = f.diff(nu);
      if (d.is_zero()) continue;
      PhaseValue px = gen_gen({PhaseGenerator::p, nu}, g);
      r -= d * px.scalar;
    }
    return r;
  }

  PhaseValue gen_value(const PhaseGenerator& g, const PhaseValue& v) const {
    PhaseValue r;
    r.scalar = gen_fun(g, v.scalar);
    for (int l = 0; l < 4; ++l) {
      const MomentumFunction& f = v.x[static_cast<std::size_t>(l)];
      if (f.is_zero()) continue;
      r.x[static_cast<std::size_t>(l)] += gen_fun(g, f);
      r += f * gen_gen(g, {PhaseGenerator::x, l});
    }
    return r;
  }
};

}  // namespace

Report check_jacobi(const RelationTable& table) {
  std::vector<PhaseGenerator> gens;
  for (int k = 0; k < 4; ++k) gens.push_back({PhaseGenerator::x, k});
  for (int k = 0; k < 4; ++k) gens.push_back({PhaseGenerator::p, k});
  Brackets br{table};
  Report r{"jacobi", table.order, "0", true, {}};
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        const auto &a = gens[i], &b = gens[j], &c = gens[k];
        PhaseValue sum = br.gen_value(a, br.gen_gen(b, c)) + br.gen_value(b, br.gen_gen(c, a)) +
                         br.gen_value(c, br.gen_gen(a, b));
        sum = sum.truncated(table.order);
        if (sum.is_zero()) continue;
        std::string line = "(" + a.name() + "," + b.name() + "," + c.name() + "): " + sum.str();
        if (r.pass) r.residual = line;
        r.pass = false;
        r.notes.push_back(line);
      }
  return r;
}

// ---------------------------------------------------------------------------
// classification

std::string_view class_name(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::abelian: return "abelian";
    case AlgebraClass::iso2: return "iso(2)";
    case AlgebraClass::iso11: return "iso(1,1)";
    case AlgebraClass::other: return "other";
  }
  return "?";
}

namespace {

int rank_of(std::vector<std::vector<Rational>> m) {
  int rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < m.size(); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && sgn(m[piv][c]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    auto& row = m[static_cast<std::size_t>(rank)];
    for (std::size_t q = 0; q < m.size(); ++q) {
      if (q == static_cast<std::size_t>(rank) || sgn(m[q][c]) == 0) continue;
      Rational f = m[q][c] / row[c];
      for (std::size_t k = c; k < cols; ++k) m[q][k] -= f * row[k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

AlgebraClass classify_algebra(const RelationTable& table, const std::map<Param, GaussRational>& values) {
  std::map<Param, ParamScalar> sub;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    auto p = static_cast<Param>(k);
    auto it = values.find(p);
    // generic positive values; hbar only scales
    GaussRational v = it != values.end() ? it->second : GaussRational::frac(static_cast<long>(k) + 2, static_cast<long>(k) + 3);
    if (p == Param::hbar && it == values.end()) v = GaussRational(1);
    sub[p] = ParamScalar(v);
  }
  // structure constants with the factor i stripped
  Rational c[4][4][4];
  bool any = false;
  std::array<bool, 4> involved{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      PhaseValue v = table.value({PhaseGenerator::x, a}, {PhaseGenerator::x, b});
      if (!v.scalar.is_zero()) return AlgebraClass::other;
      for (int l = 0; l < 4; ++l) {
        const MomentumFunction& f = v.x[static_cast<std::size_t>(l)];
        if (f.is_zero()) continue;
        if (f.max_p_degree() > 0 || f.terms().size() != 1 || !f.terms().begin()->first.is_one())
          return AlgebraClass::other;
        auto val = f.terms().begin()->second.substitute(sub).constant_value();
        if (!val) return AlgebraClass::other;
        GaussRational stripped = *val * GaussRational(Rational(0), Rational(-1));
        if (sgn(stripped.im) != 0) return AlgebraClass::other;
        if (sgn(stripped.re) == 0) continue;
        c[a][b][l] = stripped.re;
        any = true;
        involved[static_cast<std::size_t>(a)] = involved[static_cast<std::size_t>(b)] =
            involved[static_cast<std::size_t>(l)] = true;
      }
    }
  if (!any) return AlgebraClass::abelian;
  std::vector<int> idx;
  for (int k = 0; k < 4; ++k)
    if (involved[static_cast<std::size_t>(k)]) idx.push_back(k);
  if (idx.size() != 3) return AlgebraClass::other;

  std::vector<std::vector<Rational>> killing(3, std::vector<Rational>(3));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (int k : idx)
        for (int l : idx) killing[a][b] += c[idx[a]][k][l] * c[idx[b]][l][k];
  std::vector<std::vector<Rational>> derived;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      std::vector<Rational> row;
      for (int l : idx) row.push_back(c[idx[a]][idx[b]][l]);
      derived.push_back(row);
    }
  if (rank_of(killing) != 1 || rank_of(derived) != 2) return AlgebraClass::other;
  Rational trace = killing[0][0] + killing[1][1] + killing[2][2];
  if (sgn(trace) < 0) return AlgebraClass::iso2;
  if (sgn(trace) > 0) return AlgebraClass::iso11;
  return AlgebraClass::other;
}

}  // namespace twistforge
