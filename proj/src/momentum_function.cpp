#include "twistforge/momentum_function.hpp"

#include <algorithm>
#include <sstream>

#include "twistforge/errors.hpp"

namespace twistforge {

const VariableNames kLowerMomenta = {"p0", "p1", "p2", "p3"};
const VariableNames kUpperMomenta = {"P0", "P1", "P2", "P3"};

LinearForm LinearForm::single(int mu, ParamScalar c) {
  LinearForm l;
  l.coeff[static_cast<std::size_t>(mu)] = std::move(c);
  return l;
}

bool LinearForm::is_zero() const {
  return std::all_of(coeff.begin(), coeff.end(), [](const ParamScalar& c) { return c.is_zero(); });
}

int LinearForm::min_deformation_degree() const {
  int d = 1 << 20;
  for (const auto& c : coeff)
    if (!c.is_zero()) d = std::min(d, c.min_deformation_degree());
  return d;
}

LinearForm LinearForm::operator-() const {
  LinearForm r = *this;
  for (auto& c : r.coeff) c = -c;
  return r;
}

LinearForm LinearForm::scaled(const ParamScalar& s) const {
  LinearForm r = *this;
  for (auto& c : r.coeff) c = c * s;
  return r;
}

std::string_view trans_name(Trans t) {
  switch (t) {
    case Trans::cos: return "cos";
    case Trans::sin: return "sin";
    case Trans::cosh: return "cosh";
    case Trans::sinh: return "sinh";
    case Trans::exp: return "exp";
  }
  return "?";
}

FuncMonomial FuncMonomial::operator*(const FuncMonomial& o) const {
  FuncMonomial r;
  for (std::size_t k = 0; k < 4; ++k) r.p[k] = static_cast<std::uint8_t>(p[k] + o.p[k]);
  std::map<Atom, int> merged;
  for (const auto& [a, e] : atoms) merged[a] += e;
  for (const auto& [a, e] : o.atoms) merged[a] += e;
  r.atoms.assign(merged.begin(), merged.end());
  return r;
}

bool operator<(const FuncMonomial& a, const FuncMonomial& b) {
  int da = a.p_degree(), db = b.p_degree();
  if (da != db) return da < db;
  if (a.p != b.p) return a.p > b.p;
  if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
  return a.atoms < b.atoms;
}

MomentumFunction::MomentumFunction(ParamScalar c) {
  set_order(c.order());
  if (!c.is_zero()) terms_.emplace(FuncMonomial{}, std::move(c));
}

MomentumFunction MomentumFunction::momentum(int mu) {
  FuncMonomial m;
  m.p[static_cast<std::size_t>(mu)] = 1;
  return monomial(m, ParamScalar(1));
}

MomentumFunction MomentumFunction::atom(Trans kind, LinearForm arg) { return apply_trans(kind, arg); }

MomentumFunction MomentumFunction::monomial(FuncMonomial m, ParamScalar c) {
  MomentumFunction f;
  f.add_term(m, c);
  return f;
}

MomentumFunction MomentumFunction::linear(const LinearForm& l) {
  MomentumFunction f;
  for (int mu = 0; mu < 4; ++mu) f += l.coeff[static_cast<std::size_t>(mu)] * momentum(mu);
  return f;
}

void MomentumFunction::set_order(const std::optional<int>& o) {
  if (!o) return;
  if (order_ && *order_ != *o)
    throw TruncationMismatch("truncation order mismatch: " + std::to_string(*order_) + " vs " +
                             std::to_string(*o));
  if (!order_) {
    order_ = o;
    Terms kept;
    for (auto& [m, c] : terms_) {
      ParamScalar t = c.truncated(*o);
      if (!t.is_zero()) kept.emplace(m, std::move(t));
    }
    terms_ = std::move(kept);
  }
}

void MomentumFunction::add_term(const FuncMonomial& m, const ParamScalar& c) {
  ParamScalar v = order_ ? c.truncated(*order_) : c;
  if (v.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, std::move(v));
    return;
  }
  it->second += v;
  if (it->second.is_zero()) terms_.erase(it);
}

bool MomentumFunction::is_series() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.has_atoms(); });
}

int MomentumFunction::max_p_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.p_degree());
  return d;
}

int MomentumFunction::max_deformation_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, c.max_deformation_degree());
  return d;
}

MomentumFunction MomentumFunction::truncated(int order) const {
  MomentumFunction r;
  r.order_ = order_ ? std::min(*order_, order) : order;
  for (const auto& [m, c] : terms_) r.add_term(m, c.truncated(*r.order_));
  return r;
}

MomentumFunction MomentumFunction::without_order() const {
  MomentumFunction r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.without_order());
  return r;
}

MomentumFunction MomentumFunction::homogeneous_part(int d) const {
  MomentumFunction r;
  r.order_ = order_;
  for (const auto& [m, c] : terms_)
    if (m.p_degree() == d && !m.has_atoms()) r.terms_.emplace(m, c);
  return r;
}

ParamScalar MomentumFunction::coefficient(const std::array<std::uint8_t, 4>& p) const {
  FuncMonomial m;
  m.p = p;
  auto it = terms_.find(m);
  return it == terms_.end() ? ParamScalar{} : it->second;
}

namespace {

std::pair<Trans, int> derivative_of(Trans t) {
  switch (t) {
    case Trans::cos: return {Trans::sin, -1};
    case Trans::sin: return {Trans::cos, 1};
    case Trans::cosh: return {Trans::sinh, 1};
    case Trans::sinh: return {Trans::cosh, 1};
    case Trans::exp: return {Trans::exp, 1};
  }
  return {t, 0};
}

}  // namespace

MomentumFunction MomentumFunction::diff(int mu) const {
  MomentumFunction r;
  r.order_ = order_;
  const auto k = static_cast<std::size_t>(mu);
  for (const auto& [m, c] : terms_) {
    if (m.p[k] > 0) {
      FuncMonomial dm = m;
      dm.p[k] -= 1;
      r.add_term(dm, c * ParamScalar(static_cast<long>(m.p[k])));
    }
    for (std::size_t a = 0; a < m.atoms.size(); ++a) {
      const auto& [atom, e] = m.atoms[a];
      const ParamScalar& slope = atom.arg.coeff[k];
      if (slope.is_zero()) continue;
      FuncMonomial rest = m;
      if (e == 1) rest.atoms.erase(rest.atoms.begin() + static_cast<std::ptrdiff_t>(a));
      else rest.atoms[a].second -= 1;
      auto [dkind, sign] = derivative_of(atom.kind);
      FuncMonomial datom;
      datom.atoms.emplace_back(Atom{dkind, atom.arg}, 1);
      r.add_term(rest * datom, c * slope * ParamScalar(static_cast<long>(e * sign)));
    }
  }
  return r;
}

ParamScalar MomentumFunction::at_zero() const {
  ParamScalar v;
  for (const auto& [m, c] : terms_) {
    if (m.p_degree() > 0) continue;
    bool zero = false;
    for (const auto& [a, e] : m.atoms)
      if (a.kind == Trans::sin || a.kind == Trans::sinh) zero = true;
    if (!zero) v += c;
  }
  return v;
}

MomentumFunction MomentumFunction::conj() const {
  MomentumFunction r;
  r.order_ = order_;
  for (const auto& [m, c] : terms_) {
    FuncMonomial cm = m;
    for (auto& [a, e] : cm.atoms)
      for (auto& l : a.arg.coeff) l = l.conj();
    FuncMonomial canon;
    canon.p = cm.p;
    r.add_term(canon * FuncMonomial{{}, cm.atoms}, c.conj());
  }
  return r;
}

MomentumFunction MomentumFunction::substitute(const std::map<Param, ParamScalar>& values) const {
  MomentumFunction r;
  for (const auto& [m, c] : terms_) {
    MomentumFunction piece(c.substitute(values));
    FuncMonomial pm;
    pm.p = m.p;
    piece = piece * monomial(pm, ParamScalar(1));
    for (const auto& [a, e] : m.atoms) {
      LinearForm arg = a.arg;
      for (auto& l : arg.coeff) l = l.substitute(values);
      MomentumFunction fa = apply_trans(a.kind, arg);
      for (int k = 0; k < e; ++k) piece = piece * fa;
    }
    r += piece;
  }
  if (order_) r = r.truncated(*order_);
  return r;
}

std::complex<double> MomentumFunction::evaluate(const ParamValues& params, const MomentumValues& p) const {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [m, c] : terms_) {
    std::complex<double> v = c.evaluate(params);
    for (std::size_t k = 0; k < 4; ++k)
      for (int e = 0; e < m.p[k]; ++e) v *= p[k];
    for (const auto& [a, e] : m.atoms) {
      std::complex<double> x{0.0, 0.0};
      for (std::size_t k = 0; k < 4; ++k) x += a.arg.coeff[k].evaluate(params) * p[k];
      std::complex<double> fx;
      switch (a.kind) {
        case Trans::cos: fx = std::cos(x); break;
        case Trans::sin: fx = std::sin(x); break;
        case Trans::cosh: fx = std::cosh(x); break;
        case Trans::sinh: fx = std::sinh(x); break;
        case Trans::exp: fx = std::exp(x); break;
      }
      for (int k = 0; k < e; ++k) v *= fx;
    }
    total += v;
  }
  return total;
}

MomentumFunction trans_series(Trans kind, const LinearForm& arg, int n) {
  MomentumFunction one(ParamScalar(1).truncated(n));
  if (arg.is_zero()) {
    bool odd = kind == Trans::sin || kind == Trans::sinh;
    return odd ? MomentumFunction(ParamScalar{}.truncated(n)) : one;
  }
  if (arg.min_deformation_degree() < 1)
    throw std::invalid_argument("cannot expand " + std::string(trans_name(kind)) +
                                " of an argument without deformation parameters");
  MomentumFunction l = MomentumFunction::linear(arg).truncated(n);
  MomentumFunction power = one;
  MomentumFunction sum = MomentumFunction(ParamScalar{}.truncated(n));
  Rational factorial(1);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      power = power * l;
      factorial *= k;
    }
    int sign = 0;
    switch (kind) {
      case Trans::cos: sign = (k % 2 == 0) ? ((k / 2) % 2 == 0 ? 1 : -1) : 0; break;
      case Trans::sin: sign = (k % 2 == 1) ? (((k - 1) / 2) % 2 == 0 ? 1 : -1) : 0; break;
      case Trans::cosh: sign = (k % 2 == 0) ? 1 : 0; break;
      case Trans::sinh: sign = (k % 2 == 1) ? 1 : 0; break;
      case Trans::exp: sign = 1; break;
    }
    if (sign == 0) continue;
    Rational c = Rational(sign) / factorial;
    sum += ParamScalar(GaussRational(c)) * power;
  }
  return sum;
}

MomentumFunction apply_trans(Trans kind, const LinearForm& arg) {
  if (arg.is_zero()) {
    bool odd = kind == Trans::sin || kind == Trans::sinh;
    return MomentumFunction(ParamScalar(odd ? 0 : 1));
  }
  FuncMonomial m;
  m.atoms.emplace_back(Atom{kind, arg}, 1);
  return MomentumFunction::monomial(m, ParamScalar(1));
}

MomentumFunction MomentumFunction::expand(int n) const {
  MomentumFunction r(ParamScalar{}.truncated(n));
  for (const auto& [m, c] : terms_) {
    FuncMonomial pm;
    pm.p = m.p;
    MomentumFunction piece = monomial(pm, c.truncated(n)).truncated(n);
    for (const auto& [a, e] : m.atoms) {
      MomentumFunction s = trans_series(a.kind, a.arg, n);
      for (int k = 0; k < e; ++k) piece = piece * s;
    }
    r += piece;
  }
  return r;
}

MomentumFunction& MomentumFunction::operator+=(const MomentumFunction& o) {
  set_order(o.order_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MomentumFunction& MomentumFunction::operator-=(const MomentumFunction& o) { return *this += -o; }

MomentumFunction MomentumFunction::operator-() const {
  MomentumFunction r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MomentumFunction operator*(const MomentumFunction& a, const MomentumFunction& b) {
  MomentumFunction r;
  r.set_order(a.order_);
  r.set_order(b.order_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (r.order_ && ca.min_deformation_degree() + cb.min_deformation_degree() > *r.order_) continue;
      r.add_term(ma * mb, ca * cb);
    }
  }
  return r;
}

MomentumFunction operator*(const ParamScalar& s, const MomentumFunction& f) {
  MomentumFunction r;
  r.set_order(f.order_);
  r.set_order(s.order());
  for (const auto& [m, c] : f.terms_) r.add_term(m, s * c);
  return r;
}

bool operator<(const MomentumFunction& a, const MomentumFunction& b) {
  return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
                                      [](const auto& x, const auto& y) {
                                        if (x.first < y.first) return true;
                                        if (y.first < x.first) return false;
                                        return x.second < y.second;
                                      });
}

std::string render_sum(const std::vector<std::pair<std::string, ParamScalar>>& pieces) {
  if (pieces.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : pieces) {
    bool neg = false;
    std::string body;
    if (c.terms().size() == 1) {
      body = c.str();
      if (!body.empty() && body[0] == '-') {
        neg = true;
        body.erase(0, 1);
      }
    } else {
      body = c.factor_str();
    }
    if (!mono.empty()) body = (body == "1") ? mono : body + "*" + mono;
    if (first) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

std::string render_linear(const LinearForm& l, const VariableNames& names) {
  std::vector<std::pair<std::string, ParamScalar>> pieces;
  for (std::size_t k = 0; k < 4; ++k)
    if (!l.coeff[k].is_zero()) pieces.emplace_back(names[k], l.coeff[k]);
  return render_sum(pieces);
}

std::string render_monomial(const FuncMonomial& m, const VariableNames& names) {
  std::string s;
  for (std::size_t k = 0; k < 4; ++k) {
    if (m.p[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[k];
    if (m.p[k] > 1) s += "^" + std::to_string(m.p[k]);
  }
  for (const auto& [a, e] : m.atoms) {
    if (!s.empty()) s += "*";
    s += std::string(trans_name(a.kind)) + "(" + render_linear(a.arg, names) + ")";
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::string MomentumFunction::str(const VariableNames& names) const {
  std::vector<std::pair<std::string, ParamScalar>> pieces;
  for (const auto& [m, c] : terms_) pieces.emplace_back(render_monomial(m, names), c);
  return render_sum(pieces);
}

// ---------------------------------------------------------------------------
// exact square roots

namespace {

std::optional<Rational> sqrt_rational(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn = sqrt(n), rd = sqrt(d);
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

using Term = ParamScalar::Term;

ParamScalar from_term(const Term& t) {
  ScalarBuilder b;
  b.add(t.first, t.second);
  return b.build();
}

std::optional<Term> divide_term(const Term& a, const Term& b) {
  ParamMonomial m;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    if (a.first.exp[k] < b.first.exp[k]) return std::nullopt;
    m.exp[k] = static_cast<std::uint8_t>(a.first.exp[k] - b.first.exp[k]);
  }
  return Term{m, a.second / b.second};
}

std::optional<ParamScalar> divide_by_term(const ParamScalar& a, const Term& t) {
  ScalarBuilder b;
  for (const auto& x : a.terms()) {
    auto q = divide_term(x, t);
    if (!q) return std::nullopt;
    b.add(q->first, q->second);
  }
  return b.build();
}

/// lambda with A = lambda * B, lambda a single term; compared exactly.
std::optional<Term> monomial_ratio(const MomentumFunction& a, const MomentumFunction& b) {
  if (b.is_zero() || a.is_zero()) return std::nullopt;
  const auto& [mb, cb] = *b.terms().begin();
  auto it = a.terms().find(mb);
  if (it == a.terms().end()) return std::nullopt;
  auto lambda = divide_term(it->second.terms().front(), cb.terms().front());
  if (!lambda) return std::nullopt;
  MomentumFunction check = from_term(*lambda) * b.without_order();
  if (!(check == a.without_order())) return std::nullopt;
  return lambda;
}

bool has_deformation(const Term& t) { return t.first.deformation_degree() > 0; }

bool positive_lead(const LinearForm& l) {
  for (const auto& c : l.coeff) {
    if (c.is_zero()) continue;
    const auto& g = c.terms().front().second;
    if (sgn(g.re) != 0) return sgn(g.re) > 0;
    return sgn(g.im) > 0;
  }
  return true;
}

bool real_arg(const LinearForm& l) {
  for (const auto& c : l.coeff)
    for (const auto& [m, g] : c.terms())
      if (!g.is_real()) return false;
  return true;
}

std::optional<Term> sqrt_term(const Term& t) {
  auto s = sqrt_exact(t.second);
  if (!s) return std::nullopt;
  ParamMonomial m;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    if (t.first.exp[k] % 2 != 0) return std::nullopt;
    m.exp[k] = t.first.exp[k] / 2;
  }
  return Term{m, *s};
}

struct Candidate {
  Trans kind;
  ParamScalar c1;
  LinearForm arg;
};

}  // namespace

std::optional<GaussRational> sqrt_exact(const GaussRational& x) {
  if (x.is_real()) {
    if (sgn(x.re) >= 0) {
      auto r = sqrt_rational(x.re);
      if (!r) return std::nullopt;
      return GaussRational(*r);
    }
    auto r = sqrt_rational(-x.re);
    if (!r) return std::nullopt;
    return GaussRational(Rational(0), *r);
  }
  auto m = sqrt_rational(x.re * x.re + x.im * x.im);
  if (!m) return std::nullopt;
  Rational half_re = (x.re + *m) / 2;
  auto re = sqrt_rational(half_re);
  if (!re || sgn(*re) == 0) return std::nullopt;
  Rational im = x.im / (2 * *re);
  GaussRational r(*re, im);
  if (!(r * r == x)) return std::nullopt;
  return r;
}

std::optional<ParamScalar> sqrt_exact(const ParamScalar& x) {
  if (x.is_zero()) return ParamScalar{};
  const ParamScalar plain = x.without_order();
  auto lead = sqrt_term(plain.terms().back());
  if (!lead) return std::nullopt;
  ParamScalar root = from_term(*lead);
  for (std::size_t iter = 0; iter <= plain.terms().size() + 1; ++iter) {
    ParamScalar rem = plain - root * root;
    if (rem.is_zero()) return root;
    Term two_lead = root.terms().back();
    two_lead.second *= GaussRational(2);
    auto next = divide_term(rem.terms().back(), two_lead);
    if (!next) return std::nullopt;
    root += from_term(*next);
  }
  return std::nullopt;
}

MomentumFunction series_recognize(const MomentumFunction& series) {
  if (!series.is_series()) throw RecognitionError("recognition expects a series without closed-form atoms");
  if (!series.order()) throw RecognitionError("recognition expects a truncated series");
  const int n = *series.order();
  if (series.max_p_degree() == 0) return series.without_order();

  MomentumFunction s0 = series.homogeneous_part(0).without_order();
  MomentumFunction lin = series.homogeneous_part(1).without_order();
  MomentumFunction quad = series.homogeneous_part(2).without_order();
  MomentumFunction cub = series.homogeneous_part(3).without_order();
  MomentumFunction quart = series.homogeneous_part(4).without_order();

  auto form_of = [](const MomentumFunction& f) {
    LinearForm l;
    for (int mu = 0; mu < 4; ++mu) {
      std::array<std::uint8_t, 4> e{};
      e[static_cast<std::size_t>(mu)] = 1;
      l.coeff[static_cast<std::size_t>(mu)] = f.coefficient(e);
    }
    return l;
  };

  std::vector<Candidate> proposals;
  auto scaled_arg = [&](const Term& c1) -> std::optional<LinearForm> {
    LinearForm l = form_of(lin);
    for (auto& c : l.coeff) {
      auto q = divide_by_term(c, c1);
      if (!q) return std::nullopt;
      c = *q;
    }
    return l;
  };

  if (!lin.is_zero()) {
    if (!cub.is_zero()) {
      auto lambda = monomial_ratio(lin * lin * lin, cub);
      if (lambda) {
        for (int sign : {-1, 1}) {
          Term sq = *lambda;
          sq.second = sq.second / GaussRational(6 * sign);
          auto c1 = sqrt_term(sq);
          if (!c1 || has_deformation(*c1)) continue;
          auto arg = scaled_arg(*c1);
          if (arg) proposals.push_back({sign < 0 ? Trans::sin : Trans::sinh, from_term(*c1), *arg});
        }
      }
    }
    if (!quad.is_zero()) {
      auto lambda = monomial_ratio(lin * lin, quad);
      if (lambda && !has_deformation(*lambda)) {
        Term c1 = *lambda;
        c1.second = c1.second / GaussRational(2);
        auto arg = scaled_arg(c1);
        if (arg) proposals.push_back({Trans::exp, from_term(c1), *arg});
      }
    }
    if (n < 3) {
      // the scale of L is invisible below the cubic term; offer the
      // content-normalised candidates so the ambiguity is reported
      Term content;
      for (const auto& c : form_of(lin).coeff)
        if (!c.is_zero()) {
          content = c.terms().front();
          break;
        }
      for (std::size_t k = 1; k < kParamCount; ++k) content.first.exp[k] = 0;
      auto arg = scaled_arg(content);
      if (arg)
        for (Trans kind : {Trans::sin, Trans::sinh}) proposals.push_back({kind, from_term(content), *arg});
    }
  } else if (!quad.is_zero() && (!quart.is_zero() || n < 4)) {
    std::optional<Term> lambda;
    if (!quart.is_zero()) {
      lambda = monomial_ratio(quad * quad, quart);
    } else {
      // below quartic order only the normalisation c1 = -2 * content(q) is tried
      Term content = quad.terms().begin()->second.terms().front();
      for (std::size_t k = 1; k < kParamCount; ++k) content.first.exp[k] = 0;
      content.second *= GaussRational(-12);
      lambda = content;
    }
    if (lambda && !has_deformation(*lambda)) {
      Term c1 = *lambda;
      c1.second = c1.second / GaussRational(6);
      for (Trans kind : {Trans::cos, Trans::cosh}) {
        Term scale = c1;
        scale.second = scale.second / GaussRational(kind == Trans::cos ? -2 : 2);
        // quadratic form of L^2 = quad / scale
        MomentumFunction lsq;
        bool ok = true;
        for (const auto& [m, c] : quad.terms()) {
          auto q = divide_by_term(c, scale);
          if (!q) {
            ok = false;
            break;
          }
          lsq += MomentumFunction::monomial(m, *q);
        }
        if (!ok) continue;
        auto diag = [&](int mu) {
          std::array<std::uint8_t, 4> e{};
          e[static_cast<std::size_t>(mu)] = 2;
          return lsq.coefficient(e);
        };
        auto cross = [&](int mu, int nu) {
          std::array<std::uint8_t, 4> e{};
          e[static_cast<std::size_t>(mu)] = 1;
          e[static_cast<std::size_t>(nu)] = 1;
          return lsq.coefficient(e);
        };
        int pivot = -1;
        for (int mu = 0; mu < 4 && pivot < 0; ++mu)
          if (!diag(mu).is_zero()) pivot = mu;
        if (pivot < 0) continue;
        LinearForm arg;
        auto root = sqrt_exact(diag(pivot));
        if (!root) continue;
        arg.coeff[static_cast<std::size_t>(pivot)] = *root;
        for (int nu = 0; nu < 4 && ok; ++nu) {
          if (nu == pivot) continue;
          ParamScalar d = diag(nu);
          ParamScalar x = cross(std::min(pivot, nu), std::max(pivot, nu));
          if (d.is_zero()) {
            if (!x.is_zero()) ok = false;
            continue;
          }
          auto r = sqrt_exact(d);
          if (!r) {
            ok = false;
            continue;
          }
          ParamScalar two_prod = ParamScalar(2) * *root * *r;
          if (two_prod == x) arg.coeff[static_cast<std::size_t>(nu)] = *r;
          else if (two_prod == -x) arg.coeff[static_cast<std::size_t>(nu)] = -*r;
          else ok = false;
        }
        if (ok) proposals.push_back({kind, from_term(c1), arg});
      }
    }
  }

  std::vector<MomentumFunction> matches;
  std::vector<bool> real_args;
  for (auto& cand : proposals) {
    if (cand.arg.is_zero() || cand.arg.min_deformation_degree() < 1) continue;
    if (!positive_lead(cand.arg) && cand.kind != Trans::exp) {
      cand.arg = -cand.arg;
      if (cand.kind == Trans::sin || cand.kind == Trans::sinh) cand.c1 = -cand.c1;
    }
    bool odd = cand.kind == Trans::sin || cand.kind == Trans::sinh;
    ParamScalar base = s0.coefficient({0, 0, 0, 0});
    ParamScalar c0 = odd ? base : base - cand.c1;
    MomentumFunction closed = MomentumFunction(c0) + cand.c1 * apply_trans(cand.kind, cand.arg);
    if (closed.expand(n) == series) {
      if (std::find(matches.begin(), matches.end(), closed) == matches.end()) {
        matches.push_back(closed);
        real_args.push_back(real_arg(cand.arg));
      }
    }
  }
  if (matches.size() > 1) {
    // sin(L) = -i sinh(iL) and friends: keep the real-argument representative
    std::vector<MomentumFunction> real_matches;
    for (std::size_t k = 0; k < matches.size(); ++k)
      if (real_args[k]) real_matches.push_back(matches[k]);
    if (real_matches.size() == 1) return real_matches.front();
  }
  if (matches.size() == 1) return matches.front();
  if (matches.empty()) throw RecognitionError("no closed form matches series " + series.str());
  std::vector<std::string> names;
  for (const auto& m : matches) names.push_back(m.str());
  throw RecognitionError("ambiguous closed form for series " + series.str(), names);
}

std::pair<MomentumFunction, bool> to_closed_form(const MomentumFunction& series) {
  try {
    return {series_recognize(series), true};
  } catch (const RecognitionError&) {
    if (series.order() && series.max_deformation_degree() <= *series.order() - 2)
      return {series.without_order(), true};
    return {series, false};
  }
}

}  // namespace twistforge
