#include "twistforge/scalar.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "twistforge/errors.hpp"

namespace twistforge {

namespace {

constexpr std::array<std::string_view, kParamCount> kParamNames = {
    "hbar",   "alphap", "delta0p", "delta3p", "delta0m", "delta3m", "rho00",
    "rho03",  "rho30",  "rho33",   "xi1p",    "xi2p",    "xi1m",    "xi2m",
    "gammap", "rho11",  "rho12",   "rho21",   "rho22",   "alpha",   "beta"};

}  // namespace

GaussRational GaussRational::inverse() const {
  Rational n = re * re + im * im;
  if (sgn(n) == 0) throw std::domain_error("division by zero Gaussian rational");
  Rational r = re / n;
  Rational i = -im / n;
  return {r, i};
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (sgn(im) == 0 && sgn(o.im) == 0) {
    re *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string render_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string GaussRational::str() const {
  if (sgn(im) == 0) return render_rational(re);
  if (sgn(re) == 0) {
    if (im == 1) return "i";
    if (im == -1) return "-i";
    return render_rational(im) + "*i";
  }
  std::string s = "(" + render_rational(re);
  if (sgn(im) > 0) s += " + ";
  else s += " - ";
  Rational a = abs(im);
  s += (a == 1 ? std::string("i") : render_rational(a) + "*i");
  return s + ")";
}

std::string_view param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

std::optional<Param> param_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kParamCount; ++k)
    if (kParamNames[k] == name) return static_cast<Param>(k);
  return std::nullopt;
}

int ParamMonomial::degree() const {
  int d = 0;
  for (auto e : exp) d += e;
  return d;
}

int ParamMonomial::deformation_degree() const { return degree() - exp[0]; }

ParamMonomial ParamMonomial::operator*(const ParamMonomial& o) const {
  ParamMonomial r;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    int e = exp[k] + o.exp[k];
    if (e > 255) throw std::overflow_error("parameter exponent overflow");
    r.exp[k] = static_cast<std::uint8_t>(e);
  }
  return r;
}

bool operator<(const ParamMonomial& a, const ParamMonomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.exp > b.exp;
}

ParamScalar::ParamScalar(GaussRational c) {
  if (!c.is_zero()) terms_.emplace_back(ParamMonomial{}, std::move(c));
}

ParamScalar ParamScalar::param(Param p, int power) {
  ParamMonomial m;
  m.exp[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(power);
  ParamScalar s;
  s.terms_.emplace_back(m, GaussRational(1));
  return s;
}

std::optional<GaussRational> ParamScalar::constant_value() const {
  if (terms_.empty()) return GaussRational(0);
  if (terms_.size() == 1 && terms_[0].first.is_one()) return terms_[0].second;
  return std::nullopt;
}

GaussRational ParamScalar::constant_term() const {
  if (!terms_.empty() && terms_[0].first.is_one()) return terms_[0].second;
  return GaussRational(0);
}

int ParamScalar::min_deformation_degree() const {
  if (terms_.empty()) return 0;
  int d = terms_[0].first.deformation_degree();
  for (const auto& [m, c] : terms_) d = std::min(d, m.deformation_degree());
  return d;
}

int ParamScalar::max_deformation_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.deformation_degree());
  return d;
}

bool ParamScalar::depends_on(Param p) const {
  for (const auto& [m, c] : terms_)
    if (m.exp[static_cast<std::size_t>(p)] != 0) return true;
  return false;
}

void ParamScalar::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (order_ && t.first.deformation_degree() > *order_) continue;
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.second.is_zero(); });
  terms_ = std::move(out);
}

void ParamScalar::apply_order(const std::optional<int>& other) {
  if (!other) return;
  if (order_ && *order_ != *other)
    throw TruncationMismatch("truncation order mismatch: " + std::to_string(*order_) + " vs " +
                             std::to_string(*other));
  order_ = other;
}

ParamScalar ParamScalar::conj() const {
  ParamScalar r = *this;
  for (auto& [m, c] : r.terms_) c = c.conj();
  return r;
}

ParamScalar ParamScalar::truncated(int order) const {
  ParamScalar r = *this;
  if (r.order_ && *r.order_ < order) order = *r.order_;
  r.order_ = order;
  std::erase_if(r.terms_, [order](const Term& t) { return t.first.deformation_degree() > order; });
  return r;
}

ParamScalar ParamScalar::without_order() const {
  ParamScalar r = *this;
  r.order_.reset();
  return r;
}

ParamScalar ParamScalar::substitute(const std::map<Param, ParamScalar>& values) const {
  ParamScalar result;
  for (const auto& [m, c] : terms_) {
    ParamScalar term(c);
    ParamMonomial rest;
    for (std::size_t k = 0; k < kParamCount; ++k) {
      if (m.exp[k] == 0) continue;
      auto it = values.find(static_cast<Param>(k));
      if (it == values.end()) {
        rest.exp[k] = m.exp[k];
        continue;
      }
      for (int e = 0; e < m.exp[k]; ++e) term = term * it->second;
    }
    ParamScalar rest_s;
    rest_s.terms_.emplace_back(rest, GaussRational(1));
    result += term * rest_s;
  }
  if (order_) result = result.truncated(*order_);
  return result;
}

std::complex<double> ParamScalar::evaluate(const ParamValues& values) const {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [m, c] : terms_) {
    std::complex<double> v = c.to_complex();
    for (std::size_t k = 0; k < kParamCount; ++k) {
      if (m.exp[k] == 0) continue;
      auto it = values.find(static_cast<Param>(k));
      if (it == values.end())
        throw std::invalid_argument("no numeric value for parameter " +
                                    std::string(param_name(static_cast<Param>(k))));
      for (int e = 0; e < m.exp[k]; ++e) v *= it->second;
    }
    total += v;
  }
  return total;
}

ParamScalar& ParamScalar::operator+=(const ParamScalar& o) {
  apply_order(o.order_);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

ParamScalar& ParamScalar::operator-=(const ParamScalar& o) { return *this += -o; }

ParamScalar& ParamScalar::operator*=(const ParamScalar& o) {
  *this = *this * o;
  return *this;
}

ParamScalar ParamScalar::operator-() const {
  ParamScalar r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

ParamScalar operator*(const ParamScalar& a, const ParamScalar& b) {
  ParamScalar r;
  r.order_ = a.order_;
  r.apply_order(b.order_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.terms_.size() == 1 && b.terms_[0].first.is_one()) {
    r.terms_ = a.terms_;
    for (auto& [m, c] : r.terms_) c *= b.terms_[0].second;
    r.normalize();
    return r;
  }
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (r.order_ && ma.deformation_degree() + mb.deformation_degree() > *r.order_) continue;
      r.terms_.emplace_back(ma * mb, ca * cb);
    }
  }
  r.normalize();
  return r;
}

bool operator<(const ParamScalar& a, const ParamScalar& b) {
  return std::lexicographical_compare(
      a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
      [](const ParamScalar::Term& x, const ParamScalar::Term& y) {
        if (x.first < y.first) return true;
        if (y.first < x.first) return false;
        return x.second < y.second;
      });
}

namespace {

std::string monomial_str(const ParamMonomial& m) {
  std::string s;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    if (m.exp[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += param_name(static_cast<Param>(k));
    if (m.exp[k] > 1) s += "^" + std::to_string(m.exp[k]);
  }
  return s;
}

// Renders one signed term; returns the text without a leading sign and
// reports the sign separately so sums read "a - b".
std::pair<bool, std::string> term_str(const ParamMonomial& m, const GaussRational& c) {
  std::string mono = monomial_str(m);
  bool negative = false;
  std::string coeff;
  if (c.is_real()) {
    negative = sgn(c.re) < 0;
    Rational a = abs(c.re);
    if (a != 1 || mono.empty()) coeff = render_rational(a);
  } else if (sgn(c.re) == 0) {
    negative = sgn(c.im) < 0;
    Rational a = abs(c.im);
    coeff = (a == 1) ? "i" : render_rational(a) + "*i";
  } else {
    coeff = c.str();
  }
  if (coeff.empty()) return {negative, mono};
  if (mono.empty()) return {negative, coeff};
  return {negative, coeff + "*" + mono};
}

}  // namespace

std::string ParamScalar::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    auto [neg, body] = term_str(m, c);
    if (first) s += neg ? "-" + body : body;
    else s += (neg ? " - " : " + ") + body;
    first = false;
  }
  return s;
}

std::string ParamScalar::factor_str() const {
  if (terms_.size() > 1) return "(" + str() + ")";
  return str();
}

void ScalarBuilder::add(const ParamMonomial& m, const GaussRational& c) {
  if (order && m.deformation_degree() > *order) return;
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) it->second += c;
}

ParamScalar ScalarBuilder::build() {
  ParamScalar r;
  r.order_ = order;
  for (auto& [m, c] : acc)
    if (!c.is_zero()) r.terms_.emplace_back(m, std::move(c));
  acc.clear();
  return r;
}

}  // namespace twistforge
