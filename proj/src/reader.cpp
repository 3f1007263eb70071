#include "twistforge/reader.hpp"

#include <cctype>

namespace twistforge {

namespace {

bool has_coordinates(const PhaseValue& v) {
  for (const auto& f : v.x)
    if (!f.is_zero()) return true;
  return false;
}

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  PhaseValue run() {
    PhaseValue v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PhaseValue sum() {
    skip();
    PhaseValue v;
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    PhaseValue first = product();
    v = negate ? -first : first;
    while (true) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else break;
    }
    return v;
  }

  static PhaseValue multiply(const PhaseValue& a, const PhaseValue& b, Reader& r) {
    bool ax = has_coordinates(a), bx = has_coordinates(b);
    if (ax && bx) r.fail("product of coordinates");
    if (ax) return b.scalar * a;
    return a.scalar * b;
  }

  PhaseValue product() {
    PhaseValue v = power();
    while (true) {
      if (eat('*')) v = multiply(v, power(), *this);
      else if (eat('/')) {
        PhaseValue d = power();
        if (has_coordinates(d) || d.scalar.terms().size() != 1 || !d.scalar.terms().begin()->first.is_one())
          fail("division by a non-constant");
        auto q = d.scalar.terms().begin()->second.constant_value();
        if (!q) fail("division by a non-number");
        if (q->im != 0 || q->re == 0) fail("division by zero or a complex number");
        v = MomentumFunction(ParamScalar(GaussRational(Rational(Rational(1) / q->re)))) * v;
      } else break;
    }
    return v;
  }

  PhaseValue power() {
    PhaseValue base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an exponent");
    int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (has_coordinates(base) && e > 1) fail("power of a coordinate");
    PhaseValue r;
    r.scalar = MomentumFunction(ParamScalar(1));
    for (int k = 0; k < e; ++k) r = multiply(r, base, *this);
    return r;
  }

  PhaseValue atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      PhaseValue v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string digits(s_.substr(start, pos_ - start));
      std::string scale = "1";
      if (pos_ < s_.size() && s_[pos_] == '.') {
        // decimals are read exactly
        ++pos_;
        std::size_t frac = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (frac == pos_) fail("expected digits after '.'");
        digits += std::string(s_.substr(frac, pos_ - frac));
        scale += std::string(pos_ - frac, '0');
      }
      PhaseValue v;
      v.scalar = MomentumFunction(ParamScalar(GaussRational(Rational(Rational(digits, 10) / Rational(scale, 10)))));
      return v;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string word(s_.substr(start, pos_ - start));

    static const std::map<std::string, Trans> funcs{
        {"cos", Trans::cos}, {"sin", Trans::sin}, {"cosh", Trans::cosh}, {"sinh", Trans::sinh}, {"exp", Trans::exp}};
    if (auto f = funcs.find(word); f != funcs.end()) {
      if (!eat('(')) fail("expected '(' after " + word);
      PhaseValue arg = sum();
      if (!eat(')')) fail("expected ')'");
      PhaseValue v;
      v.scalar = apply_trans(f->second, linear_form(arg));
      return v;
    }
    PhaseValue v;
    if (word == "i") {
      v.scalar = MomentumFunction(ParamScalar::i());
      return v;
    }
    if (word.size() == 2 && (word[0] == 'p' || word[0] == 'x') && word[1] >= '0' && word[1] <= '3') {
      int mu = word[1] - '0';
      if (word[0] == 'p') v.scalar = MomentumFunction::momentum(mu);
      else v.x[static_cast<std::size_t>(mu)] = MomentumFunction(ParamScalar(1));
      return v;
    }
    if (auto p = param_from_name(word)) {
      v.scalar = MomentumFunction(ParamScalar::param(*p));
      return v;
    }
    pos_ = start;
    fail("unknown name '" + word + "'");
  }

  LinearForm linear_form(const PhaseValue& arg) {
    if (has_coordinates(arg)) fail("coordinate inside a function argument");
    LinearForm l;
    for (const auto& [m, c] : arg.scalar.terms()) {
      if (m.has_atoms() || m.p_degree() != 1) fail("function argument must be linear in the momenta");
      for (std::size_t mu = 0; mu < 4; ++mu)
        if (m.p[mu] == 1) l.coeff[mu] += c;
    }
    return l;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PhaseValue parse_phase_value(std::string_view text) { return Reader(text).run(); }

MomentumFunction parse_momentum_function(std::string_view text) {
  PhaseValue v = parse_phase_value(text);
  if (has_coordinates(v)) throw ParseError("coordinates not allowed here", 0);
  return v.scalar;
}

ParamScalar parse_scalar(std::string_view text) {
  MomentumFunction f = parse_momentum_function(text);
  if (f.is_zero()) return ParamScalar{};
  if (f.terms().size() != 1 || !f.terms().begin()->first.is_one())
    throw ParseError("momenta not allowed in a parameter value", 0);
  return f.terms().begin()->second;
}

}  // namespace twistforge
