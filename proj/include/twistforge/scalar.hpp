#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace twistforge {

using Rational = mpq_class;

/// Gaussian rational a + b i with exact parts.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r) : re(std::move(r)) { re.canonicalize(); }  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static GaussRational i() { return {Rational(0), Rational(1)}; }
  static GaussRational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return GaussRational(r);
  }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }
  GaussRational conj() const { return {re, -im}; }
  GaussRational inverse() const;
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o);
  GaussRational operator-() const { return {-re, -im}; }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b) { return a * b.inverse(); }
  friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator<(const GaussRational& a, const GaussRational& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }

  std::string str() const;
};

/// Formal real parameters. Everything except hbar counts towards the
/// deformation degree used for truncation.
enum class Param : std::uint8_t {
  hbar,
  alpha_p,
  delta0_p,
  delta3_p,
  delta0_m,
  delta3_m,
  rho00,
  rho03,
  rho30,
  rho33,
  xi1_p,
  xi2_p,
  xi1_m,
  xi2_m,
  gamma_p,
  rho11,
  rho12,
  rho21,
  rho22,
  alpha,
  beta,
};

inline constexpr std::size_t kParamCount = 21;

std::string_view param_name(Param p);
std::optional<Param> param_from_name(std::string_view name);
inline bool is_deformation(Param p) { return p != Param::hbar; }

struct ParamMonomial {
  std::array<std::uint8_t, kParamCount> exp{};

  int degree() const;
  int deformation_degree() const;
  bool is_one() const { return degree() == 0; }
  ParamMonomial operator*(const ParamMonomial& o) const;

  friend bool operator==(const ParamMonomial&, const ParamMonomial&) = default;
  /// Graded lex: lower total degree first, then larger exponent of the
  /// earlier parameter first.
  friend bool operator<(const ParamMonomial& a, const ParamMonomial& b);
};

class ParamScalar;
using ParamValues = std::map<Param, std::complex<double>>;

/// Multivariate polynomial over Gaussian rationals in the formal parameters.
/// An optional truncation order drops every term whose deformation degree
/// exceeds it; combining two different orders throws TruncationMismatch.
class ParamScalar {
 public:
  using Term = std::pair<ParamMonomial, GaussRational>;

  ParamScalar() = default;
  ParamScalar(long v) : ParamScalar(GaussRational(v)) {}  // NOLINT(google-explicit-constructor)
  ParamScalar(GaussRational c);  // NOLINT(google-explicit-constructor)
  static ParamScalar param(Param p, int power = 1);
  static ParamScalar i() { return ParamScalar(GaussRational::i()); }

  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<int>& order() const { return order_; }

  bool is_zero() const { return terms_.empty(); }
  /// Pure number (no parameters); returns it, else nullopt.
  std::optional<GaussRational> constant_value() const;
  GaussRational constant_term() const;
  /// Smallest deformation degree over the terms (0 for zero).
  int min_deformation_degree() const;
  int max_deformation_degree() const;
  bool depends_on(Param p) const;

  ParamScalar conj() const;
  ParamScalar truncated(int order) const;
  ParamScalar without_order() const;
  ParamScalar substitute(const std::map<Param, ParamScalar>& values) const;
  std::complex<double> evaluate(const ParamValues& values) const;

  ParamScalar& operator+=(const ParamScalar& o);
  ParamScalar& operator-=(const ParamScalar& o);
  ParamScalar& operator*=(const ParamScalar& o);
  ParamScalar operator-() const;

  friend ParamScalar operator+(ParamScalar a, const ParamScalar& b) { return a += b; }
  friend ParamScalar operator-(ParamScalar a, const ParamScalar& b) { return a -= b; }
  friend ParamScalar operator*(const ParamScalar& a, const ParamScalar& b);
  friend bool operator==(const ParamScalar& a, const ParamScalar& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const ParamScalar& a, const ParamScalar& b);

  /// Canonical text, e.g. "2*i*hbar*delta0m" or "(1 - i*alpha)".
  std::string str() const;
  /// Like str() but parenthesised when it has more than one term.
  std::string factor_str() const;

 private:
  friend struct ScalarBuilder;
  void normalize();
  void apply_order(const std::optional<int>& other);

  std::vector<Term> terms_;
  std::optional<int> order_;
};

/// Accumulates terms in a map before producing a ParamScalar.
struct ScalarBuilder {
  std::map<ParamMonomial, GaussRational> acc;
  std::optional<int> order;
  void add(const ParamMonomial& m, const GaussRational& c);
  ParamScalar build();
};

std::string render_rational(const Rational& r);

}  // namespace twistforge
