#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistforge/scalar.hpp"

namespace twistforge {

/// Linear form sum_mu c_mu P_mu with parameter coefficients.
struct LinearForm {
  std::array<ParamScalar, 4> coeff{};

  static LinearForm single(int mu, ParamScalar c);
  bool is_zero() const;
  int min_deformation_degree() const;
  LinearForm operator-() const;
  LinearForm scaled(const ParamScalar& s) const;

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeff == b.coeff; }
  friend bool operator<(const LinearForm& a, const LinearForm& b) { return a.coeff < b.coeff; }
};

enum class Trans { cos, sin, cosh, sinh, exp };

std::string_view trans_name(Trans t);

struct Atom {
  Trans kind;
  LinearForm arg;

  friend bool operator==(const Atom& a, const Atom& b) { return a.kind == b.kind && a.arg == b.arg; }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.arg < b.arg;
  }
};

/// P_0^a0 ... P_3^a3 times a product of transcendental atoms.
struct FuncMonomial {
  std::array<std::uint8_t, 4> p{};
  std::vector<std::pair<Atom, int>> atoms;  // sorted by atom, positive powers

  int p_degree() const { return p[0] + p[1] + p[2] + p[3]; }
  bool has_atoms() const { return !atoms.empty(); }
  bool is_one() const { return p_degree() == 0 && atoms.empty(); }
  FuncMonomial operator*(const FuncMonomial& o) const;

  friend bool operator==(const FuncMonomial&, const FuncMonomial&) = default;
  friend bool operator<(const FuncMonomial& a, const FuncMonomial& b);
};

using MomentumValues = std::array<double, 4>;
using VariableNames = std::array<std::string, 4>;
extern const VariableNames kLowerMomenta;  // p0..p3
extern const VariableNames kUpperMomenta;  // P0..P3

/// Element of the commutative algebra generated by the momenta and the
/// transcendental atoms, with parameter coefficients. Without atoms and with
/// an order set, it is a truncated series.
class MomentumFunction {
 public:
  using Terms = std::map<FuncMonomial, ParamScalar>;

  MomentumFunction() = default;
  MomentumFunction(ParamScalar c);  // NOLINT(google-explicit-constructor)
  static MomentumFunction momentum(int mu);
  static MomentumFunction atom(Trans kind, LinearForm arg);
  static MomentumFunction monomial(FuncMonomial m, ParamScalar c);
  static MomentumFunction linear(const LinearForm& l);

  const Terms& terms() const { return terms_; }
  const std::optional<int>& order() const { return order_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_series() const;
  int max_p_degree() const;
  int max_deformation_degree() const;

  MomentumFunction truncated(int order) const;
  MomentumFunction without_order() const;
  /// Part of homogeneous momentum degree d (series only make sense here).
  MomentumFunction homogeneous_part(int d) const;
  /// Coefficient of the pure momentum monomial p (no atoms).
  ParamScalar coefficient(const std::array<std::uint8_t, 4>& p) const;

  MomentumFunction diff(int mu) const;
  ParamScalar at_zero() const;
  MomentumFunction conj() const;
  MomentumFunction substitute(const std::map<Param, ParamScalar>& values) const;
  std::complex<double> evaluate(const ParamValues& params, const MomentumValues& p) const;

  /// Exact Taylor truncation at deformation order n.
  MomentumFunction expand(int n) const;

  MomentumFunction& operator+=(const MomentumFunction& o);
  MomentumFunction& operator-=(const MomentumFunction& o);
  MomentumFunction operator-() const;
  friend MomentumFunction operator+(MomentumFunction a, const MomentumFunction& b) { return a += b; }
  friend MomentumFunction operator-(MomentumFunction a, const MomentumFunction& b) { return a -= b; }
  friend MomentumFunction operator*(const MomentumFunction& a, const MomentumFunction& b);
  friend MomentumFunction operator*(const ParamScalar& s, const MomentumFunction& f);
  friend bool operator==(const MomentumFunction& a, const MomentumFunction& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const MomentumFunction& a, const MomentumFunction& b);

  std::string str(const VariableNames& names = kLowerMomenta) const;

 private:
  void add_term(const FuncMonomial& m, const ParamScalar& c);
  void set_order(const std::optional<int>& o);

  Terms terms_;
  std::optional<int> order_;
};

MomentumFunction apply_trans(Trans kind, const LinearForm& arg);
/// Taylor series of kind(arg) at deformation order n.
MomentumFunction trans_series(Trans kind, const LinearForm& arg, int n);

std::string render_linear(const LinearForm& l, const VariableNames& names);
std::string render_monomial(const FuncMonomial& m, const VariableNames& names);
/// Renders "coeff*monomial" pieces joined into a signed sum.
std::string render_sum(const std::vector<std::pair<std::string, ParamScalar>>& pieces);

/// Closed-form recognition of a truncated series against
/// c0 + c1 * f(L), f in {cos, sin, cosh, sinh, exp}. c0, c1 may not carry
/// deformation parameters. Throws RecognitionError on no match or ambiguity.
MomentumFunction series_recognize(const MomentumFunction& series);

/// Recognition when possible; otherwise the series itself when it is an
/// exact polynomial (no term within two orders of the truncation edge).
/// Second member reports whether a closed form was established.
std::pair<MomentumFunction, bool> to_closed_form(const MomentumFunction& series);

/// Exact square roots, nullopt when not a perfect square.
std::optional<GaussRational> sqrt_exact(const GaussRational& x);
std::optional<ParamScalar> sqrt_exact(const ParamScalar& x);

}  // namespace twistforge
