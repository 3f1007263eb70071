#pragma once

#include <array>
#include <map>
#include <string>

#include "twistforge/duality.hpp"
#include "twistforge/momentum_function.hpp"
#include "twistforge/report.hpp"

namespace twistforge {

/// Hatted canonical variables when rendering.
extern const VariableNames kHatMomenta;  // ph0..ph3

/// sum F(ph) * xh^a with all momentum functions left of the positions.
class WeylExpression {
 public:
  using XWord = std::array<std::uint8_t, 4>;  // exponents of xh0..xh3
  using Terms = std::map<XWord, MomentumFunction>;

  WeylExpression() = default;
  WeylExpression(MomentumFunction f);  // NOLINT(google-explicit-constructor)
  static WeylExpression position(int mu);
  static WeylExpression momentum(int mu);
  static WeylExpression term(const MomentumFunction& f, const XWord& w);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int x_degree() const;
  WeylExpression expand(int n) const;
  WeylExpression substitute(const std::map<Param, ParamScalar>& values) const;

  WeylExpression& operator+=(const WeylExpression& o);
  WeylExpression& operator-=(const WeylExpression& o);
  WeylExpression operator-() const;
  friend WeylExpression operator+(WeylExpression a, const WeylExpression& b) { return a += b; }
  friend WeylExpression operator-(WeylExpression a, const WeylExpression& b) { return a -= b; }
  friend WeylExpression operator*(const WeylExpression& a, const WeylExpression& b);
  friend bool operator==(const WeylExpression& a, const WeylExpression& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  void add(const XWord& w, const MomentumFunction& f);
  Terms terms_;
};

WeylExpression weyl_commutator(const WeylExpression& a, const WeylExpression& b);

struct Realization {
  std::string preset;
  ParamScalar parameter;  // alpha for iso2, beta for iso11
  std::map<PhaseGenerator, WeylExpression> images;

  /// Image of a table value F(p) + sum F_l(p) x_l.
  WeylExpression image(const PhaseValue& v) const;
};

/// "iso2", "iso11" or "canonical"; parameter defaults to the symbol.
Realization realize(std::string_view preset, std::optional<ParamScalar> parameter = std::nullopt);

/// Commutators of all realized generator pairs against the preset table.
/// Pairs that do not agree exactly are compared as series at order n.
Report verify_realization(std::string_view preset, std::optional<ParamScalar> parameter = std::nullopt,
                          int n = 8);

/// Determinants of the rotation and boost matrices minus one, as series at order n.
MomentumFunction rotation_determinant_defect(int n);
MomentumFunction boost_determinant_defect(int n);

}  // namespace twistforge
