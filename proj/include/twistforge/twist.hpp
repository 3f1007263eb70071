#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistforge/algebra.hpp"
#include "twistforge/momentum_function.hpp"
#include "twistforge/report.hpp"

namespace twistforge {

enum class TwistCase { i, ii };

/// Case (ii) right factor: the form that agrees with the left factor, or the
/// literal one with A2 = A1 and C_a = B_a.
enum class TwistVariant { corrected, printed };

std::string_view case_name(TwistCase c);

struct TwistSpec {
  TwistCase which = TwistCase::i;
  /// Values for the case parameters; missing ones stay symbolic. Values must
  /// be zero or carry deformation degree >= 1 (numbers go in after derivation).
  std::map<Param, ParamScalar> assignment;
  int order = 4;
  bool hermitean = true;
  TwistVariant variant = TwistVariant::corrected;
  Convention conv{};

  /// Everything symbolic.
  static TwistSpec generic(TwistCase c, int order = 4);
  /// Case i with alpha+ = delta+ = rho = 0; case ii with xi+ = gamma+ = rho = 0.
  static TwistSpec simplified(TwistCase c, int order = 4);

  ParamScalar value(Param p) const;
  /// Throws std::invalid_argument on foreign parameters, numeric values, or
  /// (with the hermitean flag) non-real values.
  void validate() const;
};

/// Parameters a case's twist depends on.
const std::vector<Param>& case_parameters(TwistCase c);
/// Generators spanning the twisting subalgebra.
std::vector<Generator> subalgebra(TwistCase c);
/// Momenta inside the subalgebra (the arguments of the coproduct legs).
std::vector<int> argument_momenta(TwistCase c);

struct TwistFactors {
  AlgebraElement a1, a2;
  std::vector<AlgebraElement> b, c;  // indexed like argument_momenta
};

struct Twist {
  TwistSpec spec;
  TwistFactors factors;
  TensorElement left, left_inv;
  TensorElement right, right_inv;

  int order() const { return spec.order; }
  const Convention& conv() const { return spec.conv; }
};

Twist build_twist(const TwistSpec& spec);

/// One summand carrier (x) partner or partner (x) carrier of a coproduct in
/// the translation sector.
struct CoproductPiece {
  Generator carrier;
  bool carrier_left;
  MomentumFunction partner;  // closed form when recognized, else the series
  bool closed;
};

struct TwistedCoproduct {
  TensorElement series;
  bool decomposed = false;
  std::vector<CoproductPiece> pieces;

  std::string str(bool ascii = true) const;
};

/// F Delta(X) F^-1 with the left factorisation, truncated to the twist order.
TensorElement twisted_series(const Twist& F, const AlgebraElement& x);
TwistedCoproduct twisted_coproduct(const Twist& F, const AlgebraElement& x);

Report check_cocycle(const Twist& F);
Report check_coassoc(const Twist& F, const AlgebraElement& x);
/// check_coassoc on all ten generators; parallel fan-out with a serial
/// reference path that must give the same report.
Report check_coassoc_all(const Twist& F, bool parallel = true);
Report check_hermiticity(const Twist& F);
/// Runs both case (ii) variants and states which one satisfies the cocycle
/// condition with agreeing factorisations.
Report adjudicate_variants(TwistSpec spec);

/// Residual text: "0" or the rendered element with its lowest order.
std::string residual_text(const TensorElement& diff);

}  // namespace twistforge
