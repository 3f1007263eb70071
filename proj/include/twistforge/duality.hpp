#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistforge/report.hpp"
#include "twistforge/twist.hpp"

namespace twistforge {

/// Metric diag(-1, 1, 1, 1).
inline int metric(int mu) { return mu == 0 ? -1 : 1; }

struct PhaseGenerator {
  enum Kind : std::uint8_t { x, p } kind;
  int index;

  std::string name() const { return std::string(kind == x ? "x" : "p") + std::to_string(index); }
  static std::optional<PhaseGenerator> parse(std::string_view s);
  friend bool operator==(const PhaseGenerator&, const PhaseGenerator&) = default;
  friend auto operator<=>(const PhaseGenerator&, const PhaseGenerator&) = default;
};

/// F(p) + sum_l F_l(p) x_l, momentum functions written to the left.
struct PhaseValue {
  MomentumFunction scalar;
  std::array<MomentumFunction, 4> x{};

  static PhaseValue coordinate(int lambda, ParamScalar c = ParamScalar(1));
  bool is_zero() const;
  PhaseValue expand(int n) const;
  PhaseValue truncated(int n) const;
  PhaseValue substitute(const std::map<Param, ParamScalar>& values) const;

  PhaseValue& operator+=(const PhaseValue& o);
  PhaseValue& operator-=(const PhaseValue& o);
  PhaseValue operator-() const;
  friend PhaseValue operator+(PhaseValue a, const PhaseValue& b) { return a += b; }
  friend PhaseValue operator-(PhaseValue a, const PhaseValue& b) { return a -= b; }
  friend PhaseValue operator*(const MomentumFunction& f, const PhaseValue& v);
  friend bool operator==(const PhaseValue& a, const PhaseValue& b) { return a.scalar == b.scalar && a.x == b.x; }

  std::string str() const;
};

/// Pairing <x_mu, f> = -i hbar g_mu_mu (df/dP_mu)(0).
ParamScalar pair(int mu, const MomentumFunction& f);
/// Throws SectorError when a Lorentz generator is present.
ParamScalar pair(int mu, const AlgebraElement& f);

/// Twisted coproducts of P0..P3 as series.
struct CoproductTable {
  int order = 0;
  std::array<TensorElement, 4> momenta;
};

/// Throws SectorError when a momentum coproduct leaves the translation sector.
CoproductTable coproduct_table(const Twist& F);

/// [p_mu, x_nu] as a series at the table order.
MomentumFunction cross_commutator(int mu, int nu, const CoproductTable& table);
/// [x_mu, x_nu] for mu < nu; throws NonLieError when products of coordinates
/// would be needed.
std::array<std::array<PhaseValue, 4>, 4> dual_brackets(const CoproductTable& table);

struct RelationEntry {
  PhaseGenerator a, b;
  PhaseValue value;   // closed forms where recognized
  PhaseValue series;  // truncated at the table order
  bool closed_form = true;
};

struct RelationTable {
  std::string name;
  int order = 0;
  std::vector<RelationEntry> entries;  // nonzero [x,x] (a<b) and [p,x]
  std::vector<std::string> annotations;

  /// [a, b] via antisymmetry; zero when absent.
  PhaseValue value(const PhaseGenerator& a, const PhaseGenerator& b, bool series = false) const;
  /// Replaces (or inserts) [a, b]; series is taken to be the value itself.
  void set(const PhaseGenerator& a, const PhaseGenerator& b, const PhaseValue& v);
  /// Stores an existing [b, a] entry as [a, b] (value negated).
  void orient(const PhaseGenerator& a, const PhaseGenerator& b);

  nlohmann::json to_json() const;
  std::string text() const;
};

RelationTable relation_table(const TwistSpec& spec, std::string name = "custom");
/// "iso2", "iso11" or "canonical".
RelationTable relation_table(std::string_view preset, int order = 4);
TwistSpec preset_spec(std::string_view preset, int order = 4);

Report check_jacobi(const RelationTable& table);

enum class AlgebraClass { abelian, iso2, iso11, other };
std::string_view class_name(AlgebraClass c);
/// Uses generic rational values for symbolic parameters unless given.
AlgebraClass classify_algebra(const RelationTable& table, const std::map<Param, GaussRational>& values = {});

}  // namespace twistforge
