#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twistforge/scalar.hpp"

namespace twistforge {

/// Base generators of the Poincare algebra in PBW order: momenta first.
enum class Generator : std::uint8_t { P0, P1, P2, P3, M1, M2, M3, N1, N2, N3 };

inline constexpr int kGeneratorCount = 10;

std::string_view generator_name(Generator g);
inline bool is_momentum(Generator g) { return static_cast<int>(g) < 4; }
inline Generator momentum(int mu) { return static_cast<Generator>(mu); }

/// PBW monomial: generators encoded as '0'+index, non-decreasing.
using Word = std::string;

inline char encode(Generator g) { return static_cast<char>('0' + static_cast<int>(g)); }
inline Generator decode(char c) { return static_cast<Generator>(c - '0'); }

/// Structure-constant convention. sigma = -1 takes the opposite Lie
/// algebra, nu = -1 composes with N -> -N. Both are automorphism classes,
/// so every choice satisfies Jacobi; (1, 1) is
///   [M_i, M_j] = i e_ijk M_k   [M_i, N_j] = i e_ijk N_k   [N_i, N_j] = -i e_ijk M_k
///   [M_i, P_j] = i e_ijk P_k   [N_i, P_0] = i P_i         [N_i, P_j] = i d_ij P_0
/// i.e. M3 = x1 p2 - x2 p1, N3 = x3 p0 - x0 p3 with [x_mu, p_nu] = i g_mu_nu.
struct Convention {
  int sigma = 1;
  int nu = 1;

  static Convention physical() { return {}; }
  std::string str() const;
  friend bool operator==(const Convention&, const Convention&) = default;
};

using LinearCombination = std::vector<std::pair<Generator, GaussRational>>;

LinearCombination bracket_generators(Generator a, Generator b, const Convention& conv = {});

class AlgebraElement {
 public:
  using Terms = std::map<Word, ParamScalar>;

  AlgebraElement() = default;
  AlgebraElement(ParamScalar c);  // NOLINT(google-explicit-constructor)
  static AlgebraElement generator(Generator g);
  static AlgebraElement unit() { return AlgebraElement(ParamScalar(1)); }
  /// Already-ordered word; the caller guarantees PBW order.
  static AlgebraElement ordered_word(const Word& w, ParamScalar c = ParamScalar(1));

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_word_length() const;
  bool translation_only() const;

  AlgebraElement truncated(int order) const;
  AlgebraElement dagger(const Convention& conv = {}) const;
  AlgebraElement substitute(const std::map<Param, ParamScalar>& values) const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement operator-() const;
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(const ParamScalar& s, const AlgebraElement& x);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  friend struct AlgebraBuilder;
  void add(const Word& w, const ParamScalar& c);
  Terms terms_;
};

std::string render_word(const Word& w);

/// Rewrites an arbitrary generator word into PBW normal form using the
/// bracket; results are memoised per thread.
AlgebraElement normal_order(std::span<const Generator> word, const Convention& conv = {});
/// Normal form of the concatenation of two PBW words, as number coefficients.
const std::vector<std::pair<Word, GaussRational>>& word_product(const Word& a, const Word& b,
                                                                const Convention& conv = {});

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const Convention& conv = {});
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b, const Convention& conv = {});
ParamScalar counit(const AlgebraElement& x);

/// M+- = M1 +- i M2 and likewise for N, P.
AlgebraElement combo_plus_minus(char family, int sign);

/// Finite combination of tensor monomials of fixed arity. Keys join the
/// PBW words of the legs with '|'.
class TensorElement {
 public:
  using Terms = std::map<std::string, ParamScalar>;

  explicit TensorElement(int arity = 2) : arity_(arity) {}
  static TensorElement unit(int arity, std::optional<int> order = std::nullopt);
  static TensorElement product(const std::vector<AlgebraElement>& legs);
  static TensorElement pure(const std::vector<Word>& legs, ParamScalar c);

  int arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> order() const;
  int min_deformation_degree() const;

  TensorElement truncated(int order) const;
  TensorElement dagger(const Convention& conv = {}) const;
  /// Applies the primitive coproduct to leg k, raising the arity by one.
  TensorElement coproduct_on_leg(int k) const;
  TensorElement counit_on_leg(int k) const;
  /// Inserts a unit leg at position k (F12 = F (x) 1 is insert_unit(2)).
  TensorElement insert_unit(int k) const;
  TensorElement substitute(const std::map<Param, ParamScalar>& values) const;
  bool translation_only() const;

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement operator-() const;
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const ParamScalar& s, const TensorElement& t);
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  /// Legs joined by " (x) " (ascii) or " ⊗ ".
  std::string str(bool ascii = true) const;

  static std::vector<Word> split(const std::string& key);
  static std::string join(const std::vector<Word>& legs);

 private:
  friend TensorElement tensor_mul(const TensorElement&, const TensorElement&, const Convention&);
  void add(const std::string& key, const ParamScalar& c);
  int arity_;
  Terms terms_;
};

TensorElement tensor_mul(const TensorElement& s, const TensorElement& t, const Convention& conv = {});
TensorElement coproduct0(const AlgebraElement& x);

/// exp(f) truncated at deformation order n; f must have no order-0 part.
TensorElement tensor_exp(const TensorElement& f, int n, const Convention& conv = {});

}  // namespace twistforge
