#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistforge/weyl.hpp"

namespace twistforge {

using cvec = std::vector<std::complex<double>>;

struct GridSettings {
  int n = 256;
  double cutoff = 22.0;  // momenta in [-cutoff, cutoff)
};

/// Uniform periodic momentum grid with spectral d/dp.
class Axis {
 public:
  Axis(int n, double cutoff);
  ~Axis();
  Axis(const Axis&) = delete;
  Axis& operator=(const Axis&) = delete;

  int n() const { return n_; }
  double cutoff() const { return cutoff_; }
  double dp() const { return dp_; }
  double p(int k) const { return -cutoff_ + k * dp_; }
  /// Largest position the grid resolves, pi/dp in units of hbar.
  double position_reach() const;

  /// FFT based derivative; safe to call concurrently.
  void derivative(const cvec& in, cvec& out) const;
  /// Same operator as a dense n x n matrix, row major.
  std::vector<double> derivative_matrix() const;

 private:
  int n_;
  double cutoff_, dp_;
  std::vector<double> wavenumbers_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

/// coeff * (f_1 (x) f_2 (x) ...), one factor per active dimension.
struct ProductVector {
  std::complex<double> coeff{1.0, 0.0};
  std::vector<cvec> factors;
};
using GridVector = std::vector<ProductVector>;

struct Gaussian1D {
  double p_center = 0.0;
  double x_center = 0.0;
  double sigma = 1.0;  // momentum standard deviation
};

struct GridState {
  GridVector amplitudes;
  std::string description;
};

/// F(p) x^a lowered to one diagonal and one power of x per active dimension.
struct GridTerm {
  std::complex<double> coeff;
  std::vector<std::vector<std::complex<double>>> diag;  // empty means identity
  std::vector<int> x_power;
};

struct GridOperator {
  WeylExpression symbolic;
  std::vector<GridTerm> terms;
  bool hermitean = false;
};

/// Formal adjoint with real parameters; xh, ph hermitean.
WeylExpression adjoint(const WeylExpression& e);

class GridRep {
 public:
  GridRep(std::vector<int> dims, GridSettings settings, ParamValues values);

  const std::vector<int>& dims() const { return dims_; }
  const Axis& axis() const { return *axis_; }
  const GridSettings& settings() const { return settings_; }
  double hbar() const;
  const ParamValues& values() const { return values_; }

  /// Normalized product Gaussian; throws GridError when a tail reaches the grid edge.
  GridState gaussian(const std::map<int, Gaussian1D>& per_dim) const;
  GridState superpose(const std::vector<std::pair<std::complex<double>, GridState>>& parts) const;

  GridOperator lower(const WeylExpression& e) const;
  GridVector apply(const GridOperator& op, const GridVector& v) const;
  std::complex<double> inner(const GridVector& a, const GridVector& b) const;
  std::complex<double> expectation(const GridState& s, const GridOperator& op) const;

  /// ||([xh_mu, ph_mu] - i hbar g) psi||.
  double canonical_residual(const GridState& s, int mu) const;

 private:
  std::size_t slot(int mu) const;
  void apply_x(cvec& v, int mu, int power) const;

  std::vector<int> dims_;
  GridSettings settings_;
  ParamValues values_;
  std::shared_ptr<Axis> axis_;
};

/// Full tensor amplitudes over the active dimensions, used to cross-check the
/// factorized evaluation and to exercise the parallel kernels.
struct DenseState {
  int rank = 0;
  int n = 0;
  cvec data;
};

DenseState to_dense(const GridRep& rep, const GridVector& v);
/// In place: data <- diag * (i hbar g d/dp)^power along one axis.
void apply_axis_serial(const GridRep& rep, DenseState& s, std::size_t axis, const std::vector<double>& dmat,
                       const cvec* diag, int power);
void apply_axis_parallel(const GridRep& rep, DenseState& s, std::size_t axis, const std::vector<double>& dmat,
                         const cvec* diag, int power);
DenseState apply_dense(const GridRep& rep, const GridOperator& op, const DenseState& s, bool parallel);
std::complex<double> inner_dense(const GridRep& rep, const DenseState& a, const DenseState& b);

/// sqrt(<A^2> - <A>^2); throws HermiticityError for non-hermitean A.
double dispersion(const GridRep& rep, const GridState& s, const GridOperator& a);

struct UncertaintyLine {
  std::size_t state = 0;
  std::string a, b;
  std::string bound;
  double lhs = 0, rhs = 0, slack = 0;
  double commutator_residual = 0;  // |<[A,B]> grid - <table value>|
  bool pass = true;
};

/// lhs = D(A) D(B), rhs = |<[A,B]>|/2 with the commutator taken on the grid.
UncertaintyLine check_robertson(const GridRep& rep, const GridState& s, const GridOperator& a, const GridOperator& b);

struct StateSampler {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  double p_range = 5.0, x_range = 5.0;
  double sigma_min = 0.5, sigma_max = 1.5;
};

struct SuiteReport {
  std::string preset;
  double parameter = 0, hbar = 1;
  GridSettings grid;
  std::vector<int> dims;
  std::uint64_t seed = 0;
  std::vector<std::string> states;
  std::vector<UncertaintyLine> lines;
  std::vector<std::string> notes;
  bool pass = true;

  nlohmann::json to_json() const;
  std::string text() const;
};

/// Active dimensions of a preset: iso2 {0,1,2}, iso11 {0,1,3}, canonical {0,1,2,3}.
std::vector<int> preset_dims(std::string_view preset);
GridRep preset_grid(std::string_view preset, double parameter, double hbar, GridSettings settings);
std::vector<GridState> sample_states(const GridRep& rep, const StateSampler& sampler);

/// Every inequality line of the preset on every state, parallel over states.
SuiteReport uncertainty_suite(std::string_view preset, double parameter, double hbar, GridSettings settings,
                              const std::vector<GridState>& states, std::uint64_t seed = 0, bool parallel = true);
SuiteReport uncertainty_suite(std::string_view preset, double parameter, double hbar, GridSettings settings,
                              const StateSampler& sampler, bool parallel = true);

struct ScanPoint {
  double center = 0;
  std::map<std::string, double> rhs;  // by line label
  double reference = 0;               // hbar/2 for iso2, hbar/2 cosh(beta center) for iso11
};

struct ScanReport {
  std::string preset;
  double parameter = 0, hbar = 1, sigma = 0;
  std::vector<ScanPoint> points;
  double max_rhs = 0;
  double max_ratio_deviation = 0;  // iso11: max |rhs/reference - 1|
  bool monotone = true;
  std::vector<std::string> notes;
  bool pass = true;

  nlohmann::json to_json() const;
  std::string csv() const;
};

/// Gaussians of width sigma with increasing center momentum (p0 for iso2, p1 for iso11).
ScanReport limit_scan(std::string_view preset, double parameter, double hbar, GridSettings settings,
                      const std::vector<double>& centers, double sigma);

}  // namespace twistforge
