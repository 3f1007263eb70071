#include "twistforge/uncertainty.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "twistforge/errors.hpp"

namespace twistforge {

namespace {

using cd = std::complex<double>;

// amplitude at the periodic edge ~ exp(-k^2/4) ~ 1e-11; the probability
// tail is far smaller, but the spectral derivative sees the amplitude
constexpr double kTailWidths = 10.0;
constexpr double kNormTol = 1e-12;
constexpr double kRobertsonTol = 1e-9;
constexpr double kTableTol = 1e-6;
constexpr double kCanonicalTol = 1e-8;

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

cd ih_g(double hbar, int mu) { return cd(0.0, hbar * metric(mu)); }

}  // namespace

// ---------------------------------------------------------------------------

Axis::Axis(int n, double cutoff) : n_(n), cutoff_(cutoff), dp_(2.0 * cutoff / n) {
  if (n < 8 || n % 2 != 0) throw GridError("grid size must be even and at least 8");
  if (!(cutoff > 0)) throw GridError("cutoff must be positive");
  double base = 2.0 * std::numbers::pi / (2.0 * cutoff);
  wavenumbers_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    int k = j < n / 2 ? j : j - n;
    wavenumbers_[static_cast<std::size_t>(j)] = j == n / 2 ? 0.0 : base * k;
  }
  cvec buf(static_cast<std::size_t>(n));
  auto* b = reinterpret_cast<fftw_complex*>(buf.data());
  std::lock_guard lock(plan_mutex());
  forward_ = fftw_plan_dft_1d(n, b, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_ = fftw_plan_dft_1d(n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Axis::~Axis() {
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

double Axis::position_reach() const { return std::numbers::pi / dp_; }

void Axis::derivative(const cvec& in, cvec& out) const {
  cvec work(in);
  auto* w = reinterpret_cast<fftw_complex*>(work.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), w, w);
  for (std::size_t j = 0; j < work.size(); ++j) work[j] *= cd(0.0, wavenumbers_[j] / n_);
  fftw_execute_dft(static_cast<fftw_plan>(backward_), w, w);
  out = std::move(work);
}

std::vector<double> Axis::derivative_matrix() const {
  // periodic cotangent matrix, Nyquist mode differentiated to zero
  std::vector<double> d(static_cast<std::size_t>(n_ * n_), 0.0);
  double scale = 2.0 * std::numbers::pi / (2.0 * cutoff_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      int k = i - j;
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d[static_cast<std::size_t>(i * n_ + j)] = scale * 0.5 * sign / std::tan(k * std::numbers::pi / n_);
    }
  return d;
}

// ---------------------------------------------------------------------------

WeylExpression adjoint(const WeylExpression& e) {
  WeylExpression r;
  for (const auto& [w, f] : e.terms()) r += WeylExpression::term(MomentumFunction(ParamScalar(1)), w) * WeylExpression(f.conj());
  return r;
}

GridRep::GridRep(std::vector<int> dims, GridSettings settings, ParamValues values)
    : dims_(std::move(dims)), settings_(settings), values_(std::move(values)),
      axis_(std::make_shared<Axis>(settings.n, settings.cutoff)) {
  if (dims_.empty()) throw GridError("no active dimensions");
  if (!values_.contains(Param::hbar)) values_[Param::hbar] = 1.0;
}

double GridRep::hbar() const { return values_.at(Param::hbar).real(); }

std::size_t GridRep::slot(int mu) const {
  for (std::size_t k = 0; k < dims_.size(); ++k)
    if (dims_[k] == mu) return k;
  throw GridError("dimension " + std::to_string(mu) + " is not represented on this grid");
}

GridState GridRep::gaussian(const std::map<int, Gaussian1D>& per_dim) const {
  const Axis& ax = *axis_;
  ProductVector pv;
  std::ostringstream desc;
  for (int mu : dims_) {
    auto it = per_dim.find(mu);
    Gaussian1D g = it == per_dim.end() ? Gaussian1D{} : it->second;
    if (!(g.sigma > 0)) throw GridError("gaussian width must be positive");
    if (std::abs(g.p_center) + kTailWidths * g.sigma > ax.cutoff())
      throw GridError("momentum center " + std::to_string(g.p_center) + " too close to the grid cutoff " +
                      std::to_string(ax.cutoff()) + "; increase the cutoff");
    double dx = hbar() / (2.0 * g.sigma);
    if (std::abs(g.x_center) + kTailWidths * dx > hbar() * ax.position_reach())
      throw GridError("position spread exceeds the grid resolution; increase n or lower the cutoff");
    cvec f(static_cast<std::size_t>(ax.n()));
    double norm = 0;
    for (int k = 0; k < ax.n(); ++k) {
      double p = ax.p(k), u = p - g.p_center;
      double phase = -g.x_center * p / (hbar() * metric(mu));
      f[static_cast<std::size_t>(k)] = std::exp(-u * u / (4 * g.sigma * g.sigma)) * std::polar(1.0, phase);
      norm += std::norm(f[static_cast<std::size_t>(k)]) * ax.dp();
    }
    for (auto& z : f) z /= std::sqrt(norm);
    pv.factors.push_back(std::move(f));
    desc << (desc.tellp() > 0 ? " " : "") << "d" << mu << "(p=" << g.p_center << ",x=" << g.x_center
         << ",s=" << g.sigma << ")";
  }
  return {{pv}, desc.str()};
}

GridState GridRep::superpose(const std::vector<std::pair<cd, GridState>>& parts) const {
  GridState s;
  for (const auto& [c, st] : parts) {
    for (ProductVector pv : st.amplitudes) {
      pv.coeff *= c;
      s.amplitudes.push_back(std::move(pv));
    }
    s.description += (s.description.empty() ? "" : " + ") + std::string("(") + st.description + ")";
  }
  double norm = inner(s.amplitudes, s.amplitudes).real();
  if (norm < kNormTol) throw GridError("superposition has zero norm");
  for (auto& pv : s.amplitudes) pv.coeff /= std::sqrt(norm);
  return s;
}

GridOperator GridRep::lower(const WeylExpression& e) const {
  GridOperator op;
  op.symbolic = e;
  op.hermitean = adjoint(e) == e;
  const Axis& ax = *axis_;
  for (const auto& [w, f] : e.terms()) {
    for (const auto& [m, c] : f.terms()) {
      GridTerm t;
      t.coeff = c.evaluate(values_);
      t.diag.resize(dims_.size());
      t.x_power.assign(dims_.size(), 0);
      std::vector<FuncMonomial> parts(dims_.size());
      for (int mu = 0; mu < 4; ++mu) {
        auto u = static_cast<std::size_t>(mu);
        if (m.p[u] != 0) parts[slot(mu)].p[u] = m.p[u];
        if (w[u] != 0) t.x_power[slot(mu)] = w[u];
      }
      for (const auto& [atom, power] : m.atoms) {
        int only = -1;
        for (int mu = 0; mu < 4; ++mu) {
          if (atom.arg.coeff[static_cast<std::size_t>(mu)].is_zero()) continue;
          if (only >= 0) throw GridError("operator is not separable across grid dimensions");
          only = mu;
        }
        if (only < 0) throw GridError("constant transcendental atom left unevaluated");
        parts[slot(only)].atoms.emplace_back(atom, power);
      }
      for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (parts[k].is_one()) continue;
        MomentumFunction g = MomentumFunction::monomial(parts[k], ParamScalar(1));
        auto& d = t.diag[k];
        d.resize(static_cast<std::size_t>(ax.n()));
        MomentumValues pv{};
        for (int j = 0; j < ax.n(); ++j) {
          pv[static_cast<std::size_t>(dims_[k])] = ax.p(j);
          d[static_cast<std::size_t>(j)] = g.evaluate(values_, pv);
        }
      }
      op.terms.push_back(std::move(t));
    }
  }
  return op;
}

void GridRep::apply_x(cvec& v, int mu, int power) const {
  cd c = ih_g(hbar(), mu);
  for (int k = 0; k < power; ++k) {
    axis_->derivative(v, v);
    for (auto& z : v) z *= c;
  }
}

GridVector GridRep::apply(const GridOperator& op, const GridVector& v) const {
  GridVector out;
  out.reserve(op.terms.size() * v.size());
  for (const GridTerm& t : op.terms)
    for (const ProductVector& pv : v) {
      ProductVector r{t.coeff * pv.coeff, pv.factors};
      for (std::size_t k = 0; k < dims_.size(); ++k) {
        apply_x(r.factors[k], dims_[k], t.x_power[k]);
        if (!t.diag[k].empty())
          for (std::size_t j = 0; j < r.factors[k].size(); ++j) r.factors[k][j] *= t.diag[k][j];
      }
      out.push_back(std::move(r));
    }
  return out;
}

cd GridRep::inner(const GridVector& a, const GridVector& b) const {
  cd sum = 0;
  double dp = axis_->dp();
  for (const ProductVector& x : a)
    for (const ProductVector& y : b) {
      cd prod = std::conj(x.coeff) * y.coeff;
      for (std::size_t k = 0; k < dims_.size() && prod != 0.0; ++k) {
        cd s = 0;
        for (std::size_t j = 0; j < x.factors[k].size(); ++j) s += std::conj(x.factors[k][j]) * y.factors[k][j];
        prod *= s * dp;
      }
      sum += prod;
    }
  return sum;
}

cd GridRep::expectation(const GridState& s, const GridOperator& op) const {
  return inner(s.amplitudes, apply(op, s.amplitudes));
}

double GridRep::canonical_residual(const GridState& s, int mu) const {
  // residual formed factor by factor; summing whole operator images would cancel
  std::size_t k = slot(mu);
  const Axis& ax = *axis_;
  GridVector r;
  for (const ProductVector& pv : s.amplitudes) {
    const cvec& f = pv.factors[k];
    cvec pf(f.size()), xpf, xf(f);
    for (std::size_t j = 0; j < f.size(); ++j) pf[j] = ax.p(static_cast<int>(j)) * f[j];
    xpf = pf;
    apply_x(xpf, mu, 1);
    apply_x(xf, mu, 1);
    cd c = ih_g(hbar(), mu);
    ProductVector out = pv;
    for (std::size_t j = 0; j < f.size(); ++j)
      out.factors[k][j] = xpf[j] - ax.p(static_cast<int>(j)) * xf[j] - c * f[j];
    r.push_back(std::move(out));
  }
  return std::sqrt(std::max(0.0, inner(r, r).real()));
}

// ---------------------------------------------------------------------------

DenseState to_dense(const GridRep& rep, const GridVector& v) {
  DenseState s;
  s.rank = static_cast<int>(rep.dims().size());
  s.n = rep.axis().n();
  std::size_t total = 1;
  for (int k = 0; k < s.rank; ++k) total *= static_cast<std::size_t>(s.n);
  s.data.assign(total, 0.0);
  auto n = static_cast<std::size_t>(s.n);
  for (const ProductVector& pv : v)
    for (std::size_t idx = 0; idx < total; ++idx) {
      cd z = pv.coeff;
      std::size_t rest = idx;
      for (int k = s.rank - 1; k >= 0; --k) {
        z *= pv.factors[static_cast<std::size_t>(k)][rest % n];
        rest /= n;
      }
      s.data[idx] += z;
    }
  return s;
}

namespace {

// one line of the tensor along an axis: gather, transform, scatter
void transform_line(cd* base, std::size_t stride, std::size_t n, const std::vector<double>& dmat, const cvec* diag,
                    int power, cd factor, cvec& line, cvec& tmp) {
  for (std::size_t j = 0; j < n; ++j) line[j] = base[j * stride];
  for (int k = 0; k < power; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      cd acc = 0;
      const double* row = dmat.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * line[j];
      tmp[i] = acc * factor;
    }
    line.swap(tmp);
  }
  if (diag)
    for (std::size_t j = 0; j < n; ++j) line[j] *= (*diag)[j];
  for (std::size_t j = 0; j < n; ++j) base[j * stride] = line[j];
}

struct AxisLayout {
  std::size_t n, stride, lines;
  std::size_t base(std::size_t line) const { return (line / stride) * n * stride + line % stride; }
};

AxisLayout layout(const DenseState& s, std::size_t axis) {
  auto n = static_cast<std::size_t>(s.n);
  std::size_t stride = 1;
  for (auto k = axis + 1; k < static_cast<std::size_t>(s.rank); ++k) stride *= n;
  return {n, stride, s.data.size() / n};
}

}  // namespace

void apply_axis_serial(const GridRep& rep, DenseState& s, std::size_t axis, const std::vector<double>& dmat,
                       const cvec* diag, int power) {
  AxisLayout L = layout(s, axis);
  cd factor = ih_g(rep.hbar(), rep.dims()[axis]);
  cvec line(L.n), tmp(L.n);
  for (std::size_t l = 0; l < L.lines; ++l)
    transform_line(s.data.data() + L.base(l), L.stride, L.n, dmat, diag, power, factor, line, tmp);
}

void apply_axis_parallel(const GridRep& rep, DenseState& s, std::size_t axis, const std::vector<double>& dmat,
                         const cvec* diag, int power) {
  AxisLayout L = layout(s, axis);
  cd factor = ih_g(rep.hbar(), rep.dims()[axis]);
  auto lines = static_cast<long>(L.lines);
#pragma omp parallel
  {
    cvec line(L.n), tmp(L.n);
#pragma omp for schedule(static)
    for (long l = 0; l < lines; ++l)
      transform_line(s.data.data() + L.base(static_cast<std::size_t>(l)), L.stride, L.n, dmat, diag, power, factor,
                     line, tmp);
  }
}

DenseState apply_dense(const GridRep& rep, const GridOperator& op, const DenseState& s, bool parallel) {
  std::vector<double> dmat = rep.axis().derivative_matrix();
  DenseState out{s.rank, s.n, cvec(s.data.size(), 0.0)};
  for (const GridTerm& t : op.terms) {
    DenseState w = s;
    for (std::size_t k = 0; k < rep.dims().size(); ++k) {
      const cvec* diag = t.diag[k].empty() ? nullptr : &t.diag[k];
      if (!diag && t.x_power[k] == 0) continue;
      if (parallel) apply_axis_parallel(rep, w, k, dmat, diag, t.x_power[k]);
      else apply_axis_serial(rep, w, k, dmat, diag, t.x_power[k]);
    }
    for (std::size_t j = 0; j < w.data.size(); ++j) out.data[j] += t.coeff * w.data[j];
  }
  return out;
}

cd inner_dense(const GridRep& rep, const DenseState& a, const DenseState& b) {
  cd sum = 0;
  for (std::size_t j = 0; j < a.data.size(); ++j) sum += std::conj(a.data[j]) * b.data[j];
  return sum * std::pow(rep.axis().dp(), a.rank);
}

// ---------------------------------------------------------------------------

double dispersion(const GridRep& rep, const GridState& s, const GridOperator& a) {
  if (!a.hermitean) throw HermiticityError("dispersion of a non-hermitean operator: " + a.symbolic.str());
  GridVector av = rep.apply(a, s.amplitudes);
  cd mean = rep.inner(s.amplitudes, av);
  double second = rep.inner(av, av).real();
  double var = second - mean.real() * mean.real();
  if (var < -1e-10) throw GridError("negative variance " + std::to_string(var) + ": numerical breakdown");
  return std::sqrt(std::max(0.0, var));
}

namespace {

struct Dispersed {
  GridVector applied;
  double delta;
};

Dispersed disperse(const GridRep& rep, const GridState& s, const GridOperator& a) {
  if (!a.hermitean) throw HermiticityError("dispersion of a non-hermitean operator: " + a.symbolic.str());
  GridVector av = rep.apply(a, s.amplitudes);
  cd mean = rep.inner(s.amplitudes, av);
  double var = rep.inner(av, av).real() - mean.real() * mean.real();
  if (var < -1e-10) throw GridError("negative variance " + std::to_string(var) + ": numerical breakdown");
  return {std::move(av), std::sqrt(std::max(0.0, var))};
}

// <[A,B]> = <A psi|B psi> - <B psi|A psi> for hermitean A, B
cd grid_commutator(const GridRep& rep, const GridVector& apsi, const GridVector& bpsi) {
  cd ab = rep.inner(apsi, bpsi);
  return ab - std::conj(ab);
}

}  // namespace

UncertaintyLine check_robertson(const GridRep& rep, const GridState& s, const GridOperator& a, const GridOperator& b) {
  Dispersed da = disperse(rep, s, a), db = disperse(rep, s, b);
  UncertaintyLine line;
  line.lhs = da.delta * db.delta;
  line.rhs = 0.5 * std::abs(grid_commutator(rep, da.applied, db.applied));
  line.slack = line.lhs - line.rhs;
  line.pass = line.slack >= -kRobertsonTol;
  return line;
}

// ---------------------------------------------------------------------------

namespace {

struct Inequality {
  const char* a;
  const char* b;
  const char* bound;
};

std::vector<Inequality> inequalities(std::string_view preset) {
  if (preset == "iso2")
    return {{"x0", "x1", "hbar*alpha*|<x2>|"},
            {"x0", "p1", "hbar*alpha*|<p2>|/2"},
            {"x0", "x2", "hbar*alpha*|<x1>|"},
            {"x0", "p2", "hbar*alpha*|<p1>|/2"},
            {"p1", "x1", "hbar*|<cos(alpha*p0)>|/2"},
            {"p1", "x2", "hbar*|<sin(alpha*p0)>|/2"},
            {"p2", "x1", "hbar*|<sin(alpha*p0)>|/2"},
            {"p2", "x2", "hbar*|<cos(alpha*p0)>|/2"}};
  if (preset == "iso11")
    return {{"x0", "x1", "hbar*beta*|<x3>|"},
            {"x3", "x1", "hbar*beta*|<x0>|"},
            {"p0", "x1", "hbar*beta*|<p3>|/2"},
            {"p3", "x1", "hbar*beta*|<p0>|/2"},
            {"p0", "x3", "hbar*|<sinh(beta*p1)>|/2"},
            {"p3", "x0", "hbar*|<sinh(beta*p1)>|/2"},
            {"p0", "x0", "hbar*|<cosh(beta*p1)>|/2"},
            {"p3", "x3", "hbar*|<cosh(beta*p1)>|/2"}};
  if (preset == "canonical")
    return {{"p0", "x0", "hbar/2"}, {"p1", "x1", "hbar/2"}, {"p2", "x2", "hbar/2"}, {"p3", "x3", "hbar/2"}};
  throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (iso2, iso11, canonical)");
}

Param preset_param(std::string_view preset) { return preset == "iso11" ? Param::beta : Param::alpha; }

// lowered generator images and table commutators for one preset
struct Lowered {
  std::vector<Inequality> lines;
  std::vector<GridOperator> a, b, table;
};

Lowered lower_preset(std::string_view preset, const GridRep& rep) {
  Realization real = realize(preset);
  RelationTable table = relation_table(preset == "canonical" ? "canonical" : preset, 4);
  Lowered L;
  L.lines = inequalities(preset);
  for (const Inequality& q : L.lines) {
    PhaseGenerator a = *PhaseGenerator::parse(q.a), b = *PhaseGenerator::parse(q.b);
    L.a.push_back(rep.lower(real.images.at(a)));
    L.b.push_back(rep.lower(real.images.at(b)));
    L.table.push_back(rep.lower(real.image(table.value(a, b))));
  }
  return L;
}

std::vector<UncertaintyLine> evaluate_state(const GridRep& rep, const Lowered& L, const GridState& s,
                                            std::size_t index) {
  for (int mu : rep.dims())
    if (double r = rep.canonical_residual(s, mu); !(r < kCanonicalTol))
      throw GridError("canonical commutator residual " + fmt(r) + " in dimension " +
                      std::to_string(mu) + " exceeds tolerance; increase n or the cutoff");
  std::vector<UncertaintyLine> out;
  for (std::size_t k = 0; k < L.lines.size(); ++k) {
    Dispersed da = disperse(rep, s, L.a[k]), db = disperse(rep, s, L.b[k]);
    cd grid = grid_commutator(rep, da.applied, db.applied);
    cd table = rep.expectation(s, L.table[k]);
    UncertaintyLine line;
    line.state = index;
    line.a = L.lines[k].a;
    line.b = L.lines[k].b;
    line.bound = L.lines[k].bound;
    line.lhs = da.delta * db.delta;
    line.rhs = 0.5 * std::abs(table);
    line.slack = line.lhs - line.rhs;
    line.commutator_residual = std::abs(grid - table);
    line.pass = line.slack >= -kRobertsonTol && line.commutator_residual <= kTableTol;
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

std::vector<int> preset_dims(std::string_view preset) {
  if (preset == "iso2") return {0, 1, 2};
  if (preset == "iso11") return {0, 1, 3};
  if (preset == "canonical") return {0, 1, 2, 3};
  throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (iso2, iso11, canonical)");
}

GridRep preset_grid(std::string_view preset, double parameter, double hbar, GridSettings settings) {
  ParamValues v{{Param::hbar, hbar}, {preset_param(preset), parameter}};
  return GridRep(preset_dims(preset), settings, v);
}

std::vector<GridState> sample_states(const GridRep& rep, const StateSampler& sampler) {
  std::mt19937_64 rng(sampler.seed);
  std::uniform_real_distribution<double> pc(-sampler.p_range, sampler.p_range), xc(-sampler.x_range, sampler.x_range),
      sg(sampler.sigma_min, sampler.sigma_max);
  std::vector<GridState> out;
  for (std::size_t k = 0; k < sampler.count; ++k) {
    std::map<int, Gaussian1D> g;
    for (int mu : rep.dims()) {
      Gaussian1D d;
      d.p_center = pc(rng);
      d.x_center = xc(rng);
      d.sigma = sg(rng);
      g[mu] = d;
    }
    out.push_back(rep.gaussian(g));
  }
  return out;
}

SuiteReport uncertainty_suite(std::string_view preset, double parameter, double hbar, GridSettings settings,
                              const std::vector<GridState>& states, std::uint64_t seed, bool parallel) {
  GridRep rep = preset_grid(preset, parameter, hbar, settings);
  Lowered L = lower_preset(preset, rep);
  std::vector<std::vector<UncertaintyLine>> per_state(states.size());
  std::vector<std::exception_ptr> errors(states.size());
  auto count = static_cast<long>(states.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long k = 0; k < count; ++k) {
    auto u = static_cast<std::size_t>(k);
    try {
      per_state[u] = evaluate_state(rep, L, states[u], u);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SuiteReport r;
  r.preset = std::string(preset);
  r.parameter = parameter;
  r.hbar = hbar;
  r.grid = settings;
  r.dims = rep.dims();
  r.seed = seed;
  for (const auto& s : states) r.states.push_back(s.description);
  for (auto& v : per_state)
    for (auto& line : v) {
      r.pass = r.pass && line.pass;
      r.lines.push_back(std::move(line));
    }
  double worst_slack = r.lines.empty() ? 0.0 : r.lines.front().slack, worst_residual = 0;
  for (const auto& line : r.lines) {
    worst_slack = std::min(worst_slack, line.slack);
    worst_residual = std::max(worst_residual, line.commutator_residual);
  }
  r.notes.push_back("min slack " + fmt(worst_slack));
  r.notes.push_back("max commutator residual " + fmt(worst_residual));
  if (parameter == 0.0 && preset != "canonical") {
    double sat = 0;
    for (const auto& line : r.lines)
      if (line.a[0] == 'p' && line.b[0] == 'x' && line.a[1] == line.b[1]) sat = std::max(sat, line.slack);
    r.notes.push_back("zero deformation: canonical saturation, max slack on diagonal (p,x) lines " + fmt(sat));
  }
  return r;
}

SuiteReport uncertainty_suite(std::string_view preset, double parameter, double hbar, GridSettings settings,
                              const StateSampler& sampler, bool parallel) {
  GridRep rep = preset_grid(preset, parameter, hbar, settings);
  return uncertainty_suite(preset, parameter, hbar, settings, sample_states(rep, sampler), sampler.seed, parallel);
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["preset"] = preset;
  j["parameter"] = parameter;
  j["hbar"] = hbar;
  j["grid"] = {{"n", grid.n}, {"cutoff", grid.cutoff}, {"dims", dims}};
  j["seed"] = seed;
  j["states"] = states;
  j["lines"] = nlohmann::json::array();
  for (const auto& l : lines)
    j["lines"].push_back({{"state", l.state},
                          {"pair", {l.a, l.b}},
                          {"bound", l.bound},
                          {"lhs", l.lhs},
                          {"rhs", l.rhs},
                          {"slack", l.slack},
                          {"commutator_residual", l.commutator_residual},
                          {"pass", l.pass}});
  j["notes"] = notes;
  j["pass"] = pass;
  return j;
}

std::string SuiteReport::text() const {
  std::ostringstream o;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s %-10s %-28s %-18s %-18s %-18s %s\n", "state", "pair", "bound", "lhs", "rhs",
                "slack", "pass");
  o << buf;
  for (const auto& l : lines) {
    std::string pair = "(" + l.a + "," + l.b + ")";
    std::snprintf(buf, sizeof buf, "%-6zu %-10s %-28s %-18s %-18s %-18s %s\n", l.state, pair.c_str(), l.bound.c_str(),
                  fmt(l.lhs).c_str(), fmt(l.rhs).c_str(), fmt(l.slack).c_str(), l.pass ? "pass" : "FAIL");
    o << buf;
  }
  for (const auto& n : notes) o << "# " << n << "\n";
  o << "# seed " << seed << "\n";
  o << (pass ? "PASS" : "FAIL") << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

ScanReport limit_scan(std::string_view preset, double parameter, double hbar, GridSettings settings,
                      const std::vector<double>& centers, double sigma) {
  if (preset != "iso2" && preset != "iso11") throw std::invalid_argument("limit scan needs preset iso2 or iso11");
  bool euclid = preset == "iso2";
  int scanned = euclid ? 0 : 1;
  GridRep rep = preset_grid(preset, parameter, hbar, settings);
  Lowered L = lower_preset(preset, rep);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < L.lines.size(); ++k) {
    std::string_view bound = L.lines[k].bound;
    if (bound.find(euclid ? "cos" : "cosh") != std::string_view::npos ||
        bound.find(euclid ? "sin(" : "sinh") != std::string_view::npos)
      keep.push_back(k);
  }

  ScanReport r;
  r.preset = std::string(preset);
  r.parameter = parameter;
  r.hbar = hbar;
  r.sigma = sigma;
  std::vector<ScanPoint> points(centers.size());
  std::vector<std::exception_ptr> errors(centers.size());
  auto count = static_cast<long>(centers.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    auto u = static_cast<std::size_t>(i);
    try {
      std::map<int, Gaussian1D> g;
      g[scanned] = {centers[u], 0.0, sigma};
      GridState s = rep.gaussian(g);
      ScanPoint pt;
      pt.center = centers[u];
      pt.reference = euclid ? 0.5 * hbar : 0.5 * hbar * std::cosh(parameter * centers[u]);
      for (std::size_t k : keep)
        pt.rhs["(" + std::string(L.lines[k].a) + "," + L.lines[k].b + ")"] =
            0.5 * std::abs(rep.expectation(s, L.table[k]));
      points[u] = std::move(pt);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  r.points = std::move(points);

  const std::string watched = euclid ? "(p1,x1)" : "(p0,x0)";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const ScanPoint& pt = r.points[i];
    for (const auto& [label, v] : pt.rhs) r.max_rhs = std::max(r.max_rhs, v);
    if (!euclid) {
      r.max_ratio_deviation = std::max(r.max_ratio_deviation, std::abs(pt.rhs.at(watched) / pt.reference - 1.0));
      if (i > 0 && pt.rhs.at(watched) < r.points[i - 1].rhs.at(watched) - 1e-12) r.monotone = false;
    }
  }
  if (euclid) {
    r.pass = r.max_rhs <= 0.5 * hbar + 1e-6;
    r.notes.push_back("bounded: max rhs " + fmt(r.max_rhs) + " against hbar/2 " + fmt(0.5 * hbar));
  } else {
    r.pass = r.monotone && r.max_ratio_deviation <= 0.05;
    r.notes.push_back(std::string(r.monotone ? "monotone" : "not monotone") + " (p0,x0) rhs; max |rhs/(hbar/2 cosh) - 1| " +
                      fmt(r.max_ratio_deviation));
    if (r.points.size() >= 2 && parameter != 0.0) {
      // log-linear growth rate over the last two points, cosh grows at rate beta
      const auto &a = r.points[r.points.size() - 2], &b = r.points.back();
      double rate = std::log(b.rhs.at(watched) / a.rhs.at(watched)) / (b.center - a.center);
      r.notes.push_back("fitted growth rate " + fmt(rate) + " against beta " + fmt(parameter));
    }
  }
  return r;
}

nlohmann::json ScanReport::to_json() const {
  nlohmann::json j;
  j["preset"] = preset;
  j["parameter"] = parameter;
  j["hbar"] = hbar;
  j["sigma"] = sigma;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) j["points"].push_back({{"center", p.center}, {"reference", p.reference}, {"rhs", p.rhs}});
  j["max_rhs"] = max_rhs;
  j["max_ratio_deviation"] = max_ratio_deviation;
  j["monotone"] = monotone;
  j["notes"] = notes;
  j["pass"] = pass;
  return j;
}

std::string ScanReport::csv() const {
  std::ostringstream o;
  o << "center,reference";
  if (!points.empty())
    for (const auto& [label, v] : points.front().rhs) o << ",\"rhs" << label << "\"";
  o << "\n";
  for (const auto& p : points) {
    o << fmt(p.center) << "," << fmt(p.reference);
    for (const auto& [label, v] : p.rhs) o << "," << fmt(v);
    o << "\n";
  }
  return o.str();
}

}  // namespace twistforge
