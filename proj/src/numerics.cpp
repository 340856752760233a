#include "wave3/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <iomanip>
#include <mutex>
#include <random>

#include "wave3/errors.hpp"

namespace wave3 {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid make_grid(int n, double length) {
  if (!is_pow2(n) || n < 16) fail(Errc::config_error, "grid size must be a power of two >= 16");
  if (!(length > 0)) fail(Errc::config_error, "grid length must be positive");
  return Grid{n, length};
}

GridState zero_state(Grid grid) {
  GridState s;
  s.grid = grid;
  for (auto& f : s.fields) f.assign(static_cast<size_t>(grid.n), Complex(0, 0));
  return s;
}

GridState random_smooth_state(Grid grid, double amplitude, uint64_t seed, int max_mode,
                              const std::array<Complex, 6>& offsets) {
  GridState s = zero_state(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int fi = 0; fi < kNumFields; ++fi) {
    std::vector<Complex> cplus(static_cast<size_t>(max_mode) + 1), cminus(cplus);
    for (int k = 1; k <= max_mode; ++k) {
      double w = amplitude / k;
      cplus[static_cast<size_t>(k)] = Complex(gauss(rng), gauss(rng)) * w * 0.5;
      cminus[static_cast<size_t>(k)] = Complex(gauss(rng), gauss(rng)) * w * 0.5;
    }
    for (int j = 0; j < grid.n; ++j) {
      double x = grid.point(j);
      Complex v = offsets[static_cast<size_t>(fi)];
      for (int k = 1; k <= max_mode; ++k) {
        double phase = 2 * kPi * k * x / grid.length;
        v += cplus[static_cast<size_t>(k)] * std::polar(1.0, phase) +
             cminus[static_cast<size_t>(k)] * std::polar(1.0, -phase);
      }
      s.fields[static_cast<size_t>(fi)][static_cast<size_t>(j)] = v;
    }
  }
  return s;
}

void JetSlice::resize(int max_order) {
  for (auto& row : jets) row.assign(static_cast<size_t>(max_order) + 1, Complex(0, 0));
}

CompiledExpr::CompiledExpr(const RatExpr& e, const std::map<uint32_t, Rational>& params,
                           double den_floor)
    : den_floor_(den_floor) {
  auto compile_poly = [&](const DiffPoly& p) {
    std::vector<Term> out;
    for (const auto& [mono, coeff] : p.terms()) {
      Term t;
      t.coeff = Complex(to_double(coeff.evaluated(params)), 0.0);
      for (const auto& [jv, exp] : mono.vars()) {
        t.vars.emplace_back(jv, exp);
        max_order_ = std::max(max_order_, static_cast<int>(jv.order));
        auto& fo = max_order_by_field_[static_cast<int>(jv.field)];
        fo = std::max(fo, static_cast<int>(jv.order));
      }
      out.push_back(std::move(t));
    }
    return out;
  };
  num_ = compile_poly(e.num());
  for (const auto& f : e.den()) den_.push_back(Factor{compile_poly(f.base), f.exp});
}

Complex CompiledExpr::eval_terms(const std::vector<Term>& terms, const JetSlice& at) {
  Complex acc(0, 0);
  for (const auto& t : terms) {
    Complex v = t.coeff;
    for (const auto& [jv, exp] : t.vars) {
      Complex base = at.at(jv.field, jv.order);
      for (uint32_t r = 0; r < exp; ++r) v *= base;
    }
    acc += v;
  }
  return acc;
}

Complex CompiledExpr::eval(const JetSlice& at) const {
  Complex v = eval_terms(num_, at);
  for (const auto& f : den_) {
    Complex d = eval_terms(f.terms, at);
    if (std::abs(d) < den_floor_)
      fail(Errc::denominator_underflow,
           "denominator magnitude " + std::to_string(std::abs(d)) + " below floor");
    for (uint32_t r = 0; r < f.exp; ++r) v /= d;
  }
  return v;
}

double CompiledExpr::top_linear_bound() const {
  double bound = 0;
  for (const auto& t : num_) {
    if (t.vars.size() != 1 || t.vars[0].second != 1) continue;
    if (static_cast<int>(t.vars[0].first.order) != max_order_) continue;
    bound = std::max(bound, std::abs(t.coeff));
  }
  return bound;
}

int CompiledSystem::max_order() const {
  int m = 0;
  for (const auto& e : rhs) m = std::max(m, e.max_order());
  return m;
}

double CompiledSystem::top_linear_bound() const {
  double b = 0;
  for (const auto& e : rhs)
    if (e.max_order() == max_order()) b = std::max(b, e.top_linear_bound());
  return b;
}

CompiledSystem compile_system(const EvolutionSystem& sys,
                              const std::map<uint32_t, Rational>& params, double den_floor) {
  CompiledSystem out;
  for (Field f : all_fields())
    out.rhs[static_cast<int>(f)] = CompiledExpr(sys.rhs(f), params, den_floor);
  return out;
}

namespace {

// Cached complex-to-complex FFTW plans per grid size.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    a_ = fftw_alloc_complex(static_cast<size_t>(n));
    b_ = fftw_alloc_complex(static_cast<size_t>(n));
    fwd_ = fftw_plan_dft_1d(n, a_, b_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, a_, b_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(a_);
    fftw_free(b_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(const FieldArray& in, FieldArray& out) { run(fwd_, in, out); }
  void backward(const FieldArray& in, FieldArray& out) { run(bwd_, in, out); }

 private:
  void run(fftw_plan plan, const FieldArray& in, FieldArray& out) {
    for (int j = 0; j < n_; ++j) {
      a_[j][0] = in[static_cast<size_t>(j)].real();
      a_[j][1] = in[static_cast<size_t>(j)].imag();
    }
    fftw_execute(plan);
    out.resize(static_cast<size_t>(n_));
    for (int j = 0; j < n_; ++j) out[static_cast<size_t>(j)] = Complex(b_[j][0], b_[j][1]);
  }

  int n_;
  fftw_complex* a_;
  fftw_complex* b_;
  fftw_plan fwd_, bwd_;
};

Fft& fft_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Fft>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

void spectral_derivatives(const FieldArray& in, const Grid& grid, int max_order,
                          std::vector<FieldArray>& out) {
  int n = grid.n;
  Fft& fft = fft_for(n);
  FieldArray spec, mult(static_cast<size_t>(n)), tmp;
  fft.forward(in, spec);
  out.resize(static_cast<size_t>(max_order) + 1);
  out[0] = in;
  for (int k = 1; k <= max_order; ++k) {
    for (int j = 0; j < n; ++j) {
      int kk = (j <= n / 2) ? j : j - n;
      if (j == n / 2) kk = 0;  // drop the Nyquist mode in derivatives
      Complex ik(0.0, 2 * kPi * kk / grid.length);
      Complex factor(1, 0);
      for (int r = 0; r < k; ++r) factor *= ik;
      mult[static_cast<size_t>(j)] = spec[static_cast<size_t>(j)] * factor;
    }
    fft.backward(mult, tmp);
    for (auto& v : tmp) v /= n;
    out[static_cast<size_t>(k)] = tmp;
  }
}

void fd4_first_derivative(const FieldArray& in, double h, FieldArray& out) {
  int n = static_cast<int>(in.size());
  out.resize(in.size());
  auto wrap = [n](int j) { return ((j % n) + n) % n; };
  for (int j = 0; j < n; ++j) {
    out[static_cast<size_t>(j)] =
        (-in[static_cast<size_t>(wrap(j + 2))] + 8.0 * in[static_cast<size_t>(wrap(j + 1))] -
         8.0 * in[static_cast<size_t>(wrap(j - 1))] + in[static_cast<size_t>(wrap(j - 2))]) /
        (12.0 * h);
  }
}

}  // namespace

void space_derivatives(const FieldArray& in, const Grid& grid, int max_order, SpaceScheme scheme,
                       std::vector<FieldArray>& out) {
  if (scheme == SpaceScheme::spectral) {
    spectral_derivatives(in, grid, max_order, out);
    return;
  }
  out.resize(static_cast<size_t>(max_order) + 1);
  out[0] = in;
  for (int k = 1; k <= max_order; ++k)
    fd4_first_derivative(out[static_cast<size_t>(k - 1)], grid.dx(), out[static_cast<size_t>(k)]);
}

double MonitorSeries::relative_drift() const {
  if (values.empty()) return 0;
  Complex v0 = values.front();
  double scale = std::abs(v0);
  double worst = 0;
  for (const Complex& v : values) worst = std::max(worst, std::abs(v - v0));
  return scale > 1e-300 ? worst / scale : worst;
}

Complex integrate_density(const CompiledExpr& density, const GridState& s) {
  int n = s.grid.n;
  int mo = density.max_order();
  std::array<std::vector<FieldArray>, 6> jets;
  for (Field f : all_fields()) {
    int need = density.max_order(f);
    space_derivatives(s.field(f), s.grid, std::max(need, 0), SpaceScheme::spectral,
                      jets[static_cast<size_t>(f)]);
  }
  JetSlice slice;
  slice.resize(mo);
  Complex acc(0, 0);
  for (int j = 0; j < n; ++j) {
    for (int fi = 0; fi < kNumFields; ++fi)
      for (size_t k = 0; k < jets[static_cast<size_t>(fi)].size(); ++k)
        slice.jets[static_cast<size_t>(fi)][k] =
            jets[static_cast<size_t>(fi)][k][static_cast<size_t>(j)];
    acc += density.eval(slice);
  }
  return acc * s.grid.dx();
}

namespace {

void eval_rhs(const CompiledSystem& sys, const GridState& u, SpaceScheme scheme,
              std::array<FieldArray, 6>& out) {
  int n = u.grid.n;
  std::array<std::vector<FieldArray>, 6> jets;
  for (Field f : all_fields()) {
    int need = 0;
    for (const auto& e : sys.rhs) need = std::max(need, e.max_order(f));
    space_derivatives(u.field(f), u.grid, need, scheme, jets[static_cast<size_t>(f)]);
  }
  JetSlice slice;
  slice.resize(sys.max_order());
  for (auto& o : out) o.assign(static_cast<size_t>(n), Complex(0, 0));
  for (int j = 0; j < n; ++j) {
    for (int fi = 0; fi < kNumFields; ++fi)
      for (size_t k = 0; k < jets[static_cast<size_t>(fi)].size(); ++k)
        slice.jets[static_cast<size_t>(fi)][k] =
            jets[static_cast<size_t>(fi)][k][static_cast<size_t>(j)];
    for (int fi = 0; fi < kNumFields; ++fi)
      out[static_cast<size_t>(fi)][static_cast<size_t>(j)] = sys.rhs[static_cast<size_t>(fi)].eval(slice);
  }
}

void axpy(GridState& y, double a, const std::array<FieldArray, 6>& x) {
  for (int fi = 0; fi < kNumFields; ++fi)
    for (size_t j = 0; j < y.fields[static_cast<size_t>(fi)].size(); ++j)
      y.fields[static_cast<size_t>(fi)][j] += a * x[static_cast<size_t>(fi)][j];
}

bool all_finite(const GridState& s) {
  for (const auto& f : s.fields)
    for (const Complex& v : f)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

Trajectory integrate_flow(const CompiledSystem& sys, const GridState& s0,
                          const IntegrateOptions& opts) {
  if (!(opts.dt > 0) || !(opts.t_end >= 0)) fail(Errc::config_error, "bad dt or t_end");
  double k_phys = (s0.grid.n / 2) * (2 * kPi / s0.grid.length);
  double lambda = sys.top_linear_bound() * std::pow(k_phys, sys.max_order());
  if (opts.dt * lambda > opts.stability_limit)
    fail(Errc::stability_violation,
         "dt * lambda = " + std::to_string(opts.dt * lambda) + " exceeds limit " +
             std::to_string(opts.stability_limit));

  Trajectory traj;
  traj.monitors.reserve(opts.monitors.size());
  for (const auto& m : opts.monitors) traj.monitors.push_back(MonitorSeries{m.name, {}, {}});
  auto record = [&](const GridState& u) {
    for (size_t i = 0; i < opts.monitors.size(); ++i) {
      traj.monitors[i].times.push_back(u.t);
      traj.monitors[i].values.push_back(integrate_density(opts.monitors[i].density, u));
    }
  };

  GridState u = s0;
  record(u);
  if (opts.snapshot_stride > 0) traj.snapshots.push_back(u);
  long nsteps = std::lround(opts.t_end / opts.dt);
  std::array<FieldArray, 6> k1, k2, k3, k4, comp;
  for (auto& c : comp) c.assign(static_cast<size_t>(u.grid.n), Complex(0, 0));
  for (long step = 0; step < nsteps; ++step) {
    eval_rhs(sys, u, opts.scheme, k1);
    GridState stage = u;
    axpy(stage, opts.dt / 2, k1);
    stage.t = u.t + opts.dt / 2;
    eval_rhs(sys, stage, opts.scheme, k2);
    stage = u;
    axpy(stage, opts.dt / 2, k2);
    stage.t = u.t + opts.dt / 2;
    eval_rhs(sys, stage, opts.scheme, k3);
    stage = u;
    axpy(stage, opts.dt, k3);
    stage.t = u.t + opts.dt;
    eval_rhs(sys, stage, opts.scheme, k4);
    // compensated accumulation keeps the long-run roundoff flat
    for (int fi = 0; fi < kNumFields; ++fi) {
      auto& uf = u.fields[static_cast<size_t>(fi)];
      auto& cf = comp[static_cast<size_t>(fi)];
      for (size_t j = 0; j < uf.size(); ++j) {
        Complex inc = (opts.dt / 6) * (k1[static_cast<size_t>(fi)][j] + k4[static_cast<size_t>(fi)][j]) +
                      (opts.dt / 3) * (k2[static_cast<size_t>(fi)][j] + k3[static_cast<size_t>(fi)][j]);
        Complex y = inc - cf[j];
        Complex tnew = uf[j] + y;
        cf[j] = (tnew - uf[j]) - y;
        uf[j] = tnew;
      }
    }
    u.t = s0.t + (step + 1) * opts.dt;
    if (!all_finite(u)) fail(Errc::nan_detected, "non-finite value at t = " + std::to_string(u.t));
    record(u);
    if (opts.snapshot_stride > 0 && (step + 1) % opts.snapshot_stride == 0)
      traj.snapshots.push_back(u);
  }
  traj.final_state = std::move(u);
  return traj;
}

PlusVacuumSampler::PlusVacuumSampler(double k, double m, double c) : k_(k), m_(m), c_(c) {
  if (k == m) fail(Errc::resonant_parameters, "seed requires k != m");
}

void PlusVacuumSampler::sample(double x, double t, int max_order, JetSlice& out) const {
  out.resize(max_order);
  double em10 = std::exp(k_ * (x - t));
  double em01 = std::exp(m_ * (x + t));
  double e11 = std::exp((k_ + m_) * x + (m_ - k_) * t) / (2.0 * (m_ - k_));
  for (int j = 0; j <= max_order; ++j) {
    out.jets[static_cast<int>(Field::m10)][static_cast<size_t>(j)] =
        Complex(std::pow(k_, j) * em10, 0);
    out.jets[static_cast<int>(Field::m01)][static_cast<size_t>(j)] =
        Complex(std::pow(m_, j) * em01, 0);
    double d11 = (j == 0) ? c_ - e11 : -std::pow(k_ + m_, j) * e11;
    out.jets[static_cast<int>(Field::m11)][static_cast<size_t>(j)] = Complex(d11, 0);
    // plus components vanish identically
  }
}

TransformedSampler::TransformedSampler(const Substitution& t,
                                       std::shared_ptr<const SolutionSampler> base,
                                       double den_floor, int max_order)
    : base_(std::move(base)), max_order_(max_order) {
  for (Field f : all_fields()) {
    RatExpr expr = t.image(f);
    auto& column = images_[static_cast<int>(f)];
    for (int k = 0; k <= max_order; ++k) {
      column.emplace_back(expr, std::map<uint32_t, Rational>{}, den_floor);
      base_order_needed_ = std::max(base_order_needed_, expr.max_order());
      if (k < max_order) expr = total_x_derivative(expr);
    }
  }
  if (base_order_needed_ > base_->max_supported_order())
    fail(Errc::jet_order_overflow, "base sampler supports order " +
                                       std::to_string(base_->max_supported_order()) + ", need " +
                                       std::to_string(base_order_needed_));
}

void TransformedSampler::sample(double x, double t, int max_order, JetSlice& out) const {
  if (max_order > max_order_)
    fail(Errc::jet_order_overflow, "transformed sampler compiled to order " +
                                       std::to_string(max_order_));
  JetSlice base;
  base_->sample(x, t, base_order_needed_, base);
  out.resize(max_order);
  for (int fi = 0; fi < kNumFields; ++fi)
    for (int k = 0; k <= max_order; ++k)
      out.jets[static_cast<size_t>(fi)][static_cast<size_t>(k)] =
          images_[static_cast<size_t>(fi)][static_cast<size_t>(k)].eval(base);
}

void CorruptedSampler::sample(double x, double t, int max_order, JetSlice& out) const {
  base_->sample(x, t, max_order, out);
  for (auto& v : out.jets[static_cast<int>(field_)]) v *= factor_;
}

double pde_residual(const SolutionSampler& s, const CompiledSystem& sys,
                    const ResidualWindow& w) {
  int mo = sys.max_order();
  double worst = 0;
  JetSlice at, tp, tpp, tm, tmm;
  for (int ix = 0; ix < w.nx; ++ix) {
    double x = w.x0 + (w.x1 - w.x0) * ix / std::max(1, w.nx - 1);
    for (int it = 0; it < w.nt; ++it) {
      double t = w.t0 + (w.t1 - w.t0) * it / std::max(1, w.nt - 1);
      s.sample(x, t, mo, at);
      s.sample(x, t + w.tau, 0, tp);
      s.sample(x, t + 2 * w.tau, 0, tpp);
      s.sample(x, t - w.tau, 0, tm);
      s.sample(x, t - 2 * w.tau, 0, tmm);
      for (int fi = 0; fi < kNumFields; ++fi) {
        Complex dfdt = (-tpp.jets[static_cast<size_t>(fi)][0] + 8.0 * tp.jets[static_cast<size_t>(fi)][0] -
                        8.0 * tm.jets[static_cast<size_t>(fi)][0] + tmm.jets[static_cast<size_t>(fi)][0]) /
                       (12.0 * w.tau);
        Complex rhs = sys.rhs[static_cast<size_t>(fi)].eval(at);
        worst = std::max(worst, std::abs(dfdt - rhs));
      }
    }
  }
  return worst;
}

ChainResult chain_generate(int n1, int n2, std::shared_ptr<const SolutionSampler> seed,
                           const CompiledSystem& base, const ResidualWindow& window,
                           double den_floor) {
  if (n1 < 0 || n2 < 0) fail(Errc::config_error, "chain indices must be nonnegative");
  ChainResult result;
  result.sampler = std::move(seed);
  int total = n1 + n2;
  int applied = 0;
  auto apply = [&](int which) {
    int remaining = total - applied - 1;
    int order = 3 + 2 * remaining;
    try {
      result.sampler = std::make_shared<TransformedSampler>(transformation(which), result.sampler,
                                                            den_floor, order);
      result.step_residuals.push_back(pde_residual(*result.sampler, base, window));
    } catch (const Error& e) {
      if (e.code() == Errc::denominator_underflow)
        fail(Errc::denominator_underflow,
             "chain step " + std::to_string(applied + 1) + ": " + e.what());
      throw;
    }
    ++applied;
  };
  for (int i = 0; i < n1; ++i) apply(1);
  for (int i = 0; i < n2; ++i) apply(2);
  return result;
}

GridState grid_apply(const Substitution& t, const GridState& s, double den_floor,
                     SpaceScheme scheme) {
  std::array<CompiledExpr, 6> images;
  for (Field f : all_fields())
    images[static_cast<int>(f)] = CompiledExpr(t.image(f), {}, den_floor);
  int needed = 0;
  for (const auto& e : images) needed = std::max(needed, e.max_order());
  std::array<std::vector<FieldArray>, 6> jets;
  for (Field f : all_fields())
    space_derivatives(s.field(f), s.grid, needed, scheme, jets[static_cast<size_t>(f)]);
  GridState out = zero_state(s.grid);
  out.t = s.t;
  JetSlice slice;
  slice.resize(needed);
  for (int j = 0; j < s.grid.n; ++j) {
    for (int fi = 0; fi < kNumFields; ++fi)
      for (size_t k = 0; k < jets[static_cast<size_t>(fi)].size(); ++k)
        slice.jets[static_cast<size_t>(fi)][k] =
            jets[static_cast<size_t>(fi)][k][static_cast<size_t>(j)];
    for (int fi = 0; fi < kNumFields; ++fi)
      out.fields[static_cast<size_t>(fi)][static_cast<size_t>(j)] =
          images[static_cast<size_t>(fi)].eval(slice);
  }
  return out;
}

GridState sample_to_grid(const SolutionSampler& s, Grid grid, double t) {
  GridState out = zero_state(grid);
  out.t = t;
  JetSlice slice;
  for (int j = 0; j < grid.n; ++j) {
    s.sample(grid.point(j), t, 0, slice);
    for (int fi = 0; fi < kNumFields; ++fi)
      out.fields[static_cast<size_t>(fi)][static_cast<size_t>(j)] = slice.jets[static_cast<size_t>(fi)][0];
  }
  return out;
}

void write_state_csv(std::ostream& os, const GridState& s) {
  os << "x";
  for (Field f : all_fields()) os << ",re_" << field_name(f) << ",im_" << field_name(f);
  os << "\n";
  os << std::setprecision(17);
  for (int j = 0; j < s.grid.n; ++j) {
    os << s.grid.point(j);
    for (Field f : all_fields()) {
      const Complex& v = s.field(f)[static_cast<size_t>(j)];
      os << "," << v.real() << "," << v.imag();
    }
    os << "\n";
  }
}

void write_monitor_csv(std::ostream& os, const MonitorSeries& series) {
  os << "t,re,im\n" << std::setprecision(17);
  for (size_t i = 0; i < series.times.size(); ++i)
    os << series.times[i] << "," << series.values[i].real() << "," << series.values[i].imag()
       << "\n";
}

}  // namespace wave3
