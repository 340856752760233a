#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wave3/model.hpp"

namespace wave3 {

using Complex = std::complex<double>;
using FieldArray = std::vector<Complex>;

struct Grid {
  int n = 0;
  double length = 0;

  double dx() const { return length / n; }
  double point(int j) const { return length * j / n; }
};

// n must be a power of two >= 16.
Grid make_grid(int n, double length);

struct GridState {
  Grid grid;
  double t = 0;
  std::array<FieldArray, 6> fields;

  FieldArray& field(Field f) { return fields[static_cast<int>(f)]; }
  const FieldArray& field(Field f) const { return fields[static_cast<int>(f)]; }
};

GridState zero_state(Grid grid);

// Smooth band-limited random data, deterministic in the seed. Mode k carries
// weight amplitude / k; optional constant offsets per field.
GridState random_smooth_state(Grid grid, double amplitude, uint64_t seed, int max_mode = 8,
                              const std::array<Complex, 6>& offsets = {});

// Values and x-derivatives of the six fields at one sample point.
struct JetSlice {
  std::array<std::vector<Complex>, 6> jets;  // jets[f][k] = k-th derivative

  Complex at(Field f, int k) const { return jets[static_cast<int>(f)][static_cast<size_t>(k)]; }
  void resize(int max_order);
};

// Numeric evaluator for a RatExpr with every parameter bound exactly.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const RatExpr& e, const std::map<uint32_t, Rational>& params, double den_floor);

  Complex eval(const JetSlice& at) const;  // DenominatorUnderflow below the floor
  int max_order() const { return max_order_; }
  int max_order(Field f) const { return max_order_by_field_[static_cast<int>(f)]; }
  // Largest |coefficient| among terms linear in a top-order jet variable.
  double top_linear_bound() const;

 private:
  struct Term {
    Complex coeff;
    std::vector<std::pair<JetVar, uint32_t>> vars;
  };
  struct Factor {
    std::vector<Term> terms;
    uint32_t exp;
  };
  static Complex eval_terms(const std::vector<Term>& terms, const JetSlice& at);
  std::vector<Term> num_;
  std::vector<Factor> den_;
  double den_floor_ = 1e-6;
  int max_order_ = 0;
  std::array<int, 6> max_order_by_field_ = {0, 0, 0, 0, 0, 0};
};

struct CompiledSystem {
  std::array<CompiledExpr, 6> rhs;
  int max_order() const;
  double top_linear_bound() const;
};

CompiledSystem compile_system(const EvolutionSystem& sys,
                              const std::map<uint32_t, Rational>& params, double den_floor);

enum class SpaceScheme { spectral, fd4 };

// Periodic spatial derivatives of one field: out[k] is the k-th derivative,
// out[0] the input itself.
void space_derivatives(const FieldArray& in, const Grid& grid, int max_order, SpaceScheme scheme,
                       std::vector<FieldArray>& out);

struct Monitor {
  std::string name;
  CompiledExpr density;
};

struct MonitorSeries {
  std::string name;
  std::vector<double> times;
  std::vector<Complex> values;

  // max |I(t) - I(0)| / |I(0)| over the series
  double relative_drift() const;
};

struct IntegrateOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  SpaceScheme scheme = SpaceScheme::spectral;
  double stability_limit = 2.8;  // bound on |dt * lambda_max| for the RK4 stepper
  int snapshot_stride = 0;       // 0 = keep only the final state
  std::vector<Monitor> monitors;
};

struct Trajectory {
  GridState final_state;
  std::vector<GridState> snapshots;
  std::vector<MonitorSeries> monitors;
};

// Classical RK4 time stepping; spatial derivatives per `scheme`. Raises
// StabilityViolation up front and NaNDetected when a step goes non-finite.
Trajectory integrate_flow(const CompiledSystem& sys, const GridState& s0,
                          const IntegrateOptions& opts);

// Periodic quadrature of a density over a state (exact for trigonometric
// polynomials below Nyquist).
Complex integrate_density(const CompiledExpr& density, const GridState& s);

// Closed-form solutions with analytic derivatives of any order.
class SolutionSampler {
 public:
  virtual ~SolutionSampler() = default;
  virtual void sample(double x, double t, int max_order, JetSlice& out) const = 0;
  virtual int max_supported_order() const { return JetLimits::max_order(); }
};

// Exact solution with vanishing plus-components:
//   m10 = e^{k(x-t)}, m01 = e^{m(x+t)},
//   m11 = C - e^{(k+m)x + (m-k)t} / (2(m-k)),  k != m.
class PlusVacuumSampler : public SolutionSampler {
 public:
  PlusVacuumSampler(double k, double m, double c);  // ResonantParameters if k == m
  void sample(double x, double t, int max_order, JetSlice& out) const override;

 private:
  double k_, m_, c_;
};

// Pointwise application of an on-shell transformation to another sampler.
// Derivatives of the image come from symbolic differentiation of the image
// expressions, compiled once up to `max_order`.
class TransformedSampler : public SolutionSampler {
 public:
  TransformedSampler(const Substitution& t, std::shared_ptr<const SolutionSampler> base,
                     double den_floor, int max_order = 3);
  void sample(double x, double t, int max_order, JetSlice& out) const override;
  int max_supported_order() const override { return max_order_; }

 private:
  std::shared_ptr<const SolutionSampler> base_;
  std::array<std::vector<CompiledExpr>, 6> images_;
  int max_order_;
  int base_order_needed_ = 0;
};

// Scales one field of the base sampler; negative control for pde_residual.
class CorruptedSampler : public SolutionSampler {
 public:
  CorruptedSampler(std::shared_ptr<const SolutionSampler> base, Field f, double factor)
      : base_(std::move(base)), field_(f), factor_(factor) {}
  void sample(double x, double t, int max_order, JetSlice& out) const override;
  int max_supported_order() const override { return base_->max_supported_order(); }

 private:
  std::shared_ptr<const SolutionSampler> base_;
  Field field_;
  double factor_;
};

struct ResidualWindow {
  double x0 = 0, x1 = 1;
  double t0 = 0.1, t1 = 0.9;
  int nx = 16, nt = 6;
  double tau = 1e-2;  // step of the 4th-order central time difference
};

// max over the window of |d/dt f - rhs(f)| with the time derivative taken by
// 4th-order central differences and spatial jets from the sampler.
double pde_residual(const SolutionSampler& s, const CompiledSystem& sys,
                    const ResidualWindow& window);

struct ChainResult {
  std::shared_ptr<const SolutionSampler> sampler;
  std::vector<double> step_residuals;
};

// Applies T1 n1 times then T2 n2 times to the seed, verifying the flow
// residual after every step.
ChainResult chain_generate(int n1, int n2, std::shared_ptr<const SolutionSampler> seed,
                           const CompiledSystem& base, const ResidualWindow& window,
                           double den_floor);

// Evaluates a transformation on a grid state (spectral jets).
GridState grid_apply(const Substitution& t, const GridState& s, double den_floor,
                     SpaceScheme scheme = SpaceScheme::spectral);

// Samples a sampler onto a grid at time t.
GridState sample_to_grid(const SolutionSampler& s, Grid grid, double t);

void write_state_csv(std::ostream& os, const GridState& s);
void write_monitor_csv(std::ostream& os, const MonitorSeries& series);

}  // namespace wave3
