#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wave3/errors.hpp"
#include "wave3/hierarchy.hpp"
#include "wave3/numerics.hpp"
#include "wave3/parse.hpp"

using namespace wave3;

namespace {

constexpr double kTwoPi = 2 * 3.141592653589793238462643383279502884;

double max_field_diff(const GridState& a, const GridState& b) {
  double worst = 0;
  for (int f = 0; f < kNumFields; ++f)
    for (size_t j = 0; j < a.fields[static_cast<size_t>(f)].size(); ++j)
      worst = std::max(worst, std::abs(a.fields[static_cast<size_t>(f)][j] -
                                       b.fields[static_cast<size_t>(f)][j]));
  return worst;
}

double max_sample_diff(const SolutionSampler& a, const SolutionSampler& b, double x1, double t1) {
  JetSlice sa, sb;
  double worst = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 10; ++j) {
      double x = x1 * i / 20, t = t1 * j / 10;
      a.sample(x, t, 0, sa);
      b.sample(x, t, 0, sb);
      for (int f = 0; f < kNumFields; ++f)
        worst = std::max(worst, std::abs(sa.jets[static_cast<size_t>(f)][0] -
                                         sb.jets[static_cast<size_t>(f)][0]));
    }
  return worst;
}

GridState pump_state(Grid g, uint64_t seed) {
  std::array<Complex, 6> offsets{};
  offsets[static_cast<int>(Field::m11)] = Complex(4.0, 0.0);
  return random_smooth_state(g, 0.1, seed, 12, offsets);
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(100, kTwoPi), Error);
  CHECK_THROWS_AS(make_grid(8, kTwoPi), Error);
  Grid g = make_grid(128, kTwoPi);
  CHECK(g.dx() == doctest::Approx(kTwoPi / 128));
}

TEST_CASE("zero state stays zero") {
  Grid g = make_grid(16, kTwoPi);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  IntegrateOptions opts;
  opts.dt = 1e-2;
  opts.t_end = 0.1;
  Trajectory tr = integrate_flow(sys, zero_state(g), opts);
  CHECK(max_field_diff(tr.final_state, zero_state(g)) == 0.0);
}

TEST_CASE("density of one integrates to the domain length") {
  Grid g = make_grid(32, kTwoPi);
  GridState s = pump_state(g, 1);
  CompiledExpr one(RatExpr(1), {}, 1e-6);
  CHECK(std::abs(integrate_density(one, s) - Complex(kTwoPi, 0)) < 1e-12);
}

TEST_CASE("linear advection converges at 4th order in dt") {
  using enum Field;
  EvolutionSystem adv;
  for (Field f : all_fields()) adv.rhs(f) = RatExpr();
  adv.rhs(p01) = RatExpr::var(JetVar{p01, 1});
  CompiledSystem sys = compile_system(adv, {}, 1e-6);
  Grid g = make_grid(32, kTwoPi);
  auto l2_error = [&](double dt) {
    GridState s0 = zero_state(g);
    for (int j = 0; j < g.n; ++j)
      s0.field(p01)[static_cast<size_t>(j)] = std::sin(2 * g.point(j));
    IntegrateOptions opts;
    opts.dt = dt;
    opts.t_end = 1.0;
    Trajectory tr = integrate_flow(sys, s0, opts);
    double acc = 0;
    for (int j = 0; j < g.n; ++j) {
      double exact = std::sin(2 * (g.point(j) + 1.0));  // unit-speed advection
      acc += std::norm(tr.final_state.field(p01)[static_cast<size_t>(j)] - Complex(exact, 0));
    }
    return std::sqrt(acc * g.dx());
  };
  double e1 = l2_error(0.02), e2 = l2_error(0.01);
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 > 16.0 * 0.8);
  CHECK(e1 / e2 < 16.0 * 1.2);
}

TEST_CASE("conserved integrals drift below tolerance and shrink at 4th order") {
  Grid g = make_grid(128, kTwoPi);
  GridState s0 = pump_state(g, 42);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  CompiledExpr rho1(density_rho1(), {}, 1e-6), rho2(density_rho2(), {}, 1e-6);
  auto drifts = [&](double dt) {
    IntegrateOptions opts;
    opts.dt = dt;
    opts.t_end = 1.0;
    opts.monitors = {{"rho1", rho1}, {"rho2", rho2}};
    Trajectory tr = integrate_flow(sys, s0, opts);
    return std::pair(tr.monitors[0].relative_drift(), tr.monitors[1].relative_drift());
  };
  auto [a1, a2] = drifts(1e-3);
  CHECK(a1 < 1e-8);
  CHECK(a2 < 1e-8);
  auto [b1, b2] = drifts(5e-4);
  CHECK(a1 / b1 > 16.0 * 0.8);
  CHECK(a1 / b1 < 16.0 * 1.2);
  CHECK(a2 / b2 > 16.0 * 0.8);
  CHECK(a2 / b2 < 16.0 * 1.2);
}

TEST_CASE("non-conserved density drifts at order one") {
  Grid g = make_grid(128, kTwoPi);
  GridState s0 = pump_state(g, 42);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  IntegrateOptions opts;
  opts.dt = 1e-3;
  opts.t_end = 1.0;
  opts.monitors = {{"bad", CompiledExpr(parse_expr("p10*m01"), {}, 1e-6)}};
  Trajectory tr = integrate_flow(sys, s0, opts);
  CHECK(tr.monitors[0].relative_drift() > 1e-2);
}

TEST_CASE("plus-vacuum seed solves the base system") {
  PlusVacuumSampler seed(1.0, -1.0, 10.0);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  // analytic time derivatives of the closed form, checked on sampled points
  JetSlice at;
  double worst = 0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      double x = kTwoPi * i / 10, t = 1.0 * j / 10;
      seed.sample(x, t, 1, at);
      Complex m10 = at.at(Field::m10, 0), m01 = at.at(Field::m01, 0);
      Complex dm10 = -m10;                       // d/dt e^{k(x-t)} with k = 1
      Complex dm01 = -m01;                       // d/dt e^{m(x+t)} with m = -1
      Complex dm11 = -0.5 * m01 * m10;           // by construction
      worst = std::max(worst, std::abs(dm10 - sys.rhs[static_cast<int>(Field::m10)].eval(at)));
      worst = std::max(worst, std::abs(dm01 - sys.rhs[static_cast<int>(Field::m01)].eval(at)));
      worst = std::max(worst, std::abs(dm11 - sys.rhs[static_cast<int>(Field::m11)].eval(at)));
      for (Field f : {Field::p11, Field::p10, Field::p01})
        worst = std::max(worst, std::abs(sys.rhs[static_cast<int>(f)].eval(at)));
    }
  CHECK(worst < 1e-12 * std::exp(kTwoPi));  // relative to the field scale

  // pump stays far from zero on the window
  double min_m11 = 1e300;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 10; ++j) {
      seed.sample(kTwoPi * i / 40, 1.0 * j / 10, 0, at);
      min_m11 = std::min(min_m11, std::abs(at.at(Field::m11, 0)));
    }
  CHECK(min_m11 > 5.0);

  CHECK_THROWS_AS(PlusVacuumSampler(1.0, 1.0, 10.0), Error);
}

TEST_CASE("numeric transformation application") {
  auto seed = std::make_shared<PlusVacuumSampler>(1.0, -1.0, 10.0);
  auto t3img = std::make_shared<TransformedSampler>(transformation(3), seed, 1e-6, 3);

  // image of p11 is 1/m11 pointwise
  JetSlice a, b;
  for (int i = 0; i <= 10; ++i) {
    double x = 2.0 * i / 10;
    seed->sample(x, 0.3, 0, a);
    t3img->sample(x, 0.3, 0, b);
    CHECK(std::abs(b.at(Field::p11, 0) - 1.0 / a.at(Field::m11, 0)) < 1e-14);
  }

  auto ident = std::make_shared<TransformedSampler>(Substitution::identity(), seed, 1e-6, 2);
  CHECK(max_sample_diff(*ident, *seed, 2.0, 1.0) < 1e-14);

  auto back = std::make_shared<TransformedSampler>(inverse_transformation(3), t3img, 1e-6, 1);
  CHECK(max_sample_diff(*back, *seed, 2.0, 1.0) < 1e-10);
}

TEST_CASE("pde_residual converges at 4th order in the time difference") {
  auto seed = std::make_shared<PlusVacuumSampler>(1.0, -1.0, 10.0);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  ResidualWindow w;
  w.x0 = 0;
  w.x1 = 2.0;
  w.nx = 12;
  w.nt = 5;
  auto at_tau = [&](const SolutionSampler& s, double tau) {
    ResidualWindow wt = w;
    wt.tau = tau;
    return pde_residual(s, sys, wt);
  };
  double r1 = at_tau(*seed, 2e-2), r2 = at_tau(*seed, 1e-2);
  CHECK(r1 < 1e-6);
  CHECK(r1 / r2 > 16.0 * 0.8);
  CHECK(r1 / r2 < 16.0 * 1.2);

  auto t3img = std::make_shared<TransformedSampler>(transformation(3), seed, 1e-6, 3);
  double s1 = at_tau(*t3img, 2e-2), s2 = at_tau(*t3img, 1e-2);
  CHECK(s1 / s2 > 16.0 * 0.8);
  CHECK(s1 / s2 < 16.0 * 1.2);

  // corrupting one field is flagged at order 1e-2
  CorruptedSampler bad(t3img, Field::p10, 1.01);
  double rbad = at_tau(bad, 1e-2);
  CHECK(rbad > 1e-4);
  CHECK(rbad > 100 * s2);
}

TEST_CASE("chain generation") {
  auto seed = std::make_shared<PlusVacuumSampler>(1.0, -1.0, 10.0);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  ResidualWindow w;
  w.x0 = 0;
  w.x1 = 2.0;
  w.nx = 12;
  w.nt = 5;

  ChainResult trivial = chain_generate(0, 0, seed, sys, w, 1e-6);
  CHECK(trivial.sampler == seed);
  CHECK(trivial.step_residuals.empty());

  ChainResult c11 = chain_generate(1, 1, seed, sys, w, 1e-6);
  REQUIRE(c11.step_residuals.size() == 2);
  auto direct = std::make_shared<TransformedSampler>(transformation(3), seed, 1e-6, 3);
  CHECK(max_sample_diff(*c11.sampler, *direct, 2.0, 1.0) < 1e-10);

  // every chain member satisfies the flow at the 4th-order difference rate
  ResidualWindow whalf = w;
  whalf.tau = w.tau / 2;
  double fine = pde_residual(*c11.sampler, sys, whalf);
  CHECK(c11.step_residuals[1] / fine > 16.0 * 0.7);
  CHECK(c11.step_residuals[1] / fine < 16.0 * 1.3);

  // the T1 image of the plus-vacuum seed has an identically vanishing m10
  // component (p10 = 0 and the log-derivative term is constant in x), so a
  // second T1 leaves the transformation's domain; the chain reports the step.
  try {
    chain_generate(2, 0, seed, sys, w, 1e-6);
    FAIL_CHECK("expected DenominatorUnderflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::denominator_underflow);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("two-path oracle separates symmetry from broken coupling") {
  using enum Field;
  Grid g = make_grid(128, kTwoPi);
  GridState s0 = pump_state(g, 42);
  IntegrateOptions opts;
  opts.dt = 1e-3;
  opts.t_end = 1e-3;  // one step
  auto one_step = [&](const CompiledSystem& cs, const GridState& s) {
    return integrate_flow(cs, s, opts).final_state;
  };
  CompiledSystem daa = compile_system(base_system(), {}, 1e-6);
  double ok_diff = max_field_diff(one_step(daa, grid_apply(transformation(3), s0, 1e-6)),
                                  grid_apply(transformation(3), one_step(daa, s0), 1e-6));

  EvolutionSystem flipped_sys = base_system();
  flipped_sys.rhs(p10) = parse_expr("-1*p10' - p11*m01");
  CompiledSystem flipped = compile_system(flipped_sys, {}, 1e-6);
  double bad_diff = max_field_diff(one_step(flipped, grid_apply(transformation(3), s0, 1e-6)),
                                   grid_apply(transformation(3), one_step(flipped, s0), 1e-6));
  CHECK(ok_diff < 1e-9);
  CHECK(bad_diff > 1e-6);
  CHECK(bad_diff / ok_diff > 100);
}

TEST_CASE("stability guard and blowup detection") {
  Grid g = make_grid(64, kTwoPi);
  CompiledSystem sys = compile_system(base_system(), {}, 1e-6);
  IntegrateOptions opts;
  opts.dt = 1.0;  // dt * k_max far beyond the RK4 bound
  opts.t_end = 2.0;
  CHECK_THROWS_AS(integrate_flow(sys, pump_state(g, 1), opts), Error);

  // backward-heat direction of the heat-like control blows up to NaN
  using enum Field;
  EvolutionSystem heat;
  for (Field f : all_fields()) heat.rhs(f) = RatExpr();
  heat.rhs(p11) = RatExpr::var(JetVar{p11, 2});
  heat.rhs(m11) = -RatExpr::var(JetVar{m11, 2});
  CompiledSystem cheat = compile_system(heat, {}, 1e-6);
  IntegrateOptions bopts;
  bopts.dt = 2.5 / (32.0 * 32.0);
  bopts.t_end = 1.0;
  try {
    integrate_flow(cheat, random_smooth_state(g, 1.0, 3, 16), bopts);
    FAIL_CHECK("expected NaNDetected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::nan_detected);
  }
}

TEST_CASE("fd4 fallback differentiates smooth data to 4th order") {
  Grid g = make_grid(64, kTwoPi);
  FieldArray f(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j) f[static_cast<size_t>(j)] = std::sin(3 * g.point(j));
  std::vector<FieldArray> fd, sp;
  space_derivatives(f, g, 1, SpaceScheme::fd4, fd);
  space_derivatives(f, g, 1, SpaceScheme::spectral, sp);
  double worst = 0;
  for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(fd[1][static_cast<size_t>(j)] -
                                                                 sp[1][static_cast<size_t>(j)]));
  double h = g.dx();
  CHECK(worst < 10 * std::pow(3 * h, 4));  // h^4 stencil on mode 3
}

TEST_CASE("denominator floor guards transformations on grids") {
  Grid g = make_grid(32, kTwoPi);
  GridState s = zero_state(g);  // m11 identically zero
  CHECK_THROWS_AS(grid_apply(transformation(3), s, 1e-6), Error);
}

TEST_CASE("csv writers") {
  Grid g = make_grid(16, kTwoPi);
  GridState s = pump_state(g, 5);
  std::ostringstream os;
  write_state_csv(os, s);
  std::string text = os.str();
  CHECK(text.find("x,re_p11,im_p11,re_p10") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);  // header + 16 rows

  MonitorSeries ms{"rho1", {0.0, 0.5}, {Complex(1, 0), Complex(1, 1e-3)}};
  std::ostringstream om;
  write_monitor_csv(om, ms);
  CHECK(om.str().find("t,re,im\n") == 0);
}
