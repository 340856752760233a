#include "wave3/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wave3/config.hpp"
#include "wave3/errors.hpp"
#include "wave3/hierarchy.hpp"
#include "wave3/numerics.hpp"
#include "wave3/parse.hpp"
#include "wave3/report.hpp"

namespace wave3::cli {

namespace {

RatExpr V(Field f, int k = 0) { return RatExpr::var(JetVar{f, static_cast<uint16_t>(k)}); }

std::vector<int> parse_transform_list(const std::string& spec) {
  if (spec == "all") return {1, 2, 3};
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "t1") out.push_back(1);
    else if (item == "t2") out.push_back(2);
    else if (item == "t3") out.push_back(3);
    else fail(Errc::config_error, "unknown transformation: " + item);
  }
  if (out.empty()) fail(Errc::config_error, "empty transformation list");
  return out;
}

// Flips the sign of the non-derivative (coupling) part of one right-hand side.
EvolutionSystem flip_coupling(EvolutionSystem sys, Field f) {
  const RatExpr& rhs = sys.rhs(f);
  if (!rhs.den_trivial()) fail(Errc::config_error, "cannot flip a rational right-hand side");
  DiffPoly transport, coupling;
  for (const auto& [mono, coeff] : rhs.num().terms()) {
    if (mono.max_order() >= 1)
      transport += DiffPoly::term(mono, coeff);
    else
      coupling += DiffPoly::term(mono, coeff);
  }
  sys.rhs(f) = RatExpr(transport - coupling);
  return sys;
}

void check_zero(Report& report, const std::string& name, const RatExpr& residual,
                const std::string& detail = "") {
  CheckResult c;
  c.name = name;
  c.ok = residual.is_zero();
  c.detail = detail;
  if (!c.ok) c.witness = clip_witness(format_expr(residual));
  report.add(std::move(c));
}

void cmd_verify_base(Report& report, const std::string& transforms, const std::string& flip) {
  EvolutionSystem sys = base_system();
  if (!flip.empty()) {
    auto f = field_from_name(flip);
    if (!f) fail(Errc::config_error, "unknown field: " + flip);
    sys = flip_coupling(sys, *f);
  }
  for (int i : parse_transform_list(transforms)) {
    auto residuals = symmetry_residual(sys, transformation(i));
    for (Field f : all_fields())
      check_zero(report, "t" + std::to_string(i) + "/" + std::string(field_name(f)),
                 residuals[static_cast<int>(f)]);
  }
}

void cmd_verify_commute(Report& report) {
  Substitution t12 = compose(transformation(1), transformation(2));
  Substitution t21 = compose(transformation(2), transformation(1));
  for (Field f : all_fields())
    check_zero(report, "t1t2-vs-t3/" + std::string(field_name(f)),
               t12.image(f) - transformation(3).image(f));
  for (Field f : all_fields())
    check_zero(report, "t2t1-vs-t3/" + std::string(field_name(f)),
               t21.image(f) - transformation(3).image(f));
}

void cmd_verify_inverse(Report& report, const std::string& transforms) {
  for (int i : parse_transform_list(transforms)) {
    Substitution right = compose(transformation(i), inverse_transformation(i));
    Substitution left = compose(inverse_transformation(i), transformation(i));
    for (Field f : all_fields())
      check_zero(report, "t" + std::to_string(i) + "-right/" + std::string(field_name(f)),
                 right.image(f) - RatExpr::field(f));
    for (Field f : all_fields())
      check_zero(report, "t" + std::to_string(i) + "-left/" + std::string(field_name(f)),
                 left.image(f) - RatExpr::field(f));
  }
}

void fill_constraints(Report& report, const AffineSpace& space) {
  ConstraintsSection cs;
  cs.dimension = space.dimension();
  for (uint32_t id : space.free_params) cs.free_parameters.push_back(ParamTable::instance().name(id));
  cs.relations = space.relation_strings();
  report.constraints = cs;
}

void cmd_derive(Report& report, int degree, const std::string& transforms) {
  FlowFamily fam;
  switch (degree) {
    case 0: fam = zero_degree_family(); break;
    case 1: fam = first_degree_family(); break;
    case 2: fam = second_degree_family(); break;
    default: fail(Errc::config_error, "degree must be 0, 1 or 2");
  }
  std::set<int> ts;
  for (int i : parse_transform_list(transforms)) ts.insert(i);
  AffineSpace space = derive_parameter_constraints(fam, ts);
  fill_constraints(report, space);

  CheckResult dim;
  dim.name = "dimension";
  dim.ok = space.dimension() == 2;
  dim.detail = "solution space dimension " + std::to_string(space.dimension());
  if (!dim.ok) dim.witness = std::to_string(space.dimension());
  report.add(std::move(dim));

  if (degree == 0) {
    CheckResult none;
    none.name = "no-constraints";
    none.ok = space.relations.empty();
    none.detail = "zero-degree family is unconstrained";
    if (!none.ok) none.witness = space.relation_strings().front();
    report.add(std::move(none));
  }
  if (degree == 1 || degree == 2) {
    AffineSpace expected = degree == 1 ? expected_first_degree_space()
                                       : expected_second_degree_space();
    CheckResult match;
    match.name = degree == 1 ? "matches-first-degree-relations" : "matches-hm-gd-relations";
    match.ok = space.same_space(expected);
    match.detail = "mutual containment of derived and stated solution spaces";
    if (!match.ok) match.witness = "spaces differ";
    report.add(std::move(match));
  }
  if (degree == 1 && ts == std::set<int>{1, 2, 3}) {
    std::map<uint32_t, Rational> daa{{ParamSymbol::named("nu01").id, Rational(1)},
                                     {ParamSymbol::named("nu10").id, Rational(-1)},
                                     {ParamSymbol::named("nu11").id, Rational(0)},
                                     {ParamSymbol::named("gamma10").id, Rational(1)},
                                     {ParamSymbol::named("gamma01").id, Rational(1)},
                                     {ParamSymbol::named("gamma11").id, Rational(-1, 2)}};
    CheckResult c1;
    c1.name = "contains-base-system-point";
    c1.ok = space.contains_point(daa);
    c1.detail = "nu01=1, nu10=-1 specialization reproduces the base system";
    if (!c1.ok) c1.witness = "point violates derived relations";
    report.add(std::move(c1));
    std::map<uint32_t, Rational> shift{{ParamSymbol::named("nu01").id, Rational(1)},
                                       {ParamSymbol::named("nu10").id, Rational(1)},
                                       {ParamSymbol::named("nu11").id, Rational(1)},
                                       {ParamSymbol::named("gamma10").id, Rational(0)},
                                       {ParamSymbol::named("gamma01").id, Rational(0)},
                                       {ParamSymbol::named("gamma11").id, Rational(0)}};
    CheckResult c2;
    c2.name = "contains-shift-point";
    c2.ok = space.contains_point(shift);
    c2.detail = "nu=1, gamma=0 specialization is the shift flow";
    if (!c2.ok) c2.witness = "point violates derived relations";
    report.add(std::move(c2));
  }
  if (degree == 2) {
    auto img = space.solved_images();
    auto at = [&](const char* name) {
      uint32_t id = ParamSymbol::named(name).id;
      auto it = img.find(id);
      return it == img.end() ? ParamPoly::symbol(ParamSymbol{id}) : it->second;
    };
    CheckResult sym;
    sym.name = "hm-matrix-symmetric";
    sym.ok = at("b11") == at("a10") && at("c11") == at("a01") && at("c10") == at("b01");
    sym.detail = "coefficient matrix of the quadratic R terms";
    if (!sym.ok) sym.witness = "asymmetric entry";
    report.add(std::move(sym));
  }
  // invariance at the symbolic generic point of the solved space
  EvolutionSystem generic = constrained_system(fam, space);
  for (int i : ts) {
    auto residuals = symmetry_residual(generic, transformation(i));
    bool all_ok = true;
    RatExpr first_bad;
    for (Field f : all_fields())
      if (!residuals[static_cast<int>(f)].is_zero() && all_ok) {
        all_ok = false;
        first_bad = residuals[static_cast<int>(f)];
      }
    CheckResult c;
    c.name = "generic-point-invariance/t" + std::to_string(i);
    c.ok = all_ok;
    c.detail = "residuals at symbolic free parameters";
    if (!all_ok) c.witness = clip_witness(format_expr(first_bad));
    report.add(std::move(c));
  }
}

void cmd_verify_hamiltonian(Report& report) {
  PoissonStructure brackets;
  EvolutionSystem flow = hamiltonian_flow(first_degree_hamiltonian_density(), brackets);
  FlowFamily fam = first_degree_family();
  std::map<uint32_t, ParamPoly> constrain;
  ParamPoly g11 = ParamPoly::symbol("gamma11");
  constrain.emplace(ParamSymbol::named("gamma10").id, ParamPoly(Rational(-2)) * g11);
  constrain.emplace(ParamSymbol::named("gamma01").id, ParamPoly(Rational(-2)) * g11);
  EvolutionSystem constrained = specialize(fam.rhs, constrain);
  for (Field f : all_fields())
    check_zero(report, std::string(field_name(f)), flow.rhs(f) - constrained.rhs(f),
               "bracket orientation sign = " + std::to_string(brackets.sign));
}

void conservation_checks(Report& report, const std::string& label, const RatExpr& density,
                         const EvolutionSystem& flow, const RatExpr& expected_flux) {
  ConservationOutcome out = conservation_check(density, flow);
  CheckResult exact;
  exact.name = label + "-exact";
  exact.ok = out.conserved;
  exact.detail = "variational derivative of d/dt density vanishes";
  if (!out.conserved) exact.witness = clip_witness(format_expr(*out.witness));
  report.add(std::move(exact));
  if (!out.conserved) return;
  CheckResult fx;
  fx.name = label + "-flux";
  std::string note = "extracted flux " + clip_witness(format_expr(out.pair->flux), 200);
  fx.ok = equal_modulo_constant(out.pair->flux, expected_flux, &note);
  fx.detail = note;
  if (!fx.ok) fx.witness = clip_witness(format_expr(out.pair->flux - expected_flux));
  report.add(std::move(fx));
}

void cmd_verify_conservation(Report& report, const std::string& flow_name,
                             const std::string& extra_density) {
  using enum Field;
  if (flow_name == "first") {
    EvolutionSystem sys = base_system();
    conservation_checks(report, "rho1", density_rho1(), sys, -(V(p10) * V(m10)));
    conservation_checks(report, "rho2", density_rho2(), sys, V(p01) * V(m01));
    if (!extra_density.empty()) {
      ConservationOutcome out = conservation_check(parse_expr(extra_density), sys);
      CheckResult c;
      c.name = "custom-exact";
      c.ok = out.conserved;
      c.detail = extra_density;
      if (!out.conserved) c.witness = clip_witness(format_expr(*out.witness));
      report.add(std::move(c));
    }
    return;
  }
  if (flow_name != "second") fail(Errc::config_error, "--flow must be first or second");
  FlowFamily fam = second_degree_family();
  AffineSpace space = derive_parameter_constraints(fam, {1, 2, 3});
  EvolutionSystem flow = constrained_system(fam, space);
  auto img = space.solved_images();
  auto coeff = [&](const char* name) {
    uint32_t id = ParamSymbol::named(name).id;
    auto it = img.find(id);
    return RatExpr(it == img.end() ? ParamPoly::symbol(ParamSymbol{id}) : it->second);
  };
  RatExpr w11 = V(p11, 1) * V(m11) - V(p11) * V(m11, 1);
  RatExpr w10 = V(p10, 1) * V(m10) - V(p10) * V(m10, 1);
  RatExpr w01 = V(p01, 1) * V(m01) - V(p01) * V(m01, 1);
  RatExpr vv = V(m01) * V(m10) * V(p11) - V(p01) * V(p10) * V(m11);
  conservation_checks(report, "rho1", density_rho1(), flow,
                      RatExpr(2) * coeff("a11") * w11 + RatExpr(2) * coeff("b10") * w10 +
                          coeff("gamma10") * vv);
  conservation_checks(report, "rho2", density_rho2(), flow,
                      RatExpr(2) * coeff("a11") * w11 + RatExpr(2) * coeff("c01") * w01 +
                          coeff("gamma01") * vv);
  if (!extra_density.empty()) {
    ConservationOutcome out = conservation_check(parse_expr(extra_density), flow);
    CheckResult c;
    c.name = "custom-exact";
    c.ok = out.conserved;
    c.detail = extra_density;
    if (!out.conserved) c.witness = clip_witness(format_expr(*out.witness));
    report.add(std::move(c));
  }
}

void cmd_verify_appendix(Report& report, const std::string& which, bool inject,
                         const std::string& reading) {
  AppendixOptions opts;
  opts.which = which;
  opts.inject_typo = inject;
  opts.appendix2_reading = reading == "a" ? 'a' : 'b';
  for (auto& chk : verify_appendix_identities(opts)) {
    CheckResult c;
    c.name = chk.name;
    c.ok = chk.ok;
    c.detail = chk.detail;
    if (!chk.ok) c.witness = clip_witness(chk.witness);
    report.add(std::move(c));
  }
}

std::map<uint32_t, Rational> bind_params(const FlowFamily& fam, const RunConfig& cfg,
                                         const AffineSpace* space) {
  std::map<uint32_t, Rational> values;
  // free parameters from config (param.<name>), defaults 1/100
  for (uint32_t id : fam.parameters) {
    const std::string& name = ParamTable::instance().name(id);
    auto it = cfg.params.find(name);
    if (it != cfg.params.end()) values[id] = it->second;
  }
  if (space) {
    for (uint32_t id : space->free_params)
      if (!values.count(id)) values[id] = Rational(1, 100);
    auto img = space->solved_images();
    for (const auto& [id, poly] : img) {
      std::map<uint32_t, Rational> freevals;
      for (uint32_t fid : space->free_params) freevals[fid] = values.at(fid);
      values[id] = poly.evaluated(freevals);
    }
  }
  return values;
}

GridState configured_state(const RunConfig& cfg) {
  Grid grid = make_grid(cfg.grid_n, cfg.grid_length);
  std::array<Complex, 6> offsets{};
  offsets[static_cast<int>(Field::m11)] = Complex(cfg.m11_offset, 0);
  return random_smooth_state(grid, cfg.amplitude, cfg.rng_seed, cfg.max_mode, offsets);
}

void cmd_simulate(Report& report, const std::string& flow_name, const RunConfig& cfg,
                  const std::string& csv_dir) {
  JetLimits::set_max_order(cfg.max_jet_order);
  EvolutionSystem flow;
  std::map<uint32_t, Rational> values;
  if (flow_name == "first") {
    flow = base_system();
  } else if (flow_name == "second") {
    FlowFamily fam = second_degree_family();
    AffineSpace space = derive_parameter_constraints(fam, {1, 2, 3});
    flow = fam.rhs;
    values = bind_params(fam, cfg, &space);
  } else {
    fail(Errc::config_error, "--flow must be first or second");
  }
  CompiledSystem sys = compile_system(flow, values, cfg.denominator_floor);
  GridState s0 = configured_state(cfg);
  IntegrateOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.scheme = cfg.space_scheme == "fd4" ? SpaceScheme::fd4 : SpaceScheme::spectral;
  opts.stability_limit = cfg.stability_limit;
  opts.snapshot_stride = csv_dir.empty() ? 0 : cfg.snapshot_stride;
  opts.monitors = {{"rho1", CompiledExpr(density_rho1(), {}, cfg.denominator_floor)},
                   {"rho2", CompiledExpr(density_rho2(), {}, cfg.denominator_floor)}};
  Trajectory traj = integrate_flow(sys, s0, opts);

  CheckResult finite;
  finite.name = "finite";
  finite.ok = true;
  finite.detail = "no NaN over t in [0, " + std::to_string(cfg.t_end) + "]";
  report.add(std::move(finite));
  for (const auto& series : traj.monitors) {
    CheckResult c;
    c.name = series.name + "-drift";
    double drift = series.relative_drift();
    c.ok = drift < cfg.drift_tol;
    std::ostringstream d;
    d << "relative drift " << drift << " (tolerance " << cfg.drift_tol << ")";
    c.detail = d.str();
    if (!c.ok) c.witness = d.str();
    report.add(std::move(c));
  }
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    int idx = 0;
    for (const auto& snap : traj.snapshots) {
      std::ofstream os(csv_dir + "/state_" + std::to_string(idx++) + ".csv");
      write_state_csv(os, snap);
    }
    std::ofstream fin(csv_dir + "/state_final.csv");
    write_state_csv(fin, traj.final_state);
    for (const auto& series : traj.monitors) {
      std::ofstream os(csv_dir + "/monitor_" + series.name + ".csv");
      write_monitor_csv(os, series);
    }
  }
}

void cmd_chain(Report& report, int n1, int n2, const RunConfig& cfg, const std::string& csv_dir) {
  JetLimits::set_max_order(cfg.max_jet_order);
  auto seed = std::make_shared<PlusVacuumSampler>(cfg.seed_k, cfg.seed_m, cfg.seed_c);
  CompiledSystem base = compile_system(base_system(), {}, cfg.denominator_floor);
  ResidualWindow window;
  window.x0 = cfg.window_x0;
  window.x1 = cfg.window_x1;
  window.t0 = cfg.window_t0;
  window.t1 = cfg.window_t1;
  window.nx = cfg.window_nx;
  window.nt = cfg.window_nt;
  window.tau = cfg.tau;
  ChainResult chain = chain_generate(n1, n2, seed, base, window, cfg.denominator_floor);
  for (size_t i = 0; i < chain.step_residuals.size(); ++i) {
    CheckResult c;
    c.name = "step-" + std::to_string(i + 1) + "-residual";
    c.ok = chain.step_residuals[i] < cfg.chain_residual_tol;
    std::ostringstream d;
    d << "flow residual " << chain.step_residuals[i] << " (tolerance " << cfg.chain_residual_tol
      << ")";
    c.detail = d.str();
    if (!c.ok) c.witness = d.str();
    report.add(std::move(c));
  }
  if (chain.step_residuals.empty()) {
    CheckResult c;
    c.name = "identity-chain";
    c.ok = true;
    c.detail = "n1 = n2 = 0 returns the seed";
    report.add(std::move(c));
  }
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    std::ofstream os(csv_dir + "/chain_samples.csv");
    os << "x,t";
    for (Field f : all_fields()) os << ",re_" << field_name(f) << ",im_" << field_name(f);
    os << "\n" << std::setprecision(17);
    JetSlice slice;
    for (int it = 0; it <= 8; ++it) {
      double t = cfg.window_t0 + (cfg.window_t1 - cfg.window_t0) * it / 8;
      for (int ix = 0; ix <= 32; ++ix) {
        double x = cfg.window_x0 + (cfg.window_x1 - cfg.window_x0) * ix / 32;
        chain.sampler->sample(x, t, 0, slice);
        os << x << "," << t;
        for (int fi = 0; fi < kNumFields; ++fi) {
          os << "," << slice.jets[static_cast<size_t>(fi)][0].real() << ","
             << slice.jets[static_cast<size_t>(fi)][0].imag();
        }
        os << "\n";
      }
    }
  }
}

std::string cmd_expr(const std::string& mode, const std::string& text, int times) {
  RatExpr e = parse_expr(text);
  if (mode == "eval") return format_expr(e);
  if (mode == "diff") return format_expr(total_x_derivative(e, times));
  if (mode == "reduce") return format_expr(evolution_derivative(e, base_system()));
  fail(Errc::config_error, "expr mode must be eval, diff or reduce");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"symbolic and numerical toolkit for the three-wave hierarchy"};
  app.require_subcommand(1);

  std::string out_path;
  std::string transforms = "all";
  std::string flip_field;
  std::string flow_name = "first";
  std::string which = "all";
  std::string reading = "b";
  std::string config_path;
  std::string csv_dir;
  std::string density_text;
  std::string expr_text;
  int degree = -1;
  int n1 = 0, n2 = 0;
  int diff_times = 1;
  bool inject_typo = false;

  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_path, "write report here"); };

  CLI::App* verify = app.add_subcommand("verify", "symbolic verification suites");
  verify->require_subcommand(1);
  CLI::App* vbase = verify->add_subcommand("base", "invariance of the base system");
  vbase->add_option("--transform", transforms, "t1|t2|t3|all");
  vbase->add_option("--flip-sign", flip_field, "negate the coupling of one field (negative test)");
  add_out(vbase);
  CLI::App* vcomm = verify->add_subcommand("commute", "T1 T2 = T2 T1 = T3");
  add_out(vcomm);
  CLI::App* vinv = verify->add_subcommand("inverse", "composition with the inverse is identity");
  vinv->add_option("--transform", transforms, "t1|t2|t3|all");
  add_out(vinv);
  CLI::App* vham = verify->add_subcommand("hamiltonian", "bracket flow equals the family");
  add_out(vham);
  CLI::App* vcons = verify->add_subcommand("conservation", "density/flux pairs");
  vcons->add_option("--flow", flow_name, "first|second");
  vcons->add_option("--density", density_text, "additional density expression to test");
  add_out(vcons);
  CLI::App* vapp = verify->add_subcommand("appendix", "appendix identity suite");
  vapp->add_option("--which", which, "rig1|rig2|rig3|t3-onshell|t22|sec63|all");
  vapp->add_flag("--inject-typo", inject_typo, "revert a documented typo correction");
  vapp->add_option("--reading", reading, "appendix product-line reading, a|b");
  add_out(vapp);

  CLI::App* derive = app.add_subcommand("derive", "derive parameter constraints of a family");
  derive->add_option("--degree", degree, "0|1|2")->required();
  derive->add_option("--transforms", transforms, "comma list t1,t2,t3 (default all)");
  add_out(derive);

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a flow on a periodic grid");
  simulate->add_option("--flow", flow_name, "first|second")->required();
  simulate->add_option("--config", config_path, "run configuration file");
  simulate->add_option("--csv", csv_dir, "directory for CSV exports");
  add_out(simulate);

  CLI::App* chain = app.add_subcommand("chain", "generate a Backlund chain from the seed");
  chain->add_option("--n1", n1, "T1 applications")->required();
  chain->add_option("--n2", n2, "T2 applications")->required();
  chain->add_option("--config", config_path, "run configuration file");
  chain->add_option("--csv", csv_dir, "directory for CSV exports");
  add_out(chain);

  CLI::App* expr = app.add_subcommand("expr", "expression utilities");
  expr->require_subcommand(1);
  CLI::App* eeval = expr->add_subcommand("eval", "canonical form");
  eeval->add_option("expression", expr_text, "expression text")->required();
  add_out(eeval);
  CLI::App* ediff = expr->add_subcommand("diff", "total x derivative");
  ediff->add_option("expression", expr_text, "expression text")->required();
  ediff->add_option("--times", diff_times, "apply D this many times");
  add_out(ediff);
  CLI::App* ereduce = expr->add_subcommand("reduce", "on-shell time derivative");
  ereduce->add_option("expression", expr_text, "expression text")->required();
  add_out(ereduce);

  std::vector<std::string> argv_copy = args;
  try {
    std::vector<const char*> argv;
    argv.push_back("wave3");
    for (const auto& a : argv_copy) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream os(out_path);
      os << text;
    }
  };

  Report report;
  {
    std::ostringstream cmdline;
    for (size_t i = 0; i < args.size(); ++i) cmdline << (i ? " " : "") << args[i];
    report.command = cmdline.str();
  }
  auto begin = std::chrono::steady_clock::now();

  try {
    if (expr->parsed()) {
      std::string mode = eeval->parsed() ? "eval" : ediff->parsed() ? "diff" : "reduce";
      emit(cmd_expr(mode, expr_text, diff_times) + "\n");
      return 0;
    }
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);

    if (vbase->parsed()) cmd_verify_base(report, transforms, flip_field);
    else if (vcomm->parsed()) cmd_verify_commute(report);
    else if (vinv->parsed()) cmd_verify_inverse(report, transforms);
    else if (vham->parsed()) cmd_verify_hamiltonian(report);
    else if (vcons->parsed()) cmd_verify_conservation(report, flow_name, density_text);
    else if (vapp->parsed()) cmd_verify_appendix(report, which, inject_typo, reading);
    else if (derive->parsed()) cmd_derive(report, degree, transforms);
    else if (simulate->parsed()) cmd_simulate(report, flow_name, cfg, csv_dir);
    else if (chain->parsed()) cmd_chain(report, n1, n2, cfg, csv_dir);
  } catch (const Error& e) {
    report.status = "error";
    CheckResult c;
    c.name = "aborted";
    c.ok = false;
    c.witness = errc_name(e.code());
    c.detail = e.what();
    report.add(std::move(c));
  }

  report.timings_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - begin)
                          .count();
  report.finalize_status();
  emit(report.to_json());
  return report.exit_code();
}

}  // namespace wave3::cli
