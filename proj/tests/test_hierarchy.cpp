#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wave3/errors.hpp"
#include "wave3/hierarchy.hpp"
#include "wave3/parse.hpp"

using namespace wave3;

namespace {

RatExpr V(Field f, int k = 0) { return RatExpr::var(JetVar{f, static_cast<uint16_t>(k)}); }

std::map<uint32_t, Rational> values(std::initializer_list<std::pair<const char*, Rational>> kv) {
  std::map<uint32_t, Rational> out;
  for (const auto& [name, r] : kv) out.emplace(ParamSymbol::named(name).id, r);
  return out;
}

bool systems_equal(const EvolutionSystem& a, const EvolutionSystem& b) {
  for (Field f : all_fields())
    if (!a.rhs(f).equals(b.rhs(f))) return false;
  return true;
}

}  // namespace

TEST_CASE("zero degree family") {
  using enum Field;
  FlowFamily fam = zero_degree_family();
  CHECK(fam.rhs.rhs(p11).equals(parse_expr("(c + b)*p11")));
  CHECK(fam.rhs.rhs(m10).equals(parse_expr("-1*b*m10")));
  EvolutionSystem at_zero = specialize(fam.rhs, values({{"b", 0}, {"c", 0}}));
  for (Field f : all_fields()) CHECK(at_zero.rhs(f).is_zero());

  // rescaled symmetry relations for T3: the transformed growth rates line up
  // exactly when (c+b) = (c+b), -b = c - (c+b), c = -b + (c+b)
  ParamPoly b = *parse_expr("b").as_coefficient();
  ParamPoly c = *parse_expr("c").as_coefficient();
  CHECK((c + b) - (c + b) == ParamPoly());
  CHECK(-b - (c - (c + b)) == ParamPoly());
  CHECK(c - (-b + (c + b)) == ParamPoly());

  AffineSpace space = derive_parameter_constraints(fam, {1, 2, 3});
  CHECK(space.dimension() == 2);
  CHECK(space.relations.empty());  // no constraints at degree zero
}

TEST_CASE("first degree family and specializations") {
  using enum Field;
  FlowFamily fam = first_degree_family();
  CHECK(fam.parameters.size() == 6);

  // base-system specialization of section 5
  EvolutionSystem daa = specialize(
      fam.rhs, values({{"nu01", 1}, {"nu10", -1}, {"nu11", 0},
                       {"gamma10", 1}, {"gamma01", 1}, {"gamma11", Rational(-1, 2)}}));
  CHECK(systems_equal(daa, base_system()));

  // trivial shift flow
  EvolutionSystem shift = specialize(
      fam.rhs, values({{"nu01", 1}, {"nu10", 1}, {"nu11", 1},
                       {"gamma10", 0}, {"gamma01", 0}, {"gamma11", 0}}));
  for (Field f : all_fields()) CHECK(shift.rhs(f).equals(V(f, 1)));

  EvolutionSystem no_coupling = specialize(fam.rhs, {{ParamSymbol::named("gamma10").id, ParamPoly(Rational(0))}});
  CHECK(no_coupling.rhs(p10).equals(RatExpr::param("nu10") * V(p10, 1)));
}

TEST_CASE("first degree derivation") {
  FlowFamily fam = first_degree_family();
  AffineSpace space = derive_parameter_constraints(fam, {1, 2, 3});
  CHECK(space.dimension() == 2);
  REQUIRE(space.free_params.size() == 2);
  CHECK(ParamTable::instance().name(space.free_params[0]) == "nu10");
  CHECK(ParamTable::instance().name(space.free_params[1]) == "nu01");
  CHECK(space.same_space(expected_first_degree_space()));

  // both named specializations lie in the derived space
  std::map<uint32_t, Rational> daa_point;
  for (auto& [name, val] : std::map<std::string, Rational>{{"nu01", 1}, {"nu10", -1}, {"nu11", 0},
                                                           {"gamma10", 1}, {"gamma01", 1},
                                                           {"gamma11", Rational(-1, 2)}})
    daa_point.emplace(ParamSymbol::named(name).id, val);
  CHECK(space.contains_point(daa_point));
  std::map<uint32_t, Rational> shift_point;
  for (auto& [name, val] : std::map<std::string, Rational>{{"nu01", 1}, {"nu10", 1}, {"nu11", 1},
                                                           {"gamma10", 0}, {"gamma01", 0},
                                                           {"gamma11", 0}})
    shift_point.emplace(ParamSymbol::named(name).id, val);
  CHECK(space.contains_point(shift_point));

  // residuals vanish at the symbolic generic point of the solved space
  EvolutionSystem generic = constrained_system(fam, space);
  for (int i = 1; i <= 3; ++i) {
    auto res = symmetry_residual(generic, transformation(i));
    for (Field f : all_fields()) CHECK(res[static_cast<int>(f)].is_zero());
  }
}

TEST_CASE("second degree family shape") {
  using enum Field;
  FlowFamily fam = second_degree_family();
  CHECK(fam.parameters.size() == 18);
  RatExpr expected_p11 = parse_expr(
      "nu11*p11'' + gamma11*p10*p01' + delta11*p01*p10' + "
      "(2*a11*p11*m11 + b11*p10*m10 + c11*p01*m01)*p11");
  CHECK(fam.rhs.rhs(p11).equals(expected_p11));

  // heat-like control: nu = 1, everything else zero is not a symmetry
  std::map<uint32_t, Rational> point;
  for (uint32_t id : fam.parameters) point.emplace(id, Rational(0));
  for (const char* nu : {"nu11", "nu10", "nu01"}) point[ParamSymbol::named(nu).id] = Rational(1);
  EvolutionSystem heat = specialize(fam.rhs, point);
  CHECK(heat.rhs(p11).equals(V(p11, 2)));
  CHECK(heat.rhs(m11).equals(-V(m11, 2)));
  auto res = symmetry_residual(heat, transformation(3));
  bool any = false;
  for (Field f : all_fields()) any = any || !res[static_cast<int>(f)].is_zero();
  CHECK(any);
}

TEST_CASE("second degree derivation reproduces the relation tables") {
  FlowFamily fam = second_degree_family();
  AffineSpace space = derive_parameter_constraints(fam, {1, 2, 3});
  CHECK(space.dimension() == 2);
  REQUIRE(space.free_params.size() == 2);
  CHECK(ParamTable::instance().name(space.free_params[0]) == "b10");
  CHECK(ParamTable::instance().name(space.free_params[1]) == "c10");
  CHECK(space.same_space(expected_second_degree_space()));

  // every stated relation holds on the solved images
  auto img = space.solved_images();
  auto at = [&](const char* name) {
    uint32_t id = ParamSymbol::named(name).id;
    auto it = img.find(id);
    return it == img.end() ? ParamPoly::symbol(ParamSymbol{id}) : it->second;
  };
  ParamPoly b10 = ParamPoly::symbol("b10"), c10 = ParamPoly::symbol("c10");
  CHECK(at("a11") == ParamPoly(Rational(-2)) * c10);
  CHECK(at("b11") == at("a10"));
  CHECK(at("c11") == -(ParamPoly(Rational(3)) * c10) - b10);
  CHECK(at("a10") == c10 + b10);
  CHECK(at("a01") == -(ParamPoly(Rational(3)) * c10) - b10);
  CHECK(at("b01") == c10);
  CHECK(at("c01") == -b10 - ParamPoly(Rational(4)) * c10);
  CHECK(at("delta10") == ParamPoly(Rational(4)) * c10);
  CHECK(at("gamma10") == ParamPoly(Rational(-2)) * (c10 + b10));
  CHECK(ParamPoly(Rational(2)) * at("gamma11") == at("delta10") - at("gamma10"));
  CHECK(ParamPoly(Rational(2)) * at("delta11") == -at("gamma10"));
  CHECK(at("delta01") == -at("delta10"));
  CHECK(at("gamma01") == at("gamma10") - at("delta10"));
  CHECK(at("nu11") == at("a11"));
  CHECK(at("nu10") == ParamPoly(Rational(2)) * b10);
  CHECK(at("nu01") == ParamPoly(Rational(2)) * at("c01"));

  // the coefficient matrix of the R terms is symmetric
  CHECK(at("b11") == at("a10"));
  CHECK(at("c11") == at("a01"));
  CHECK(at("c10") == at("b01"));

  // residuals vanish at symbolic (b10, c10)
  EvolutionSystem generic = constrained_system(fam, space);
  for (int i = 1; i <= 3; ++i) {
    auto res = symmetry_residual(generic, transformation(i));
    for (Field f : all_fields()) CHECK(res[static_cast<int>(f)].is_zero());
  }
}

TEST_CASE("hamiltonian flow reproduces the constrained first-degree family") {
  using enum Field;
  PoissonStructure brackets;  // recorded sign: -1
  RatExpr h = first_degree_hamiltonian_density();
  EvolutionSystem flow = hamiltonian_flow(h, brackets);

  FlowFamily fam = first_degree_family();
  std::map<uint32_t, ParamPoly> constrain;
  ParamPoly g11 = ParamPoly::symbol("gamma11");
  constrain.emplace(ParamSymbol::named("gamma10").id, ParamPoly(Rational(-2)) * g11);
  constrain.emplace(ParamSymbol::named("gamma01").id, ParamPoly(Rational(-2)) * g11);
  EvolutionSystem constrained = specialize(fam.rhs, constrain);
  CHECK(systems_equal(flow, constrained));  // identically in nu11, nu10, nu01, gamma11

  EvolutionSystem zero_flow = hamiltonian_flow(RatExpr(), brackets);
  for (Field f : all_fields()) CHECK(zero_flow.rhs(f).is_zero());

  EvolutionSystem number_flow = hamiltonian_flow(V(p10) * V(m10), brackets);
  CHECK(number_flow.rhs(p10).equals(RatExpr(brackets.sign) * V(p10)));
  CHECK(number_flow.rhs(m10).equals(RatExpr(-brackets.sign) * V(m10)));
}

TEST_CASE("conservation under the base flow") {
  using enum Field;
  EvolutionSystem sys = base_system();
  // hand oracle: 2(p11 m11)^. + (p10 m10)^. telescopes to -(p10 m10)'
  //   2(p11 m11)^. = -p01 p10 m11 - p11 m01 m10
  //   (p10 m10)^.  = -p10' m10 + p11 m01 m10 - p10 m10' + p10 m11 p01
  // so the sum is -(p10' m10 + p10 m10') = D(-p10 m10).
  auto res1 = conservation_check(density_rho1(), sys);
  REQUIRE(res1.conserved);
  REQUIRE(res1.pair.has_value());
  CHECK(res1.pair->flux.equals(parse_expr("-1*p10*m10")));

  auto res2 = conservation_check(density_rho2(), sys);
  REQUIRE(res2.conserved);
  REQUIRE(res2.pair.has_value());
  CHECK(res2.pair->flux.equals(parse_expr("p01*m01")));

  auto bad = conservation_check(V(p10) * V(m01), sys);
  CHECK(!bad.conserved);
  REQUIRE(bad.witness.has_value());
  CHECK(!bad.witness->is_zero());
}

TEST_CASE("conservation under the constrained second-degree flow") {
  using enum Field;
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

  auto res1 = conservation_check(density_rho1(), flow);
  REQUIRE(res1.conserved);
  RatExpr flux1 = RatExpr(2) * coeff("a11") * w11 + RatExpr(2) * coeff("b10") * w10 +
                  coeff("gamma10") * vv;
  std::string note;
  CHECK(equal_modulo_constant(res1.pair->flux, flux1, &note));

  auto res2 = conservation_check(density_rho2(), flow);
  REQUIRE(res2.conserved);
  RatExpr flux2 = RatExpr(2) * coeff("a11") * w11 + RatExpr(2) * coeff("c01") * w01 +
                  coeff("gamma01") * vv;
  CHECK(equal_modulo_constant(res2.pair->flux, flux2, &note));
}

TEST_CASE("appendix identities verify") {
  auto checks = verify_appendix_identities({});
  CHECK(checks.size() >= 13);
  for (const auto& chk : checks) {
    CAPTURE(chk.name);
    CHECK(chk.ok);
  }
}

TEST_CASE("appendix negative controls") {
  AppendixOptions perturbed;
  perturbed.which = "rig3";
  perturbed.inject_typo = true;
  auto checks = verify_appendix_identities(perturbed);
  REQUIRE(checks.size() == 1);
  CHECK(!checks[0].ok);
  CHECK(!checks[0].witness.empty());

  AppendixOptions reading_a;
  reading_a.which = "t3-onshell";
  reading_a.appendix2_reading = 'a';
  bool product_failed = false;
  for (const auto& chk : verify_appendix_identities(reading_a))
    if (chk.name == "t3-onshell/p11-m11-product") product_failed = !chk.ok && !chk.witness.empty();
  CHECK(product_failed);
}
