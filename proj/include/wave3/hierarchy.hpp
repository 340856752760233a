#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wave3/linear.hpp"
#include "wave3/model.hpp"

namespace wave3 {

// A parametric family of flows sharing the discrete symmetries, graded by
// the highest spatial derivative on the right-hand sides.
struct FlowFamily {
  std::string name;
  std::vector<uint32_t> parameters;      // registration order
  std::vector<uint32_t> preferred_free;  // eliminated last, so they stay free
  EvolutionSystem rhs;
  int degree = 0;
};

FlowFamily zero_degree_family();
FlowFamily first_degree_family();
FlowFamily second_degree_family();

// Computes the symmetry residuals of the family under the requested
// transformations, collects the jet-monomial coefficients and solves the
// resulting linear system over the parameters.
AffineSpace derive_parameter_constraints(const FlowFamily& fam, const std::set<int>& transforms);

EvolutionSystem specialize(const EvolutionSystem& sys, const std::map<uint32_t, ParamPoly>& images);
EvolutionSystem specialize(const EvolutionSystem& sys, const std::map<uint32_t, Rational>& values);

// Family rhs with the derived relations substituted; remaining symbols are
// the space's free parameters.
EvolutionSystem constrained_system(const FlowFamily& fam, const AffineSpace& space);

// Paper fixture spaces for the derivations (first and second degree).
AffineSpace expected_first_degree_space();
AffineSpace expected_second_degree_space();

// Ultralocal constant Poisson pairing {p11,m11} = 1/2, {p10,m10} = {p01,m01} = 1.
struct PoissonStructure {
  Rational weight11 = Rational(1, 2);
  Rational weight10 = Rational(1);
  Rational weight01 = Rational(1);
  int sign = -1;  // recorded orientation; -1 reproduces the first-degree family
};

// Flow generated by the Hamiltonian density under the constant brackets.
EvolutionSystem hamiltonian_flow(const RatExpr& h_density, const PoissonStructure& p);

// The first-degree Hamiltonian density (nu-weighted Wronskians + cubic term).
RatExpr first_degree_hamiltonian_density();

struct DensityFluxPair {
  RatExpr density;
  RatExpr flux;  // d/dt density = D(flux) on solutions
};

struct ConservationOutcome {
  bool conserved = false;
  std::optional<DensityFluxPair> pair;
  std::optional<RatExpr> witness;  // nonzero variational derivative
};

// Euler-operator exactness test for d/dt density; constructs the flux by
// partial integration when the time derivative is polynomial, otherwise
// verifies `candidate_flux`.
ConservationOutcome conservation_check(const RatExpr& density, const EvolutionSystem& flow,
                                       const std::optional<RatExpr>& candidate_flux = std::nullopt);

// The two quadratic densities of the conservation laws.
RatExpr density_rho1();  // 2 p11 m11 + p10 m10
RatExpr density_rho2();  // 2 p11 m11 + p01 m01

struct IdentityCheck {
  std::string name;
  bool ok = false;
  std::string witness;  // nonzero residual when !ok
  std::string detail;
};

struct AppendixOptions {
  std::string which = "all";  // rig1|rig2|rig3|t3-onshell|t22|sec63|all
  bool inject_typo = false;
  char appendix2_reading = 'b';  // documented-typo toggle for the T3 product line
};

std::vector<IdentityCheck> verify_appendix_identities(const AppendixOptions& opts = {});

std::string space_free_names(const AffineSpace& space);

// True when lhs - rhs is a jet-free constant (fluxes are defined up to one).
bool equal_modulo_constant(const RatExpr& lhs, const RatExpr& rhs, std::string* detail = nullptr);

}  // namespace wave3
