#pragma once

#include <array>
#include <string>
#include <vector>

#include "wave3/ratexpr.hpp"
#include "wave3/rawexpr.hpp"

namespace wave3 {

// Evolution system f_t = rhs(f) with right-hand sides in spatial jet
// variables only.
struct EvolutionSystem {
  std::array<RatExpr, 6> rhs_by_field;

  const RatExpr& rhs(Field f) const { return rhs_by_field[static_cast<int>(f)]; }
  RatExpr& rhs(Field f) { return rhs_by_field[static_cast<int>(f)]; }
};

// The 3-wave base system (time/space split form).
EvolutionSystem base_system();

// A discrete transformation in on-shell form: each field mapped to a pure
// x-jet expression.
struct Substitution {
  std::array<RatExpr, 6> images;
  std::string provenance;

  const RatExpr& image(Field f) const { return images[static_cast<int>(f)]; }
  RatExpr& image(Field f) { return images[static_cast<int>(f)]; }
  FieldMap as_map() const;
  bool denominators_monomial() const;

  static Substitution identity();
};

// The literal transformation formulas T1, T2, T3 with directional operators
// expanded; still contain Dt nodes.
std::array<RawExpr, 6> raw_transformation(int i);

RatExpr on_shell_reduce(const RawExpr& e, const EvolutionSystem& sys);

// On-shell transformation against the base system; cached per i.
const Substitution& transformation(int i);

// d/dt of e on solutions of sys: sum over jet vars of de/d(f,k) * D^k rhs(f).
RatExpr evolution_derivative(const RatExpr& e, const EvolutionSystem& sys);

// Matrix of linear differential operators sum_k coeff * D^k.
struct FrechetEntry {
  std::vector<std::pair<RatExpr, int>> terms;
};

struct FrechetOperator {
  std::array<std::array<FrechetEntry, 6>, 6> entries;

  const FrechetEntry& at(Field row, Field col) const {
    return entries[static_cast<int>(row)][static_cast<int>(col)];
  }
  std::array<RatExpr, 6> apply(const std::array<RatExpr, 6>& vec) const;
};

FrechetOperator frechet(const Substitution& s);
FrechetOperator frechet(const EvolutionSystem& sys);

// Residuals of the symmetry condition F(T(u)) = T'(u) F(u), one per field:
//   residual(g) = evolution_derivative(T.image(g), flow)
//               - substitute_fields(flow.rhs(g), T.images).
// All six vanish iff flow is carried by T.
std::array<RatExpr, 6> symmetry_residual(const EvolutionSystem& flow, const Substitution& t);

// (outer o inner)(u) = outer(inner(u)).
Substitution compose(const Substitution& outer, const Substitution& inner);

// Derived by solving the transformation equations for the old fields;
// compose(transformation(i), inverse_transformation(i)) == identity.
const Substitution& inverse_transformation(int i);

// delta_i(e) = e o T_i - e.
RatExpr delta(const RatExpr& e, int i);

}  // namespace wave3
