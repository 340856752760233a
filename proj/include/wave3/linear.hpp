#pragma once

#include <map>
#include <string>
#include <vector>

#include "wave3/params.hpp"

namespace wave3 {

// One relation  sum coeffs_i * param_i + constant = 0.
struct LinearConstraint {
  std::map<uint32_t, Rational> coeffs;
  Rational constant;

  Rational evaluate(const std::map<uint32_t, Rational>& point) const;
  bool annihilates_direction(const std::map<uint32_t, Rational>& dir) const;
  std::string str() const;
};

// Solution set of a linear system over the parameters: particular point plus
// span of basis directions. Also carries the reduced relations (pivot
// parameter expressed through the free ones) for reporting.
struct AffineSpace {
  std::vector<uint32_t> parameters;   // column order used during elimination
  std::vector<uint32_t> free_params;  // no pivot
  std::map<uint32_t, Rational> particular;
  std::vector<std::map<uint32_t, Rational>> basis;  // one per free parameter
  std::vector<LinearConstraint> relations;          // reduced row echelon rows
  std::vector<uint32_t> pivots;                     // pivot parameter per relation

  int dimension() const { return static_cast<int>(basis.size()); }
  bool contains_point(const std::map<uint32_t, Rational>& point) const;
  bool contains(const AffineSpace& other) const;
  bool same_space(const AffineSpace& other) const;
  // Pivot parameter -> affine ParamPoly over the free parameters.
  std::map<uint32_t, ParamPoly> solved_images() const;
  // Solved presentation, one "pivot = expr" string per relation.
  std::vector<std::string> relation_strings() const;
};

// Exact Gaussian elimination. Every input polynomial must have total degree
// <= 1 (NonlinearConstraint otherwise); contradictory affine parts raise
// Inconsistent. Pivots are chosen along column_order, so parameters listed
// late stay free when possible.
AffineSpace solve_linear_constraints(const std::vector<ParamPoly>& constraints,
                                     const std::vector<uint32_t>& column_order);

}  // namespace wave3
