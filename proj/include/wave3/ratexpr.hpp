#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wave3/diffpoly.hpp"

namespace wave3 {

struct DenFactor {
  DiffPoly base;
  uint32_t exp = 1;
  bool operator==(const DenFactor& o) const = default;
};

// Exact rational expression in jet variables. The denominator is kept as a
// factored list; cancellation is syntactic (equal factors, monomial content),
// never by multivariate gcd. Equality is decided by cross multiplication.
class RatExpr {
 public:
  RatExpr() = default;  // zero
  RatExpr(const DiffPoly& num);
  RatExpr(const ParamPoly& c) : RatExpr(DiffPoly(c)) {}
  RatExpr(const Rational& r) : RatExpr(DiffPoly(r)) {}
  RatExpr(long n) : RatExpr(DiffPoly(n)) {}
  static RatExpr var(JetVar v) { return RatExpr(DiffPoly::var(v)); }
  static RatExpr field(Field f) { return var(JetVar{f, 0}); }
  static RatExpr param(std::string_view name) { return RatExpr(ParamPoly::symbol(name)); }
  static RatExpr quotient(DiffPoly num, DiffPoly den);

  const DiffPoly& num() const { return num_; }
  const std::vector<DenFactor>& den() const { return den_; }
  DiffPoly den_expanded() const;
  bool den_trivial() const { return den_.empty(); }
  bool den_monomial() const;  // all factors single jet variables

  bool is_zero() const { return num_.is_zero(); }
  std::optional<ParamPoly> as_coefficient() const;

  RatExpr operator-() const;
  RatExpr operator+(const RatExpr& o) const;
  RatExpr operator-(const RatExpr& o) const;
  RatExpr operator*(const RatExpr& o) const;
  RatExpr operator/(const RatExpr& o) const;  // DivisionByZeroExpr when o == 0
  RatExpr pow(int e) const;

  // Canonical equality via cross multiplication (A/B == C/D iff AD - CB == 0).
  bool equals(const RatExpr& o) const;
  // Structural identity of the canonical representation.
  bool operator==(const RatExpr& o) const = default;

  int max_order() const;
  int max_order(Field f) const;
  std::set<JetVar> jet_vars() const;
  bool depends_on(JetVar v) const;

  RatExpr substituted_params(const std::map<uint32_t, ParamPoly>& images) const;

  std::string str() const;

 private:
  void normalize();
  DiffPoly num_;
  std::vector<DenFactor> den_;
};

using FieldMap = std::map<Field, RatExpr>;

enum class ArithKind { add, sub, mul, div, pow };

// Dispatcher form of the arithmetic ops (CLI/diagnostic surface).
RatExpr arith(const RatExpr& lhs, const RatExpr& rhs, ArithKind kind, int pow_exp = 1);

RatExpr total_x_derivative(const RatExpr& e, int times = 1);

// Replaces JetVar(f,k) by the k-th total derivative of images.at(f).
// Throws MissingFieldImage if a field occurring in e has no image.
RatExpr substitute_fields(const RatExpr& e, const FieldMap& images);

bool is_zero(const RatExpr& e);

RatExpr partial_derivative(const RatExpr& e, JetVar v);

// Variational derivative E_f(e) = sum_k (-D)^k d(e)/d(f,k).
RatExpr euler_operator(const RatExpr& e, Field f);

bool is_total_x_derivative(const RatExpr& e);

// Constructs G with D(G) = e for polynomial e; for rational e verifies the
// supplied candidate. Errors: NotExact, NoConstructivePotential,
// CandidateMismatch.
RatExpr antiderivative_x(const RatExpr& e, const std::optional<RatExpr>& candidate = std::nullopt);

// Clears the denominator and returns the distinct jet-monomial coefficients
// of the numerator (primitive form, canonically ordered). The expression is
// identically zero in the fields iff all returned polynomials are zero.
std::vector<ParamPoly> collect_parameter_constraints(const RatExpr& e);

}  // namespace wave3
