#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wave3/jet.hpp"
#include "wave3/params.hpp"

namespace wave3 {

// Product of jet-variable powers, sorted by (field, order). The empty
// monomial is 1.
class Monomial {
 public:
  Monomial() = default;
  static Monomial var(JetVar v, uint32_t exp = 1);

  bool is_one() const { return vars_.empty(); }
  uint32_t exponent(JetVar v) const;
  int max_order() const;
  int total_degree() const;
  const std::vector<std::pair<JetVar, uint32_t>>& vars() const { return vars_; }

  Monomial times(const Monomial& o) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);
  bool divisible_by(const Monomial& o) const;
  Monomial divided_by(const Monomial& o) const;  // pre: divisible_by(o)

  friend auto operator<=>(const Monomial& a, const Monomial& b) = default;

 private:
  std::vector<std::pair<JetVar, uint32_t>> vars_;
};

// Polynomial in jet variables with ParamPoly coefficients, kept in canonical
// form (no zero coefficients, monomials ordered).
class DiffPoly {
 public:
  DiffPoly() = default;
  DiffPoly(const ParamPoly& c);
  DiffPoly(const Rational& r) : DiffPoly(ParamPoly(r)) {}
  DiffPoly(long n) : DiffPoly(ParamPoly(n)) {}
  static DiffPoly var(JetVar v);
  static DiffPoly term(const Monomial& m, const ParamPoly& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::optional<ParamPoly> as_coefficient() const;  // engaged iff jet-free
  // Engaged iff this is c * monomial with a single term.
  std::optional<std::pair<Monomial, ParamPoly>> as_single_term() const;

  DiffPoly operator-() const;
  DiffPoly operator+(const DiffPoly& o) const;
  DiffPoly operator-(const DiffPoly& o) const;
  DiffPoly operator*(const DiffPoly& o) const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly scaled(const ParamPoly& c) const;
  DiffPoly scaled(const Rational& r) const { return scaled(ParamPoly(r)); }

  bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }
  std::strong_ordering operator<=>(const DiffPoly& o) const;

  // Total x-derivative; raises JetOrderOverflow past the configured cap.
  DiffPoly derivative() const;
  DiffPoly partial(JetVar v) const;

  Monomial content() const;  // gcd of all monomials (1 for the zero poly)
  DiffPoly divided_by_monomial(const Monomial& m) const;

  int max_order() const;
  int max_order(Field f) const;
  std::set<JetVar> jet_vars() const;
  bool depends_on(JetVar v) const;
  int total_degree() const;
  size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, ParamPoly>& terms() const { return terms_; }

  DiffPoly substituted_params(const std::map<uint32_t, ParamPoly>& images) const;
  // Substitutes jet variables by other jet variables (used by formatter tests).
  std::string str() const;

 private:
  void add_term(const Monomial& m, const ParamPoly& c);
  std::map<Monomial, ParamPoly> terms_;
};

}  // namespace wave3
