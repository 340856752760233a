#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wave3/rational.hpp"

namespace wave3 {

// Session-wide registry of scalar parameter symbols (nu11, gamma10, b, c, ...).
// Append-only; ids are stable for the lifetime of the process.
class ParamTable {
 public:
  static ParamTable& instance();

  // Interns a name, rejecting empty names and the six reserved field names.
  uint32_t intern(std::string_view name);
  std::optional<uint32_t> find(std::string_view name) const;
  const std::string& name(uint32_t id) const;
  size_t size() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, uint32_t, std::less<>> index_;
};

struct ParamSymbol {
  uint32_t id;

  static ParamSymbol named(std::string_view name);
  const std::string& name() const;

  friend auto operator<=>(const ParamSymbol&, const ParamSymbol&) = default;
};

// Multi-exponent over parameter symbols; sorted by id, exponents positive.
using ParamMonomial = std::vector<std::pair<uint32_t, uint32_t>>;

// An affine form  constant + sum coeff_i * param_i.
struct LinearForm {
  Rational constant;
  std::map<uint32_t, Rational> coeffs;
};

// Exact polynomial in parameter symbols with rational coefficients; the
// coefficient ring for everything in the symbolic layer.
class ParamPoly {
 public:
  ParamPoly() = default;
  ParamPoly(const Rational& r);
  ParamPoly(long n) : ParamPoly(Rational(n)) {}
  static ParamPoly symbol(ParamSymbol s);
  static ParamPoly symbol(std::string_view name) { return symbol(ParamSymbol::named(name)); }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::optional<Rational> as_rational() const;  // engaged iff constant (incl. zero)
  int total_degree() const;
  std::optional<LinearForm> as_linear() const;  // engaged iff total degree <= 1

  ParamPoly operator-() const;
  ParamPoly operator+(const ParamPoly& o) const;
  ParamPoly operator-(const ParamPoly& o) const;
  ParamPoly operator*(const ParamPoly& o) const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly scaled(const Rational& r) const;

  bool operator==(const ParamPoly& o) const { return terms_ == o.terms_; }
  std::strong_ordering operator<=>(const ParamPoly& o) const;

  ParamPoly substituted(const std::map<uint32_t, ParamPoly>& images) const;
  Rational evaluated(const std::map<uint32_t, Rational>& values) const;

  // Divides by the rational content and makes the leading coefficient
  // positive; canonical representative of the proportionality class.
  ParamPoly primitive_part() const;

  std::vector<uint32_t> symbols() const;
  const std::map<ParamMonomial, Rational>& terms() const { return terms_; }

  std::string str() const;

 private:
  void add_term(const ParamMonomial& m, const Rational& c);
  std::map<ParamMonomial, Rational> terms_;
};

}  // namespace wave3
