#pragma once

#include <memory>

#include "wave3/ratexpr.hpp"

namespace wave3 {

struct EvolutionSystem;

// Expression tree over jet expressions with explicit Dt/Dx operator nodes.
// The paper's directional operators are expanded at construction:
//   D10 = Dt + Dx,  D01 = Dt - Dx,  D11 = 2 Dt,
// and ln f only ever appears under a derivative, so log-derivatives are
// built directly as rational nodes (D f / f).
class RawExpr {
 public:
  RawExpr() : RawExpr(lit(RatExpr())) {}

  static RawExpr lit(RatExpr e);
  static RawExpr field(Field f) { return lit(RatExpr::field(f)); }
  static RawExpr number(const Rational& r) { return lit(RatExpr(r)); }

  static RawExpr Dt(RawExpr e);
  static RawExpr Dx(RawExpr e);
  static RawExpr D10(RawExpr e) { return Dt(e) + Dx(e); }
  static RawExpr D01(RawExpr e) { return Dt(e) - Dx(e); }
  static RawExpr D11(RawExpr e) { return Dt(e) * number(Rational(2)); }
  // D applied to ln(e), expanded rationally at construction.
  static RawExpr Dt_log(RawExpr e) { return Dt(e) / e; }
  static RawExpr Dx_log(RawExpr e) { return Dx(e) / e; }
  static RawExpr D10_log(RawExpr e) { return D10(e) / e; }
  static RawExpr D01_log(RawExpr e) { return D01(e) / e; }
  static RawExpr D11_log(RawExpr e) { return D11(e) / e; }

  RawExpr operator+(const RawExpr& o) const;
  RawExpr operator-(const RawExpr& o) const;
  RawExpr operator*(const RawExpr& o) const;
  RawExpr operator/(const RawExpr& o) const;

  bool has_time_derivative() const;

  // Eliminates every Dt via the evolution system and evaluates the tree to a
  // pure x-jet expression.
  RatExpr reduce(const EvolutionSystem& sys) const;

 private:
  enum class Kind { leaf, add, sub, mul, div, dt, dx };
  struct Node {
    Kind kind;
    RatExpr value;  // leaf only
    std::shared_ptr<const Node> a, b;
  };
  explicit RawExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static RawExpr binary(Kind k, const RawExpr& a, const RawExpr& b);
  static RatExpr reduce_node(const Node& n, const EvolutionSystem& sys);
  static bool node_has_dt(const Node& n);

  std::shared_ptr<const Node> node_;
};

}  // namespace wave3
