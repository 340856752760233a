#include "wave3/rawexpr.hpp"

#include "wave3/errors.hpp"
#include "wave3/model.hpp"

namespace wave3 {

RawExpr RawExpr::lit(RatExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::leaf;
  n->value = std::move(e);
  return RawExpr(std::move(n));
}

RawExpr RawExpr::binary(Kind k, const RawExpr& a, const RawExpr& b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = a.node_;
  n->b = b.node_;
  return RawExpr(std::move(n));
}

RawExpr RawExpr::Dt(RawExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dt;
  n->a = e.node_;
  return RawExpr(std::move(n));
}

RawExpr RawExpr::Dx(RawExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dx;
  n->a = e.node_;
  return RawExpr(std::move(n));
}

RawExpr RawExpr::operator+(const RawExpr& o) const { return binary(Kind::add, *this, o); }
RawExpr RawExpr::operator-(const RawExpr& o) const { return binary(Kind::sub, *this, o); }
RawExpr RawExpr::operator*(const RawExpr& o) const { return binary(Kind::mul, *this, o); }
RawExpr RawExpr::operator/(const RawExpr& o) const { return binary(Kind::div, *this, o); }

bool RawExpr::node_has_dt(const Node& n) {
  if (n.kind == Kind::dt) return true;
  if (n.a && node_has_dt(*n.a)) return true;
  if (n.b && node_has_dt(*n.b)) return true;
  return false;
}

bool RawExpr::has_time_derivative() const { return node_has_dt(*node_); }

RatExpr RawExpr::reduce_node(const Node& n, const EvolutionSystem& sys) {
  switch (n.kind) {
    case Kind::leaf: return n.value;
    case Kind::add: return reduce_node(*n.a, sys) + reduce_node(*n.b, sys);
    case Kind::sub: return reduce_node(*n.a, sys) - reduce_node(*n.b, sys);
    case Kind::mul: return reduce_node(*n.a, sys) * reduce_node(*n.b, sys);
    case Kind::div: return reduce_node(*n.a, sys) / reduce_node(*n.b, sys);
    case Kind::dx: return total_x_derivative(reduce_node(*n.a, sys));
    case Kind::dt: return evolution_derivative(reduce_node(*n.a, sys), sys);
  }
  fail(Errc::config_error, "bad raw expression node");
}

RatExpr RawExpr::reduce(const EvolutionSystem& sys) const { return reduce_node(*node_, sys); }

}  // namespace wave3
