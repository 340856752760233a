#include "wave3/model.hpp"

#include <iostream>
#include <map>

#include "wave3/errors.hpp"

namespace wave3 {

namespace {

RatExpr V(Field f, int k = 0) { return RatExpr::var(JetVar{f, static_cast<uint16_t>(k)}); }

RatExpr half() { return RatExpr(Rational(1, 2)); }

}  // namespace

EvolutionSystem base_system() {
  using enum Field;
  EvolutionSystem sys;
  sys.rhs(p10) = -V(p10, 1) + V(p11) * V(m01);
  sys.rhs(m10) = -V(m10, 1) + V(m11) * V(p01);
  sys.rhs(p01) = V(p01, 1) + V(p11) * V(m10);
  sys.rhs(m01) = V(m01, 1) + V(m11) * V(p10);
  sys.rhs(p11) = -(half() * V(p01) * V(p10));
  sys.rhs(m11) = -(half() * V(m01) * V(m10));
  return sys;
}

FieldMap Substitution::as_map() const {
  FieldMap m;
  for (Field f : all_fields()) m.emplace(f, image(f));
  return m;
}

bool Substitution::denominators_monomial() const {
  for (Field f : all_fields())
    if (!image(f).den_monomial()) return false;
  return true;
}

Substitution Substitution::identity() {
  Substitution s;
  for (Field f : all_fields()) s.image(f) = RatExpr::field(f);
  s.provenance = "identity";
  return s;
}

std::array<RawExpr, 6> raw_transformation(int i) {
  using enum Field;
  using R = RawExpr;
  std::array<RawExpr, 6> img;
  auto at = [&img](Field f) -> RawExpr& { return img[static_cast<int>(f)]; };
  switch (i) {
    case 1:
      at(p10) = R::lit(RatExpr(1) / V(m10));
      at(m01) = R::lit(V(m11) / V(m10));
      at(p11) = R::lit(-(V(p01) / V(m10)));
      at(p01) = R::field(m10) * R::D11(R::lit(V(p01) / V(m10)));
      at(m11) = R::field(m10) * R::D01(R::lit(V(m11) / V(m10)));
      at(m10) = R::field(m10) *
                (R::lit(V(p10) * V(m10)) + R::D01(R::D11_log(R::field(m10))));
      break;
    case 2:
      at(p01) = R::lit(RatExpr(1) / V(m01));
      at(m10) = R::lit(-(V(m11) / V(m01)));
      at(p11) = R::lit(V(p10) / V(m01));
      at(p10) = R::lit(-V(m01)) * R::D11(R::lit(V(p10) / V(m01)));
      at(m11) = R::lit(-V(m01)) * R::D10(R::lit(V(m11) / V(m01)));
      at(m01) = R::field(m01) *
                (R::lit(V(p01) * V(m01)) + R::D10(R::D11_log(R::field(m01))));
      break;
    case 3:
      at(p11) = R::lit(RatExpr(1) / V(m11));
      at(p10) = R::lit(-(V(m01) / V(m11)));
      at(p01) = R::lit(V(m10) / V(m11));
      at(m01) = R::lit(-V(m11)) * R::D10(R::lit(V(m01) / V(m11)));
      at(m10) = R::field(m11) * R::D01(R::lit(V(m10) / V(m11)));
      at(m11) = R::field(m11) *
                (R::lit(V(p11) * V(m11)) - R::D10(R::D01_log(R::field(m11))));
      break;
    default: fail(Errc::config_error, "transformation index must be 1, 2 or 3");
  }
  return img;
}

RatExpr on_shell_reduce(const RawExpr& e, const EvolutionSystem& sys) { return e.reduce(sys); }

namespace {

Substitution build_transformation(int i) {
  EvolutionSystem sys = base_system();
  auto raw = raw_transformation(i);
  Substitution s;
  for (Field f : all_fields()) s.image(f) = on_shell_reduce(raw[static_cast<int>(f)], sys);
  s.provenance = "T" + std::to_string(i) + " on-shell against base system";
  if (!s.denominators_monomial())
    std::cerr << "warning: non-monomial denominator in transformation T" << i << "\n";
  return s;
}

}  // namespace

const Substitution& transformation(int i) {
  static const Substitution t1 = build_transformation(1);
  static const Substitution t2 = build_transformation(2);
  static const Substitution t3 = build_transformation(3);
  switch (i) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    default: fail(Errc::config_error, "transformation index must be 1, 2 or 3");
  }
}

RatExpr evolution_derivative(const RatExpr& e, const EvolutionSystem& sys) {
  std::map<JetVar, RatExpr> rhs_prolonged;
  auto rhs_k = [&](JetVar v) -> const RatExpr& {
    for (uint16_t k = 0; k <= v.order; ++k) {
      JetVar key{v.field, k};
      if (rhs_prolonged.count(key)) continue;
      if (k == 0)
        rhs_prolonged.emplace(key, sys.rhs(v.field));
      else
        rhs_prolonged.emplace(
            key, total_x_derivative(rhs_prolonged.at(JetVar{v.field, static_cast<uint16_t>(k - 1)})));
    }
    return rhs_prolonged.at(v);
  };
  RatExpr acc;
  for (JetVar v : e.jet_vars()) {
    RatExpr d = partial_derivative(e, v);
    if (d.is_zero()) continue;
    acc = acc + d * rhs_k(v);
  }
  return acc;
}

std::array<RatExpr, 6> FrechetOperator::apply(const std::array<RatExpr, 6>& vec) const {
  std::array<RatExpr, 6> out;
  for (int i = 0; i < kNumFields; ++i) {
    RatExpr acc;
    for (int j = 0; j < kNumFields; ++j)
      for (const auto& [coeff, k] : entries[i][j].terms)
        acc = acc + coeff * total_x_derivative(vec[j], k);
    out[i] = acc;
  }
  return out;
}

namespace {

FrechetOperator frechet_of(const std::array<RatExpr, 6>& components) {
  FrechetOperator op;
  for (int i = 0; i < kNumFields; ++i) {
    for (JetVar v : components[i].jet_vars()) {
      RatExpr coeff = partial_derivative(components[i], v);
      if (coeff.is_zero()) continue;
      op.entries[i][static_cast<int>(v.field)].terms.emplace_back(std::move(coeff), v.order);
    }
    for (auto& row : op.entries[i])
      std::sort(row.terms.begin(), row.terms.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
  }
  return op;
}

}  // namespace

FrechetOperator frechet(const Substitution& s) { return frechet_of(s.images); }
FrechetOperator frechet(const EvolutionSystem& sys) { return frechet_of(sys.rhs_by_field); }

std::array<RatExpr, 6> symmetry_residual(const EvolutionSystem& flow, const Substitution& t) {
  FieldMap images = t.as_map();
  std::array<RatExpr, 6> res;
  for (Field g : all_fields()) {
    RatExpr lhs = evolution_derivative(t.image(g), flow);
    RatExpr rhs = substitute_fields(flow.rhs(g), images);
    res[static_cast<int>(g)] = lhs - rhs;
  }
  return res;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  FieldMap inner_map = inner.as_map();
  Substitution s;
  for (Field f : all_fields()) s.image(f) = substitute_fields(outer.image(f), inner_map);
  s.provenance = "(" + outer.provenance + ") o (" + inner.provenance + ")";
  if (!s.denominators_monomial())
    std::cerr << "warning: non-monomial denominator after composition " << s.provenance << "\n";
  return s;
}

namespace {

// Solves  image_expr(old fields) == value of `line` field  for the order-0
// variable of `unknown`, then rewrites the old fields via `known`.
RatExpr solve_linear_step(const RatExpr& image_expr, Field line, Field unknown,
                          const FieldMap& known) {
  JetVar u{unknown, 0};
  RatExpr coef = partial_derivative(image_expr, u);
  if (coef.is_zero() || coef.depends_on(u))
    fail(Errc::derivation_failed,
         std::string("image of ") + std::string(field_name(line)) + " is not linear in " +
             std::string(field_name(unknown)));
  RatExpr rest = image_expr - coef * RatExpr::var(u);
  if (rest.depends_on(u))
    fail(Errc::derivation_failed,
         std::string("residual still depends on ") + std::string(field_name(unknown)));
  RatExpr rest_new = substitute_fields(rest, known);
  RatExpr coef_new = substitute_fields(coef, known);
  return (RatExpr::field(line) - rest_new) / coef_new;
}

Substitution build_inverse(int i) {
  using enum Field;
  const Substitution& t = transformation(i);
  FieldMap known;
  struct Step {
    Field line, unknown;
  };
  std::vector<Step> steps;
  switch (i) {
    case 1:
      known.emplace(m10, RatExpr(1) / RatExpr::field(p10));
      steps = {{m01, m11}, {p11, p01}, {p01, p11}, {m11, m01}, {m10, p10}};
      break;
    case 2:
      known.emplace(m01, RatExpr(1) / RatExpr::field(p01));
      steps = {{m10, m11}, {p11, p10}, {p10, p11}, {m11, m10}, {m01, p01}};
      break;
    case 3:
      known.emplace(m11, RatExpr(1) / RatExpr::field(p11));
      steps = {{p10, m01}, {p01, m10}, {m01, p10}, {m10, p01}, {m11, p11}};
      break;
    default: fail(Errc::config_error, "transformation index must be 1, 2 or 3");
  }
  for (const Step& st : steps)
    known.emplace(st.unknown, solve_linear_step(t.image(st.line), st.line, st.unknown, known));
  Substitution s;
  for (Field f : all_fields()) s.image(f) = known.at(f);
  s.provenance = "inverse of T" + std::to_string(i);
  return s;
}

}  // namespace

const Substitution& inverse_transformation(int i) {
  static const Substitution s1 = build_inverse(1);
  static const Substitution s2 = build_inverse(2);
  static const Substitution s3 = build_inverse(3);
  switch (i) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: fail(Errc::config_error, "transformation index must be 1, 2 or 3");
  }
}

RatExpr delta(const RatExpr& e, int i) {
  return substitute_fields(e, transformation(i).as_map()) - e;
}

}  // namespace wave3
