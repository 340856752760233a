#include "wave3/ratexpr.hpp"

#include <algorithm>
#include <sstream>

#include "wave3/errors.hpp"

namespace wave3 {

RatExpr::RatExpr(const DiffPoly& num) : num_(num) {}

RatExpr RatExpr::quotient(DiffPoly num, DiffPoly den) {
  if (den.is_zero()) fail(Errc::division_by_zero_expr, "zero denominator");
  RatExpr r(num);
  r.den_.push_back(DenFactor{std::move(den), 1});
  r.normalize();
  return r;
}

DiffPoly RatExpr::den_expanded() const {
  DiffPoly d(Rational(1));
  for (const auto& f : den_)
    for (uint32_t k = 0; k < f.exp; ++k) d = d * f.base;
  return d;
}

bool RatExpr::den_monomial() const {
  for (const auto& f : den_) {
    auto single = f.base.as_single_term();
    if (!single || !single->second.as_rational()) return false;
  }
  return true;
}

std::optional<ParamPoly> RatExpr::as_coefficient() const {
  if (!den_.empty()) return std::nullopt;
  return num_.as_coefficient();
}

void RatExpr::normalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  // Split single-term factors into jet-variable powers; fold rational
  // constants into the numerator.
  std::vector<DenFactor> work;
  for (auto& f : den_) {
    if (f.exp == 0) continue;
    if (f.base.is_zero()) fail(Errc::division_by_zero_expr, "zero denominator factor");
    auto single = f.base.as_single_term();
    if (single) {
      auto& [mono, coeff] = *single;
      auto rat = coeff.as_rational();
      if (rat) {
        Rational scale(1);
        for (uint32_t k = 0; k < f.exp; ++k) scale /= *rat;
        num_ = num_.scaled(scale);
        for (const auto& [jv, e] : mono.vars())
          work.push_back(DenFactor{DiffPoly::var(jv), e * f.exp});
        continue;
      }
      // ParamPoly coefficient we cannot divide out: keep the jet part split,
      // retain the coefficient as its own factor.
      if (!mono.is_one()) {
        for (const auto& [jv, e] : mono.vars())
          work.push_back(DenFactor{DiffPoly::var(jv), e * f.exp});
        work.push_back(DenFactor{DiffPoly(coeff), f.exp});
        continue;
      }
    }
    work.push_back(std::move(f));
  }
  // Merge syntactically equal factors.
  std::sort(work.begin(), work.end(),
            [](const DenFactor& a, const DenFactor& b) { return a.base < b.base; });
  den_.clear();
  for (auto& f : work) {
    if (!den_.empty() && den_.back().base == f.base)
      den_.back().exp += f.exp;
    else
      den_.push_back(std::move(f));
  }
  // Cancel monomial content between numerator and single-variable factors.
  Monomial cont = num_.content();
  if (!cont.is_one()) {
    Monomial cancel;
    for (auto& f : den_) {
      auto single = f.base.as_single_term();
      if (!single || single->first.total_degree() != 1) continue;
      JetVar v = single->first.vars()[0].first;
      uint32_t have = cont.exponent(v);
      uint32_t use = std::min(have, f.exp);
      if (use > 0) {
        cancel = cancel.times(Monomial::var(v, use));
        f.exp -= use;
      }
    }
    if (!cancel.is_one()) {
      num_ = num_.divided_by_monomial(cancel);
      den_.erase(std::remove_if(den_.begin(), den_.end(),
                                [](const DenFactor& f) { return f.exp == 0; }),
                 den_.end());
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(),
                            [](const DenFactor& f) { return f.base.is_one(); }),
             den_.end());
}

RatExpr RatExpr::operator-() const {
  RatExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

// Union with per-factor max exponents; returns for each side the cofactor
// polynomial it must be multiplied by.
struct CommonDen {
  std::vector<DenFactor> den;
  DiffPoly left_cof, right_cof;
};

CommonDen common_denominator(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  CommonDen out;
  out.left_cof = DiffPoly(Rational(1));
  out.right_cof = DiffPoly(Rational(1));
  size_t i = 0, j = 0;
  auto mul_pow = [](DiffPoly& acc, const DiffPoly& base, uint32_t e) {
    for (uint32_t k = 0; k < e; ++k) acc = acc * base;
  };
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].base < b[j].base)) {
      out.den.push_back(a[i]);
      mul_pow(out.right_cof, a[i].base, a[i].exp);
      ++i;
    } else if (i >= a.size() || b[j].base < a[i].base) {
      out.den.push_back(b[j]);
      mul_pow(out.left_cof, b[j].base, b[j].exp);
      ++j;
    } else {
      uint32_t m = std::max(a[i].exp, b[j].exp);
      out.den.push_back(DenFactor{a[i].base, m});
      mul_pow(out.left_cof, a[i].base, m - a[i].exp);
      mul_pow(out.right_cof, b[j].base, m - b[j].exp);
      ++i, ++j;
    }
  }
  return out;
}

}  // namespace

RatExpr RatExpr::operator+(const RatExpr& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  CommonDen cd = common_denominator(den_, o.den_);
  RatExpr r;
  r.num_ = num_ * cd.left_cof + o.num_ * cd.right_cof;
  r.den_ = std::move(cd.den);
  r.normalize();
  return r;
}

RatExpr RatExpr::operator-(const RatExpr& o) const { return *this + (-o); }

RatExpr RatExpr::operator*(const RatExpr& o) const {
  RatExpr r;
  r.num_ = num_ * o.num_;
  r.den_ = den_;
  r.den_.insert(r.den_.end(), o.den_.begin(), o.den_.end());
  r.normalize();
  return r;
}

RatExpr RatExpr::operator/(const RatExpr& o) const {
  if (o.is_zero()) fail(Errc::division_by_zero_expr, "division by zero expression");
  RatExpr r;
  r.num_ = num_ * o.den_expanded();
  r.den_ = den_;
  r.den_.push_back(DenFactor{o.num_, 1});
  r.normalize();
  return r;
}

RatExpr RatExpr::pow(int e) const {
  if (e == 0) return RatExpr(Rational(1));
  const bool invert = e < 0;
  uint32_t k = static_cast<uint32_t>(invert ? -static_cast<long>(e) : e);
  RatExpr base = *this;
  if (invert) base = RatExpr(Rational(1)) / base;
  RatExpr r;
  r.num_ = DiffPoly(Rational(1));
  for (uint32_t i = 0; i < k; ++i) r.num_ = r.num_ * base.num_;
  for (const auto& f : base.den_) r.den_.push_back(DenFactor{f.base, f.exp * k});
  r.normalize();
  return r;
}

bool RatExpr::equals(const RatExpr& o) const { return (*this - o).is_zero(); }

int RatExpr::max_order() const {
  int m = num_.max_order();
  for (const auto& f : den_) m = std::max(m, f.base.max_order());
  return m;
}

int RatExpr::max_order(Field f) const {
  int m = num_.max_order(f);
  for (const auto& d : den_) m = std::max(m, d.base.max_order(f));
  return m;
}

std::set<JetVar> RatExpr::jet_vars() const {
  std::set<JetVar> out = num_.jet_vars();
  for (const auto& f : den_) {
    auto more = f.base.jet_vars();
    out.insert(more.begin(), more.end());
  }
  return out;
}

bool RatExpr::depends_on(JetVar v) const {
  if (num_.depends_on(v)) return true;
  for (const auto& f : den_)
    if (f.base.depends_on(v)) return true;
  return false;
}

RatExpr RatExpr::substituted_params(const std::map<uint32_t, ParamPoly>& images) const {
  RatExpr r;
  r.num_ = num_.substituted_params(images);
  for (const auto& f : den_) {
    DiffPoly base = f.base.substituted_params(images);
    if (base.is_zero()) fail(Errc::division_by_zero_expr, "parameter substitution zeroed a denominator");
    r.den_.push_back(DenFactor{std::move(base), f.exp});
  }
  r.normalize();
  return r;
}

std::string RatExpr::str() const {
  std::string n = num_.str();
  if (den_.empty()) return n;
  std::ostringstream os;
  if (num_.term_count() > 1)
    os << "(" << n << ")";
  else
    os << n;
  for (const auto& f : den_) {
    os << "/";
    auto single = f.base.as_single_term();
    bool plain_var = single && single->second.is_one() && single->first.total_degree() == 1;
    if (plain_var) {
      os << jetvar_name(single->first.vars()[0].first);
    } else {
      os << "(" << f.base.str() << ")";
    }
    if (f.exp > 1) os << "^" << f.exp;
  }
  return os.str();
}

RatExpr arith(const RatExpr& lhs, const RatExpr& rhs, ArithKind kind, int pow_exp) {
  switch (kind) {
    case ArithKind::add: return lhs + rhs;
    case ArithKind::sub: return lhs - rhs;
    case ArithKind::mul: return lhs * rhs;
    case ArithKind::div: return lhs / rhs;
    case ArithKind::pow: return lhs.pow(pow_exp);
  }
  fail(Errc::config_error, "bad arith kind");
}

RatExpr total_x_derivative(const RatExpr& e, int times) {
  RatExpr cur = e;
  for (int t = 0; t < times; ++t) {
    RatExpr acc(cur.num().derivative());
    for (const auto& f : cur.den()) acc = acc / RatExpr(f.base).pow(static_cast<int>(f.exp));
    for (const auto& f : cur.den()) {
      DiffPoly dbase = f.base.derivative();
      if (dbase.is_zero()) continue;
      // quotient rule: - exp * num * d(base) / (den * base)
      RatExpr term(cur.num() * dbase);
      for (const auto& g : cur.den()) term = term / RatExpr(g.base).pow(static_cast<int>(g.exp));
      term = term / RatExpr(f.base);
      acc = acc - term * RatExpr(Rational(f.exp));
    }
    cur = acc;
  }
  return cur;
}

RatExpr partial_derivative(const RatExpr& e, JetVar v) {
  RatExpr acc;
  {
    RatExpr dn(e.num().partial(v));
    for (const auto& f : e.den()) dn = dn / RatExpr(f.base).pow(static_cast<int>(f.exp));
    acc = dn;
  }
  for (const auto& f : e.den()) {
    DiffPoly dbase = f.base.partial(v);
    if (dbase.is_zero()) continue;
    RatExpr term = RatExpr(e.num()) * RatExpr(dbase);
    for (const auto& g : e.den()) term = term / RatExpr(g.base).pow(static_cast<int>(g.exp));
    term = term / RatExpr(f.base);
    acc = acc - term * RatExpr(Rational(f.exp));
  }
  return acc;
}

RatExpr substitute_fields(const RatExpr& e, const FieldMap& images) {
  std::set<JetVar> vars = e.jet_vars();
  std::map<JetVar, RatExpr> prolonged;
  for (JetVar v : vars) {
    auto it = images.find(v.field);
    if (it == images.end())
      fail(Errc::missing_field_image, std::string(field_name(v.field)) + " has no image");
    // build D^k images incrementally, sharing work across orders
    for (uint16_t k = 0; k <= v.order; ++k) {
      JetVar key{v.field, k};
      if (prolonged.count(key)) continue;
      if (k == 0)
        prolonged.emplace(key, it->second);
      else
        prolonged.emplace(
            key, total_x_derivative(prolonged.at(JetVar{v.field, static_cast<uint16_t>(k - 1)})));
    }
  }
  auto eval_poly = [&](const DiffPoly& p) {
    RatExpr acc;
    for (const auto& [mono, coeff] : p.terms()) {
      RatExpr term{DiffPoly(coeff)};
      for (const auto& [jv, exp] : mono.vars())
        term = term * prolonged.at(jv).pow(static_cast<int>(exp));
      acc = acc + term;
    }
    return acc;
  };
  RatExpr out = eval_poly(e.num());
  for (const auto& f : e.den()) {
    RatExpr img = eval_poly(f.base);
    if (img.is_zero())
      fail(Errc::division_by_zero_expr, "substitution zeroed a denominator factor");
    out = out / img.pow(static_cast<int>(f.exp));
  }
  return out;
}

bool is_zero(const RatExpr& e) { return e.is_zero(); }

RatExpr euler_operator(const RatExpr& e, Field f) {
  int top = e.max_order(f);
  RatExpr acc;
  for (int k = 0; k <= top; ++k) {
    RatExpr d = partial_derivative(e, JetVar{f, static_cast<uint16_t>(k)});
    if (d.is_zero()) continue;
    d = total_x_derivative(d, k);
    acc = (k % 2 == 0) ? acc + d : acc - d;
  }
  return acc;
}

bool is_total_x_derivative(const RatExpr& e) {
  for (Field f : all_fields())
    if (!euler_operator(e, f).is_zero()) return false;
  return true;
}

namespace {

// Integrates a polynomial with respect to one jet variable.
DiffPoly integrate_in_var(const DiffPoly& p, JetVar v) {
  DiffPoly out;
  for (const auto& [mono, coeff] : p.terms()) {
    uint32_t e = mono.exponent(v);
    Monomial m = mono.times(Monomial::var(v));
    out += DiffPoly::term(m, coeff.scaled(Rational(1, e + 1)));
  }
  return out;
}

DiffPoly drop_terms_with(const DiffPoly& p, const std::vector<JetVar>& vars) {
  DiffPoly out;
  for (const auto& [mono, coeff] : p.terms()) {
    bool has = false;
    for (JetVar v : vars)
      if (mono.exponent(v) > 0) { has = true; break; }
    if (!has) out += DiffPoly::term(mono, coeff);
  }
  return out;
}

// Peels one derivative off an exact polynomial; see antiderivative_x.
DiffPoly antiderivative_poly(DiffPoly e) {
  DiffPoly g;
  while (!e.is_zero()) {
    int n = e.max_order();
    if (n == 0) fail(Errc::not_exact, "zeroth-order remainder " + e.str());
    // exact expressions are linear in their top-order variables
    std::vector<JetVar> tops;
    for (Field f : all_fields()) {
      JetVar v{f, static_cast<uint16_t>(n)};
      if (e.depends_on(v)) tops.push_back(v);
    }
    for (const auto& [mono, coeff] : e.terms()) {
      int topdeg = 0;
      for (JetVar v : tops) topdeg += static_cast<int>(mono.exponent(v));
      if (topdeg > 1) fail(Errc::not_exact, "nonlinear in top-order variables: " + e.str());
    }
    // Poincare-style fiber potential over the order n-1 variables.
    DiffPoly g0;
    std::vector<JetVar> seen;
    for (JetVar v : tops) {
      JetVar below{v.field, static_cast<uint16_t>(n - 1)};
      DiffPoly a = e.partial(v);
      a = drop_terms_with(a, seen);
      g0 += integrate_in_var(a, below);
      seen.push_back(below);
    }
    DiffPoly next = e - g0.derivative();
    if (next.max_order() >= n && !next.is_zero())
      fail(Errc::not_exact, "mixed-partial consistency failed at order " + std::to_string(n));
    g += g0;
    e = next;
  }
  return g;
}

}  // namespace

RatExpr antiderivative_x(const RatExpr& e, const std::optional<RatExpr>& candidate) {
  if (candidate) {
    RatExpr diff = total_x_derivative(*candidate) - e;
    if (!diff.is_zero())
      fail(Errc::candidate_mismatch, "D(candidate) - e = " + diff.str());
    return *candidate;
  }
  if (!e.den_trivial())
    fail(Errc::no_constructive_potential, "rational expression requires a candidate");
  return RatExpr(antiderivative_poly(e.num()));
}

std::vector<ParamPoly> collect_parameter_constraints(const RatExpr& e) {
  std::vector<ParamPoly> out;
  std::set<ParamPoly> seen;
  for (const auto& [mono, coeff] : e.num().terms()) {
    ParamPoly c = coeff.primitive_part();
    if (c.is_zero()) continue;
    if (seen.insert(c).second) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wave3
