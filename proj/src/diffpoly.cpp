#include "wave3/diffpoly.hpp"

#include <algorithm>
#include <sstream>

#include "wave3/errors.hpp"

namespace wave3 {

Monomial Monomial::var(JetVar v, uint32_t exp) {
  Monomial m;
  if (exp > 0) m.vars_.emplace_back(v, exp);
  return m;
}

uint32_t Monomial::exponent(JetVar v) const {
  for (const auto& [jv, e] : vars_)
    if (jv == v) return e;
  return 0;
}

int Monomial::max_order() const {
  int o = 0;
  for (const auto& [jv, e] : vars_) o = std::max(o, static_cast<int>(jv.order));
  return o;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& [jv, e] : vars_) d += static_cast<int>(e);
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial out;
  out.vars_.reserve(vars_.size() + o.vars_.size());
  size_t i = 0, j = 0;
  while (i < vars_.size() && j < o.vars_.size()) {
    if (vars_[i].first == o.vars_[j].first) {
      out.vars_.emplace_back(vars_[i].first, vars_[i].second + o.vars_[j].second);
      ++i, ++j;
    } else if (vars_[i].first < o.vars_[j].first) {
      out.vars_.push_back(vars_[i++]);
    } else {
      out.vars_.push_back(o.vars_[j++]);
    }
  }
  for (; i < vars_.size(); ++i) out.vars_.push_back(vars_[i]);
  for (; j < o.vars_.size(); ++j) out.vars_.push_back(o.vars_[j]);
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  size_t i = 0, j = 0;
  while (i < a.vars_.size() && j < b.vars_.size()) {
    if (a.vars_[i].first == b.vars_[j].first) {
      out.vars_.emplace_back(a.vars_[i].first, std::min(a.vars_[i].second, b.vars_[j].second));
      ++i, ++j;
    } else if (a.vars_[i].first < b.vars_[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

bool Monomial::divisible_by(const Monomial& o) const {
  for (const auto& [jv, e] : o.vars_)
    if (exponent(jv) < e) return false;
  return true;
}

Monomial Monomial::divided_by(const Monomial& o) const {
  Monomial out;
  for (const auto& [jv, e] : vars_) {
    uint32_t sub = o.exponent(jv);
    if (e > sub) out.vars_.emplace_back(jv, e - sub);
  }
  return out;
}

DiffPoly::DiffPoly(const ParamPoly& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

DiffPoly DiffPoly::var(JetVar v) {
  DiffPoly p;
  p.terms_.emplace(Monomial::var(v), ParamPoly(Rational(1)));
  return p;
}

DiffPoly DiffPoly::term(const Monomial& m, const ParamPoly& c) {
  DiffPoly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

bool DiffPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second.is_one();
}

std::optional<ParamPoly> DiffPoly::as_coefficient() const {
  if (terms_.empty()) return ParamPoly();
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

std::optional<std::pair<Monomial, ParamPoly>> DiffPoly::as_single_term() const {
  if (terms_.size() != 1) return std::nullopt;
  return std::make_pair(terms_.begin()->first, terms_.begin()->second);
}

void DiffPoly::add_term(const Monomial& m, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
  DiffPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
  DiffPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
  DiffPoly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
  return r;
}

DiffPoly DiffPoly::scaled(const ParamPoly& c) const {
  DiffPoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, pc] : terms_) r.add_term(m, pc * c);
  return r;
}

std::strong_ordering DiffPoly::operator<=>(const DiffPoly& o) const {
  auto a = terms_.begin(), b = o.terms_.begin();
  for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
    if (auto c = a->first <=> b->first; c != 0) return c;
    if (auto c = a->second <=> b->second; c != 0) return c;
  }
  if (a != terms_.end()) return std::strong_ordering::greater;
  if (b != o.terms_.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

DiffPoly DiffPoly::derivative() const {
  DiffPoly r;
  for (const auto& [mono, coeff] : terms_) {
    for (const auto& [jv, e] : mono.vars()) {
      Monomial rest = mono.divided_by(Monomial::var(jv));
      Monomial raised_mono = rest.times(Monomial::var(raised(jv)));
      r.add_term(raised_mono, coeff.scaled(Rational(e)));
    }
  }
  return r;
}

DiffPoly DiffPoly::partial(JetVar v) const {
  DiffPoly r;
  for (const auto& [mono, coeff] : terms_) {
    uint32_t e = mono.exponent(v);
    if (e == 0) continue;
    r.add_term(mono.divided_by(Monomial::var(v)), coeff.scaled(Rational(e)));
  }
  return r;
}

Monomial DiffPoly::content() const {
  if (terms_.empty()) return Monomial{};
  auto it = terms_.begin();
  Monomial g = it->first;
  for (++it; it != terms_.end(); ++it) {
    g = Monomial::gcd(g, it->first);
    if (g.is_one()) break;
  }
  return g;
}

DiffPoly DiffPoly::divided_by_monomial(const Monomial& m) const {
  DiffPoly r;
  for (const auto& [mono, coeff] : terms_) r.terms_.emplace(mono.divided_by(m), coeff);
  return r;
}

int DiffPoly::max_order() const {
  int o = 0;
  for (const auto& [mono, c] : terms_) o = std::max(o, mono.max_order());
  return o;
}

int DiffPoly::max_order(Field f) const {
  int o = -1;
  for (const auto& [mono, c] : terms_)
    for (const auto& [jv, e] : mono.vars())
      if (jv.field == f) o = std::max(o, static_cast<int>(jv.order));
  return o;
}

std::set<JetVar> DiffPoly::jet_vars() const {
  std::set<JetVar> out;
  for (const auto& [mono, c] : terms_)
    for (const auto& [jv, e] : mono.vars()) out.insert(jv);
  return out;
}

bool DiffPoly::depends_on(JetVar v) const {
  for (const auto& [mono, c] : terms_)
    if (mono.exponent(v) > 0) return true;
  return false;
}

int DiffPoly::total_degree() const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.total_degree());
  return d;
}

DiffPoly DiffPoly::substituted_params(const std::map<uint32_t, ParamPoly>& images) const {
  DiffPoly r;
  for (const auto& [mono, coeff] : terms_) r.add_term(mono, coeff.substituted(images));
  return r;
}

std::string DiffPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, coeff] : terms_) {
    ParamPoly c = coeff;
    auto rat = c.as_rational();
    bool negated = false;
    if (!first) {
      // render "a - b" when the whole coefficient is a negative rational
      if (rat && *rat < 0) {
        os << " - ";
        c = c.scaled(Rational(-1));
        rat = c.as_rational();
        negated = true;
      } else {
        os << " + ";
      }
    }
    (void)negated;
    std::string cs;
    bool need_coeff = true;
    if (rat) {
      if (*rat == 1 && !mono.is_one())
        need_coeff = false;
      else if (*rat == -1 && !mono.is_one())
        cs = "-1";  // leading term; grammar has no unary minus
      else
        cs = to_string(*rat);
    } else if (c.terms().size() == 1) {
      cs = c.str();
    } else {
      cs = "(" + c.str() + ")";
    }
    if (need_coeff) os << cs;
    bool firstvar = !need_coeff;
    for (const auto& [jv, e] : mono.vars()) {
      if (!firstvar || need_coeff) os << "*";
      os << jetvar_name(jv);
      if (e > 1) os << "^" << e;
      firstvar = false;
    }
    first = false;
  }
  return os.str();
}

}  // namespace wave3
