#include "wave3/params.hpp"

#include <algorithm>
#include <sstream>

#include "wave3/errors.hpp"
#include "wave3/jet.hpp"

namespace wave3 {

bool parse_rational(const std::string& text, Rational& out) {
  if (text.empty()) return false;
  size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      out = Rational(Integer(text));
      return true;
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty() || den[0] == '-' || den[0] == '+') return false;
    Integer d(den);
    if (d == 0) return false;
    out = Rational(Integer(num), d);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

ParamTable& ParamTable::instance() {
  static ParamTable table;
  return table;
}

uint32_t ParamTable::intern(std::string_view name) {
  if (name.empty()) fail(Errc::config_error, "empty parameter name");
  if (field_from_name(name))
    fail(Errc::config_error, "parameter name collides with field: " + std::string(name));
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  return id;
}

std::optional<uint32_t> ParamTable::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& ParamTable::name(uint32_t id) const { return names_.at(id); }

size_t ParamTable::size() const { return names_.size(); }

ParamSymbol ParamSymbol::named(std::string_view name) {
  return ParamSymbol{ParamTable::instance().intern(name)};
}

const std::string& ParamSymbol::name() const { return ParamTable::instance().name(id); }

std::optional<Field> field_from_name(std::string_view name) {
  for (Field f : all_fields())
    if (field_name(f) == name) return f;
  return std::nullopt;
}

std::string jetvar_name(JetVar v) {
  std::string base(field_name(v.field));
  if (v.order == 0) return base;
  if (v.order <= 3) return base + std::string(v.order, '\'');
  return "d(" + base + "," + std::to_string(v.order) + ")";
}

ParamPoly::ParamPoly(const Rational& r) {
  if (r != 0) terms_.emplace(ParamMonomial{}, r);
}

ParamPoly ParamPoly::symbol(ParamSymbol s) {
  ParamPoly p;
  p.terms_.emplace(ParamMonomial{{s.id, 1}}, Rational(1));
  return p;
}

bool ParamPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1;
}

std::optional<Rational> ParamPoly::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

int ParamPoly::total_degree() const {
  int deg = 0;
  for (const auto& [mono, c] : terms_) {
    int d = 0;
    for (const auto& [id, e] : mono) d += static_cast<int>(e);
    deg = std::max(deg, d);
  }
  return deg;
}

std::optional<LinearForm> ParamPoly::as_linear() const {
  LinearForm lf;
  for (const auto& [mono, c] : terms_) {
    if (mono.empty()) {
      lf.constant = c;
    } else if (mono.size() == 1 && mono[0].second == 1) {
      lf.coeffs[mono[0].first] = c;
    } else {
      return std::nullopt;
    }
  }
  return lf;
}

void ParamPoly::add_term(const ParamMonomial& m, const Rational& c) {
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
  ParamPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const {
  ParamPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

static ParamMonomial mono_mul(const ParamMonomial& a, const ParamMonomial& b) {
  ParamMonomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    } else if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
  ParamPoly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

ParamPoly ParamPoly::scaled(const Rational& s) const {
  ParamPoly r;
  if (s == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
  return r;
}

std::strong_ordering ParamPoly::operator<=>(const ParamPoly& o) const {
  auto a = terms_.begin(), b = o.terms_.begin();
  for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
    if (a->first != b->first) return a->first < b->first ? std::strong_ordering::less
                                                         : std::strong_ordering::greater;
    if (a->second != b->second) return a->second < b->second ? std::strong_ordering::less
                                                             : std::strong_ordering::greater;
  }
  if (a != terms_.end()) return std::strong_ordering::greater;
  if (b != o.terms_.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

ParamPoly ParamPoly::substituted(const std::map<uint32_t, ParamPoly>& images) const {
  ParamPoly out;
  for (const auto& [mono, c] : terms_) {
    ParamPoly term(c);
    for (const auto& [id, exp] : mono) {
      ParamPoly base;
      auto it = images.find(id);
      if (it != images.end())
        base = it->second;
      else
        base = ParamPoly::symbol(ParamSymbol{id});
      for (uint32_t k = 0; k < exp; ++k) term = term * base;
    }
    out += term;
  }
  return out;
}

Rational ParamPoly::evaluated(const std::map<uint32_t, Rational>& values) const {
  Rational out(0);
  for (const auto& [mono, c] : terms_) {
    Rational term = c;
    for (const auto& [id, exp] : mono) {
      auto it = values.find(id);
      if (it == values.end())
        fail(Errc::config_error, "unbound parameter " + ParamTable::instance().name(id));
      for (uint32_t k = 0; k < exp; ++k) term *= it->second;
    }
    out += term;
  }
  return out;
}

ParamPoly ParamPoly::primitive_part() const {
  if (terms_.empty()) return *this;
  Integer num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numerator(c)));
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
  }
  Rational scale(den_lcm, num_gcd == 0 ? Integer(1) : num_gcd);
  // sign convention: first non-constant term positive (constant if none)
  Rational lead = terms_.begin()->second;
  for (const auto& [m, c] : terms_) {
    if (!m.empty()) {
      lead = c;
      break;
    }
  }
  if (lead < 0) scale = -scale;
  return scaled(scale);
}

std::vector<uint32_t> ParamPoly::symbols() const {
  std::vector<uint32_t> ids;
  for (const auto& [mono, c] : terms_)
    for (const auto& [id, e] : mono)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string ParamPoly::str() const {
  if (terms_.empty()) return "0";
  // presentation order: non-constant terms first, constant last
  std::vector<std::pair<ParamMonomial, Rational>> ordered;
  std::optional<std::pair<ParamMonomial, Rational>> constant;
  for (const auto& [mono, c] : terms_) {
    if (mono.empty())
      constant = {mono, c};
    else
      ordered.emplace_back(mono, c);
  }
  if (constant) ordered.push_back(*constant);
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : ordered) {
    Rational mag = first ? c : boost::multiprecision::abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    bool unit = boost::multiprecision::abs(mag) == 1 && !mono.empty();
    if (!unit) {
      os << to_string(mag);
      if (!mono.empty()) os << "*";
    } else if (first && c < 0) {
      os << "-1*";  // stays inside the expression grammar
    }
    bool firstvar = true;
    for (const auto& [id, exp] : mono) {
      if (!firstvar) os << "*";
      os << ParamTable::instance().name(id);
      if (exp > 1) os << "^" << exp;
      firstvar = false;
    }
    first = false;
  }
  return os.str();
}

}  // namespace wave3
