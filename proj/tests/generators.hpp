#pragma once

// Deterministic expression generators for the property-style suites.

#include <cstdint>

#include "wave3/ratexpr.hpp"

namespace wave3::testgen {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}

  uint64_t next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

 private:
  uint64_t state_;
};

inline JetVar random_jetvar(Rng& rng, int max_order = 2) {
  Field f = all_fields()[static_cast<size_t>(rng.range(0, 5))];
  return JetVar{f, static_cast<uint16_t>(rng.range(0, max_order))};
}

inline DiffPoly random_poly(Rng& rng, bool with_params = false) {
  DiffPoly p;
  int terms = rng.range(1, 3);
  for (int t = 0; t < terms; ++t) {
    Monomial mono;
    int nvars = rng.range(0, 2);
    for (int v = 0; v < nvars; ++v)
      mono = mono.times(Monomial::var(random_jetvar(rng), static_cast<uint32_t>(rng.range(1, 2))));
    Rational coeff(rng.range(-3, 3), rng.range(1, 3));
    if (coeff == 0) coeff = 1;
    ParamPoly c(coeff);
    if (with_params && rng.range(0, 2) == 0)
      c = c * ParamPoly::symbol(rng.range(0, 1) == 0 ? "b" : "c");
    p += DiffPoly::term(mono, c);
  }
  return p;
}

// Rational expression whose denominator is a power of m11, so random field
// images of the form 1 + (...) keep it well defined.
inline RatExpr random_ratexpr(Rng& rng, bool with_params = false) {
  RatExpr num(random_poly(rng, with_params));
  int dpow = rng.range(0, 2);
  if (dpow == 0) return num;
  return num / RatExpr::var(JetVar{Field::m11, 0}).pow(dpow);
}

// Field map with unit constant part; denominators built from m11 stay nonzero.
inline FieldMap random_images(Rng& rng) {
  FieldMap images;
  for (Field f : all_fields()) {
    DiffPoly p(Rational(1));
    int terms = rng.range(0, 2);
    for (int t = 0; t < terms; ++t) {
      Monomial mono = Monomial::var(random_jetvar(rng, 1));
      Rational coeff(rng.range(-2, 2));
      if (coeff == 0) coeff = 1;
      p += DiffPoly::term(mono, ParamPoly(coeff));
    }
    images.emplace(f, RatExpr(p));
  }
  return images;
}

}  // namespace wave3::testgen
