#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wave3/errors.hpp"

namespace wave3 {

// The six fields in the fixed order (f+11, f+10, f+01, f-01, f-10, f-11).
enum class Field : uint8_t { p11 = 0, p10 = 1, p01 = 2, m01 = 3, m10 = 4, m11 = 5 };

inline constexpr int kNumFields = 6;

inline constexpr std::array<Field, 6> all_fields() {
  return {Field::p11, Field::p10, Field::p01, Field::m01, Field::m10, Field::m11};
}

inline constexpr std::string_view field_name(Field f) {
  constexpr std::string_view names[6] = {"p11", "p10", "p01", "m01", "m10", "m11"};
  return names[static_cast<int>(f)];
}

std::optional<Field> field_from_name(std::string_view name);

// Maximum jet order admitted by total derivatives / prolongation. Settable
// once at startup (config); symbolic code only reads it.
class JetLimits {
 public:
  static int max_order() { return limit_.load(std::memory_order_relaxed); }
  static void set_max_order(int n) { limit_.store(n, std::memory_order_relaxed); }

 private:
  inline static std::atomic<int> limit_{12};
};

// A field or one of its spatial derivatives, treated as an independent symbol.
struct JetVar {
  Field field;
  uint16_t order = 0;

  friend auto operator<=>(const JetVar&, const JetVar&) = default;
};

inline JetVar raised(JetVar v) {
  if (v.order + 1 > JetLimits::max_order())
    fail(Errc::jet_order_overflow, std::string(field_name(v.field)) + " beyond order " +
                                       std::to_string(JetLimits::max_order()));
  return JetVar{v.field, static_cast<uint16_t>(v.order + 1)};
}

// "p10", "p10'", "p10''", "p10'''", then "d(p10,4)".
std::string jetvar_name(JetVar v);

}  // namespace wave3
