#pragma once

#include <stdexcept>
#include <string>

namespace wave3 {

enum class Errc {
  division_by_zero_expr,
  jet_order_overflow,
  missing_field_image,
  not_exact,
  no_constructive_potential,
  candidate_mismatch,
  nonlinear_constraint,
  inconsistent,
  syntax_error,
  unknown_identifier,
  derivation_failed,
  nan_detected,
  stability_violation,
  resonant_parameters,
  denominator_underflow,
  config_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::division_by_zero_expr: return "DivisionByZeroExpr";
    case Errc::jet_order_overflow: return "JetOrderOverflow";
    case Errc::missing_field_image: return "MissingFieldImage";
    case Errc::not_exact: return "NotExact";
    case Errc::no_constructive_potential: return "NoConstructivePotential";
    case Errc::candidate_mismatch: return "CandidateMismatch";
    case Errc::nonlinear_constraint: return "NonlinearConstraint";
    case Errc::inconsistent: return "Inconsistent";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_identifier: return "UnknownIdentifier";
    case Errc::derivation_failed: return "DerivationFailed";
    case Errc::nan_detected: return "NaNDetected";
    case Errc::stability_violation: return "StabilityViolation";
    case Errc::resonant_parameters: return "ResonantParameters";
    case Errc::denominator_underflow: return "DenominatorUnderflow";
    case Errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace wave3
