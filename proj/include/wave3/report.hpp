#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wave3 {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string witness;  // nonzero residual / mismatch evidence when !ok
  std::string detail;
};

struct ConstraintsSection {
  int dimension = 0;
  std::vector<std::string> free_parameters;
  std::vector<std::string> relations;
};

// Machine-readable result of one CLI command. status is "pass" iff every
// check is ok; "error" marks aborted runs (domain or usage failures).
struct Report {
  std::string version = "1";
  std::string command;
  std::string status = "pass";
  std::vector<CheckResult> checks;
  std::optional<ConstraintsSection> constraints;
  long timings_ms = 0;

  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void finalize_status();
  std::string to_json() const;  // keys in declaration order, 2-space indent
  int exit_code() const;        // pass 0, fail 1, error 2
};

// Truncates long expression witnesses for report readability.
std::string clip_witness(const std::string& s, size_t limit = 400);

}  // namespace wave3
