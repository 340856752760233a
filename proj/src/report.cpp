#include "wave3/report.hpp"

#include <json.hpp>

namespace wave3 {

void Report::finalize_status() {
  if (status == "error") return;
  status = "pass";
  for (const auto& c : checks)
    if (!c.ok) status = "fail";
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["command"] = command;
  j["status"] = status;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["ok"] = c.ok;
    if (!c.ok) jc["witness"] = c.witness;
    jc["detail"] = c.detail;
    j["checks"].push_back(std::move(jc));
  }
  if (constraints) {
    nlohmann::ordered_json jc;
    jc["dimension"] = constraints->dimension;
    jc["free_parameters"] = constraints->free_parameters;
    jc["relations"] = constraints->relations;
    j["constraints"] = std::move(jc);
  }
  j["timings_ms"] = timings_ms;
  return j.dump(2) + "\n";
}

int Report::exit_code() const {
  if (status == "pass") return 0;
  if (status == "fail") return 1;
  return 2;
}

std::string clip_witness(const std::string& s, size_t limit) {
  if (s.size() <= limit) return s;
  return s.substr(0, limit) + "...";
}

}  // namespace wave3
