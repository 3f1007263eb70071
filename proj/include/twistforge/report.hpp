#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace twistforge {

/// Outcome of a machine check. residual is the rendered difference, "0" on pass.
struct Report {
  std::string name;
  int order = 0;
  std::string residual = "0";
  bool pass = true;
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json j{{"name", name}, {"order", order}, {"residual", residual}, {"pass", pass}};
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }
};

/// Combined report passes when every part does.
inline Report combine(std::string name, int order, const std::vector<Report>& parts) {
  Report r{std::move(name), order, "0", true, {}};
  for (const auto& p : parts) {
    if (!p.pass) {
      r.pass = false;
      if (r.residual == "0") r.residual = p.name + ": " + p.residual;
    }
    r.notes.push_back(p.name + (p.pass ? ": pass" : ": fail"));
    for (const auto& n : p.notes) r.notes.push_back("  " + n);
  }
  return r;
}

}  // namespace twistforge
