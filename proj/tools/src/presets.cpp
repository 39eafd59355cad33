#include "presets.hpp"

#include <map>

namespace molspin::cli {

namespace {

// Used when a preset subcommand is given no --config.
const std::map<std::string, const char*>& defaults() {
  static const std::map<std::string, const char*> table = {
      {"rabi", R"({
        "spin": {"g": 2.0, "B": "0.1 T"},
        "drive": {"rabi": "50 MHz", "duration": "60 ns"},
        "samples": 300
      })"},
      {"gate", R"({"gate": "cz_switch", "B": "5 T", "rabi": "50 MHz", "samples": 400})"},
      {"qec", R"({"mode": "memory", "T2": "50 us"})"},
      {"trotter", R"({"b": "1 GHz", "J": "1 GHz", "t_final": "1 ns", "steps": 10})"},
      {"grover", R"({"d": 3, "marked": 0, "mode": "pulse"})"},
      {"tunnel", R"({"S": 1, "D": "-1 GHz", "E": "0.05 GHz"})"},
      {"bath-rates", R"({"J_ferro": "-1 GHz", "J_frustrated": "1 GHz", "B": "10 mT", "n_states": 8,
                        "c_self": "1 1/us", "c_cross": "0.5 1/us"})"},
  };
  return table;
}

}  // namespace

std::optional<json> preset_default(const std::string& experiment) {
  const auto it = defaults().find(experiment);
  if (it == defaults().end()) return std::nullopt;
  json doc = json::parse(it->second);
  doc["experiment"] = experiment;
  return doc;
}

}  // namespace molspin::cli
