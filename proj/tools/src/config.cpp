#include "config.hpp"

#include <molspin/units.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace molspin::cli {

namespace {

struct UnitInfo {
  Quantity kind;
  double scale;  // multiply to reach the default unit
};

const std::map<std::string, UnitInfo>& unit_table() {
  static const std::map<std::string, UnitInfo> table = {
      {"GHz", {Quantity::energy, 1.0}},
      {"MHz", {Quantity::energy, 1e-3}},
      {"kHz", {Quantity::energy, 1e-6}},
      {"cm-1", {Quantity::energy, units::ghz_per_inverse_cm}},
      {"ns", {Quantity::time, 1.0}},
      {"us", {Quantity::time, 1e3}},
      {"ms", {Quantity::time, 1e6}},
      {"T", {Quantity::field, 1.0}},
      {"mT", {Quantity::field, 1e-3}},
      {"rad", {Quantity::angle, 1.0}},
      {"deg", {Quantity::angle, std::numbers::pi / 180.0}},
      {"pi", {Quantity::angle, std::numbers::pi}},
      {"1/ns", {Quantity::rate, 1.0}},
      {"1/us", {Quantity::rate, 1e-3}},
      {"1/ms", {Quantity::rate, 1e-6}},
      {"A", {Quantity::length, 1.0}},
      {"nm", {Quantity::length, 10.0}},
  };
  return table;
}

const char* default_unit(Quantity q) {
  switch (q) {
    case Quantity::energy: return "GHz";
    case Quantity::time: return "ns";
    case Quantity::field: return "T";
    case Quantity::angle: return "rad";
    case Quantity::rate: return "1/ns";
    case Quantity::length: return "A";
    case Quantity::none: return "";
  }
  return "";
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double to_default_unit(const json& v, Quantity q, const std::string& where, std::vector<std::string>* notes) {
  if (v.is_number()) return v.get<double>();
  double value = 0.0;
  std::string unit;
  if (v.is_string()) {
    std::istringstream in(v.get<std::string>());
    if (!(in >> value)) throw ConfigError(where, "expected a number with an optional unit, got \"" + v.get<std::string>() + "\"");
    in >> unit;
    std::string rest;
    if (in >> rest) throw ConfigError(where, "unexpected text after the unit in \"" + v.get<std::string>() + "\"");
  } else if (v.is_object() && v.contains("value") && v.at("value").is_number()) {
    value = v.at("value").get<double>();
    if (v.contains("unit")) {
      if (!v.at("unit").is_string()) throw ConfigError(where + ".unit", "expected a string");
      unit = v.at("unit").get<std::string>();
    }
    for (const auto& [key, _] : v.items()) {
      if (key != "value" && key != "unit") throw ConfigError(where + "." + key, "unknown field");
    }
  } else {
    throw ConfigError(where, "expected a number, \"<number> <unit>\" or {\"value\", \"unit\"}");
  }
  if (unit.empty() || q == Quantity::none) {
    if (!unit.empty()) throw ConfigError(where, "this field takes no unit");
    return value;
  }
  const auto it = unit_table().find(unit);
  if (it == unit_table().end()) throw ConfigError(where, "unknown unit '" + unit + "'");
  if (it->second.kind != q) {
    throw ConfigError(where, "unit '" + unit + "' does not fit this field (expected " + default_unit(q) + ")");
  }
  const double converted = value * it->second.scale;
  if (notes && it->second.scale != 1.0) {
    notes->push_back(where + ": " + format_number(value) + " " + unit + " converted to " + format_number(converted) + " " +
                     default_unit(q));
  }
  return converted;
}

Section::Section(const json& obj, std::string path, std::shared_ptr<std::vector<std::string>> notes)
    : obj_(obj), path_(std::move(path)), notes_(std::move(notes)) {
  if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
}

std::string Section::child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Section::has(const std::string& key) const { return obj_.contains(key); }

const json& Section::get(const std::string& key) {
  used_.insert(key);
  if (!obj_.contains(key)) throw ConfigError(child_path(key), "required field is missing");
  return obj_.at(key);
}

double Section::quantity(const std::string& key, Quantity q) {
  return to_default_unit(get(key), q, child_path(key), notes_.get());
}

double Section::quantity(const std::string& key, Quantity q, double fallback) {
  used_.insert(key);
  return has(key) ? quantity(key, q) : fallback;
}

std::optional<double> Section::optional_quantity(const std::string& key, Quantity q) {
  used_.insert(key);
  if (!has(key) || obj_.at(key).is_null()) return std::nullopt;
  return quantity(key, q);
}

std::vector<double> Section::quantity_list(const std::string& key, Quantity q) {
  const json& v = get(key);
  if (!v.is_array()) throw ConfigError(child_path(key), "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(to_default_unit(v[i], q, child_path(key) + "[" + std::to_string(i) + "]", notes_.get()));
  }
  return out;
}

std::vector<double> Section::quantity_list(const std::string& key, Quantity q, std::vector<double> fallback) {
  used_.insert(key);
  return has(key) ? quantity_list(key, q) : fallback;
}

long long Section::integer(const std::string& key) {
  const json& v = get(key);
  if (!v.is_number_integer()) throw ConfigError(child_path(key), "expected an integer");
  return v.get<long long>();
}

long long Section::integer(const std::string& key, long long fallback) {
  used_.insert(key);
  return has(key) ? integer(key) : fallback;
}

std::vector<long long> Section::integer_list(const std::string& key, std::vector<long long> fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const json& v = obj_.at(key);
  if (!v.is_array()) throw ConfigError(child_path(key), "expected an array of integers");
  std::vector<long long> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(v[i].get<long long>());
  }
  return out;
}

bool Section::boolean(const std::string& key, bool fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const json& v = obj_.at(key);
  if (!v.is_boolean()) throw ConfigError(child_path(key), "expected true or false");
  return v.get<bool>();
}

std::string Section::text(const std::string& key) {
  const json& v = get(key);
  if (!v.is_string()) throw ConfigError(child_path(key), "expected a string");
  return v.get<std::string>();
}

std::string Section::text(const std::string& key, const std::string& fallback) {
  used_.insert(key);
  return has(key) ? text(key) : fallback;
}

std::vector<std::string> Section::text_list(const std::string& key) {
  const json& v = get(key);
  if (!v.is_array()) throw ConfigError(child_path(key), "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::string Section::choice(const std::string& key, const std::vector<std::string>& allowed, const std::string& fallback) {
  const std::string v = text(key, fallback);
  for (const auto& a : allowed) {
    if (a == v) return v;
  }
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  throw ConfigError(child_path(key), "'" + v + "' is not one of: " + list);
}

Section Section::object(const std::string& key) { return Section(get(key), child_path(key), notes_); }

std::optional<Section> Section::optional_object(const std::string& key) {
  used_.insert(key);
  if (!has(key)) return std::nullopt;
  return Section(obj_.at(key), child_path(key), notes_);
}

std::vector<Section> Section::objects(const std::string& key) {
  const json& v = get(key);
  if (!v.is_array()) throw ConfigError(child_path(key), "expected an array of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], child_path(key) + "[" + std::to_string(i) + "]", notes_);
  return out;
}

void Section::finish() const {
  for (const auto& [key, _] : obj_.items()) {
    if (!used_.count(key)) throw ConfigError(child_path(key), "unknown field");
  }
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  LoadedConfig c;
  c.source = path;
  try {
    c.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": " + e.what());
  }
  if (!c.doc.is_object()) throw ConfigError("", path + ": top level must be an object");
  return c;
}

std::uint64_t config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace molspin::cli
