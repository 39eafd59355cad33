#pragma once

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace molspin::cli {

using json = nlohmann::json;

// Schema violation; `where` is a JSON path such as "params.rabi".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what) {}
};

enum class Quantity { energy, time, field, angle, rate, length, none };

// Converts "2.1 cm-1", {"value": 2.1, "unit": "cm-1"} or a bare number (already
// in the default unit) to GHz, ns, T, rad, 1/ns or angstrom.
double to_default_unit(const json& v, Quantity q, const std::string& where, std::vector<std::string>* notes);

// Read-only view of one JSON object that remembers which keys were read, so
// unknown keys can be reported.
class Section {
 public:
  Section(const json& obj, std::string path, std::shared_ptr<std::vector<std::string>> notes);

  bool has(const std::string& key) const;
  const std::string& path() const { return path_; }

  double quantity(const std::string& key, Quantity q);
  double quantity(const std::string& key, Quantity q, double fallback);
  std::optional<double> optional_quantity(const std::string& key, Quantity q);
  std::vector<double> quantity_list(const std::string& key, Quantity q);
  std::vector<double> quantity_list(const std::string& key, Quantity q, std::vector<double> fallback);

  long long integer(const std::string& key);
  long long integer(const std::string& key, long long fallback);
  std::vector<long long> integer_list(const std::string& key, std::vector<long long> fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string text(const std::string& key);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<std::string> text_list(const std::string& key);
  std::string choice(const std::string& key, const std::vector<std::string>& allowed, const std::string& fallback);

  Section object(const std::string& key);
  std::optional<Section> optional_object(const std::string& key);
  std::vector<Section> objects(const std::string& key);

  // Throws ConfigError for keys never read through this view.
  void finish() const;

  std::string child_path(const std::string& key) const;
  const std::vector<std::string>& notes() const { return *notes_; }

 private:
  const json& get(const std::string& key);

  const json& obj_;
  std::string path_;
  std::shared_ptr<std::vector<std::string>> notes_;
  std::set<std::string> used_;
};

struct LoadedConfig {
  json doc;
  std::string source;  // file path or "<defaults>"
};

// Parses a file; syntax errors are reported with line and column.
LoadedConfig load_config(const std::string& path);

// 64-bit FNV-1a of the canonical (sorted-key) serialisation.
std::uint64_t config_hash(const json& doc);
std::string hex64(std::uint64_t v);

}  // namespace molspin::cli
