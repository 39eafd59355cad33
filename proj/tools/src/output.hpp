#pragma once

#include "config.hpp"

#include <molspin/pulse.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace molspin::cli {

struct ResultTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

// Collects the files of one experiment and writes them under one directory.
class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {}

  void table(ResultTable t) { tables_.push_back(std::move(t)); }
  void document(std::string name, json doc) { documents_.emplace_back(std::move(name), std::move(doc)); }
  void warning(std::string w) { warnings_.push_back(std::move(w)); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Writes the tables (.csv), documents (.json) and metadata.json; returns the written paths.
  std::vector<std::string> write(const std::string& experiment, const json& config, std::uint64_t seed,
                                 const std::vector<std::string>& notes) const;

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<ResultTable> tables_;
  std::vector<std::pair<std::string, json>> documents_;
  std::vector<std::string> warnings_;
};

std::string format_csv_number(double v);

json schedule_to_json(const PulseSchedule& s);

}  // namespace molspin::cli
