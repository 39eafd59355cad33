#include "output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace molspin::cli {

namespace fs = std::filesystem;

void ResultTable::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("table '" + name + "': row width differs from header");
  rows.push_back(std::move(row));
}

std::string format_csv_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

}  // namespace

std::vector<std::string> Output::write(const std::string& experiment, const json& config, std::uint64_t seed,
                                       const std::vector<std::string>& notes) const {
  fs::create_directories(dir_);
  std::vector<std::string> written;
  json files = json::array();
  for (const auto& t : tables_) {
    std::string csv;
    for (std::size_t i = 0; i < t.columns.size(); ++i) csv += (i ? "," : "") + t.columns[i];
    csv += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv += (i ? "," : "") + format_csv_number(row[i]);
      csv += '\n';
    }
    const fs::path p = fs::path(dir_) / (t.name + ".csv");
    write_file(p, csv);
    written.push_back(p.string());
    files.push_back(t.name + ".csv");
  }
  for (const auto& [name, doc] : documents_) {
    const fs::path p = fs::path(dir_) / (name + ".json");
    write_file(p, doc.dump(2) + "\n");
    written.push_back(p.string());
    files.push_back(name + ".json");
  }
  json meta;
  meta["experiment"] = experiment;
  meta["config_hash"] = "fnv1a64:" + hex64(config_hash(config));
  meta["config"] = config;
  meta["seed"] = seed;
  meta["versions"] = {{"molspin", MOLSPIN_VERSION}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                                   std::to_string(EIGEN_MINOR_VERSION)}};
  meta["files"] = files;
  meta["unit_notes"] = notes;
  meta["warnings"] = warnings_;
  meta["timestamp"] = utc_timestamp();
  const fs::path p = fs::path(dir_) / "metadata.json";
  write_file(p, meta.dump(2) + "\n");
  written.push_back(p.string());
  return written;
}

json schedule_to_json(const PulseSchedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    segs.push_back({{"target", seg.target},
                    {"freq_ghz", seg.freq},
                    {"amp_tesla", seg.amp},
                    {"phase_rad", seg.phase},
                    {"t0_ns", seg.t0},
                    {"tau_ns", seg.tau},
                    {"start_ns", seg.start()},
                    {"shape", "rectangular"}});
  }
  json ramps = json::array();
  for (const auto& r : s.detuning_ramps) {
    ramps.push_back({{"t_start_ns", r.t_start}, {"duration_ns", r.duration}, {"omega0_ghz", r.omega0}});
  }
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  return {{"total_time_ns", s.total_time},
          {"multi_tone", s.multi_tone},
          {"segments", segs},
          {"detuning_ramps", ramps},
          {"metadata", meta}};
}

}  // namespace molspin::cli
