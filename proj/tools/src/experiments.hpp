#pragma once

#include "config.hpp"
#include "output.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace molspin::cli {

struct Context {
  bool validate_only = false;
  std::uint64_t seed = 1;
  Output* out = nullptr;
  std::vector<std::string> summary;  // one line each, printed after the run

  void note(std::string line) { summary.push_back(std::move(line)); }
};

// Reads its fields from `cfg` (the config root minus experiment/seed/output),
// then either checks them (validate_only) or runs and fills ctx.out.
using ExperimentFn = void (*)(Section& cfg, Context& ctx);

const std::map<std::string, ExperimentFn>& experiment_registry();

void run_rabi(Section& cfg, Context& ctx);
void run_evolve(Section& cfg, Context& ctx);
void run_gate(Section& cfg, Context& ctx);
void run_qec(Section& cfg, Context& ctx);
void run_bath_rates(Section& cfg, Context& ctx);
void run_trotter(Section& cfg, Context& ctx);
void run_grover(Section& cfg, Context& ctx);
void run_tunnel(Section& cfg, Context& ctx);
void run_spin_boson(Section& cfg, Context& ctx);

// Evenly spaced samples from 0 to t_end inclusive.
std::vector<double> time_grid(double t_end, int samples);

// Throws ConfigError unless lo <= v (and v <= hi when given).
void require_range(const Section& s, const std::string& key, double v, double lo, double hi = 1e300);

}  // namespace molspin::cli
