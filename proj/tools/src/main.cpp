#include "config.hpp"
#include "experiments.hpp"
#include "output.hpp"
#include "presets.hpp"

#include <molspin/diagnostics.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

using namespace molspin::cli;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

std::string default_out_dir(const std::string& experiment) {
  if (const char* env = std::getenv("MOLSPIN_OUT_DIR"); env && *env) return std::string(env) + "/" + experiment;
  return "molspin-out/" + experiment;
}

// Loads the config (or the preset defaults), checks it and, unless
// validate_only, runs the experiment and writes its files.
int execute(const Options& opt, const std::string& preset, bool validate_only) {
  json doc;
  std::string experiment;
  try {
    if (!opt.config.empty()) {
      doc = load_config(opt.config).doc;
    } else if (auto d = preset_default(preset)) {
      doc = *d;
    } else {
      throw ConfigError("", "no config given (use --config <path>)");
    }
    if (!preset.empty() && !doc.contains("experiment")) doc["experiment"] = preset;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  auto notes = std::make_shared<std::vector<std::string>>();
  Context ctx;
  ctx.validate_only = validate_only;
  std::unique_ptr<Output> out;
  try {
    Section root(doc, "", notes);
    experiment = root.text("experiment");
    const auto& reg = experiment_registry();
    const auto it = reg.find(experiment);
    if (it == reg.end()) {
      std::string known;
      for (const auto& [name, _] : reg) known += (known.empty() ? "" : ", ") + name;
      throw ConfigError("experiment", "unknown experiment '" + experiment + "' (known: " + known + ")");
    }
    if (!preset.empty() && experiment != preset) {
      throw ConfigError("experiment", "config is for '" + experiment + "' but the subcommand is '" + preset + "'");
    }
    const long long config_seed = root.integer("seed", 1);
    if (config_seed < 0) throw ConfigError("seed", "must be >= 0");
    ctx.seed = opt.seed ? *opt.seed : static_cast<std::uint64_t>(config_seed);
    std::string dir = opt.out;
    if (auto o = root.optional_object("output")) {
      const std::string from_config = o->text("dir", "");
      o->finish();
      if (dir.empty()) dir = from_config;
    }
    if (dir.empty()) dir = default_out_dir(experiment);
    out = std::make_unique<Output>(dir);
    ctx.out = out.get();

    molspin::WarningCapture capture;
    it->second(root, ctx);
    root.finish();
    for (const auto& w : capture.messages()) out->warning(w);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const molspin::CompileError& e) {
    std::cerr << "compile error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  for (const auto& w : out->warnings()) std::cerr << "warning: " << w << "\n";
  if (validate_only) std::cout << "ok\n";
  std::cout << "experiment: " << experiment << "\n";
  for (const auto& line : ctx.summary) std::cout << "  " << line << "\n";
  for (const auto& n : *notes) std::cout << "  note: " << n << "\n";
  if (validate_only) return kOk;

  try {
    for (const auto& p : out->write(experiment, doc, ctx.seed, *notes)) std::cout << "wrote " << p << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molspin: spin-qubit and qudit simulations driven by JSON configs"};
  app.set_version_flag("--version", std::string(MOLSPIN_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  std::uint64_t seed = 0;
  app.add_option("--out", opt.out, "Output directory (default: $MOLSPIN_OUT_DIR/<experiment> or molspin-out/<experiment>)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed; overrides the config");
  app.add_option("--threads", opt.threads, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);

  struct Command {
    CLI::App* app;
    std::string preset;
    bool validate_only;
  };
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, const std::string& preset, bool validate_only) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config,config", opt.config, "Experiment config (JSON)");
    commands.push_back({sub, preset, validate_only});
  };
  add("validate", "Check a config and report diagnostics without running", "", true);
  add("run", "Run the experiment named in a config", "", false);
  add("rabi", "Driven spin 1/2 (Rabi oscillations)", "rabi", false);
  add("gate", "Compile and simulate a two-qubit or single-qubit gate", "gate", false);
  add("qec", "Error-correction memory curve, Knill-Laflamme check or recovery cycle", "qec", false);
  add("trotter", "Trotterised transverse-field Ising dynamics", "trotter", false);
  add("grover", "Grover search on a single qudit", "grover", false);
  add("tunnel", "Tunnelling of the magnetisation", "tunnel", false);
  add("bath-rates", "Bath-induced dephasing rates of a spin cluster", "bath-rates", false);

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opt.seed = seed;
  molspin::set_max_threads(opt.threads);

  for (const auto& c : commands) {
    if (c.app->parsed()) {
      if (c.preset.empty() && opt.config.empty()) {
        std::cerr << "config error: " << c.app->get_name() << " needs --config <path>\n";
        return kConfigError;
      }
      return execute(opt, c.preset, c.validate_only);
    }
  }
  return kConfigError;
}
