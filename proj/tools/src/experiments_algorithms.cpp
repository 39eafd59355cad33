#include "experiments.hpp"

#include <molspin/algorithms.hpp>
#include <molspin/diagnostics.hpp>

#include <cmath>
#include <cstdio>

namespace molspin::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

// TFIM product-formula trace against the exact propagator, plus the error sweep.
void run_trotter(Section& cfg, Context& ctx) {
  TfimSpec spec;
  spec.b = cfg.quantity("b", Quantity::energy, spec.b);
  spec.J = cfg.quantity("J", Quantity::energy, spec.J);
  spec.n_spins = static_cast<int>(cfg.integer("n_spins", spec.n_spins));
  require_range(cfg, "n_spins", spec.n_spins, 2, 8);
  const double t_final = cfg.quantity("t_final", Quantity::time, 1.0);
  require_range(cfg, "t_final", t_final, 1e-9);
  const int n = static_cast<int>(cfg.integer("steps", 10));
  require_range(cfg, "steps", n, 1, 100000);
  const auto sweep = cfg.integer_list("sweep", {4, 8, 16, 32, 64});
  if (sweep.size() < 2) throw ConfigError(cfg.child_path("sweep"), "needs at least two step counts");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i] < 1) throw ConfigError(cfg.child_path("sweep") + "[" + std::to_string(i) + "]", "must be >= 1");
  }
  const std::string order_name = cfg.choice("order", {"first", "symmetric"}, "first");
  const TrotterOrder order = order_name == "first" ? TrotterOrder::first : TrotterOrder::symmetric;
  ctx.note(std::to_string(spec.n_spins) + "-spin TFIM, b = " + fmt(spec.b) + " GHz, J = " + fmt(spec.J) + " GHz, " +
           std::to_string(n) + " steps over " + fmt(t_final) + " ns");
  if (ctx.validate_only) return;

  const TfimTrace tr = tfim_magnetization_trace(spec, t_final, n);
  ResultTable trace{"trace", {"t_ns", "sz_trotter", "sz_exact"}, {}};
  for (std::size_t k = 0; k < tr.t.size(); ++k) trace.add({tr.t[k], tr.trotter[k], tr.exact[k]});
  ctx.out->table(std::move(trace));

  const auto terms = tfim_terms(spec);
  std::vector<double> ns(sweep.size()), slice(sweep.size()), total(sweep.size());
  parallel_for(sweep.size(), [&](std::size_t i) {
    const TrotterPlan plan{terms, t_final, static_cast<int>(sweep[i])};
    ns[i] = static_cast<double>(sweep[i]);
    slice[i] = trotter_slice_error(plan, order);
    total[i] = trotter_error(plan, order);
  });
  ResultTable err{"error", {"n", "slice_error", "total_error"}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i) err.add({ns[i], slice[i], total[i]});
  ctx.out->table(std::move(err));

  const double slope = -loglog_slope(ns, slice);
  ctx.out->document("summary", {{"order", order_name},
                                {"slice_error_slope", slope},
                                {"total_error_slope", -loglog_slope(ns, total)},
                                {"trace_rms_deviation", tr.rms_deviation},
                                {"trace_peak_to_peak", tr.peak_to_peak}});
  ctx.note("slice error falls as n^-" + fmt(slope) + "; trace RMS deviation " + fmt(tr.rms_deviation) + " (" +
           fmt(100.0 * tr.rms_deviation / tr.peak_to_peak) + "% of peak-to-peak)");
}

void run_grover(Section& cfg, Context& ctx) {
  GroverSpec spec;
  spec.d = static_cast<int>(cfg.integer("d", 3));
  require_range(cfg, "d", spec.d, 3, 16);
  spec.marked = static_cast<int>(cfg.integer("marked", 0));
  require_range(cfg, "marked", spec.marked, 0, spec.d - 1);
  spec.initial = static_cast<int>(cfg.integer("initial", -1));
  require_range(cfg, "initial", spec.initial, -1, spec.d - 1);
  const std::string mode_name = cfg.choice("mode", {"unitary", "pulse"}, "unitary");
  const GroverMode mode = mode_name == "unitary" ? GroverMode::unitary : GroverMode::pulse;
  GroverHardware hw;
  if (auto h = cfg.optional_object("hardware")) {
    hw.f0 = h->quantity("f0", Quantity::energy, hw.f0);
    hw.p = h->quantity("p", Quantity::energy, hw.p);
    hw.max_rabi = h->quantity("max_rabi", Quantity::energy, hw.max_rabi);
    hw.max_detuning = h->quantity("max_detuning", Quantity::energy, hw.max_detuning);
    hw.min_tau = h->quantity("min_tau", Quantity::time, hw.min_tau);
    hw.max_tau = h->quantity("max_tau", Quantity::time, hw.max_tau);
    hw.max_evaluations = static_cast<int>(h->integer("max_evaluations", hw.max_evaluations));
    require_range(*h, "max_rabi", hw.max_rabi, 1e-9);
    require_range(*h, "min_tau", hw.min_tau, 1e-9);
    require_range(*h, "max_tau", hw.max_tau, hw.min_tau);
    require_range(*h, "max_evaluations", hw.max_evaluations, 1, 1e7);
    h->finish();
  }
  if (cfg.has("stages")) {
    for (auto& st : cfg.objects("stages")) {
      GroverStage stage;
      stage.tau = st.quantity("tau", Quantity::time);
      require_range(st, "tau", stage.tau, 1e-9);
      for (auto& tone : st.objects("tones")) {
        GroverTone t;
        t.rabi = tone.quantity("rabi", Quantity::energy);
        t.detuning = tone.quantity("detuning", Quantity::energy, 0.0);
        t.phase = tone.quantity("phase", Quantity::angle, 0.0);
        tone.finish();
        stage.tones.push_back(t);
      }
      if (static_cast<int>(stage.tones.size()) != spec.d - 1) {
        throw ConfigError(st.child_path("tones"), "one tone per adjacent transition (" + std::to_string(spec.d - 1) + ")");
      }
      st.finish();
      spec.drive.push_back(stage);
    }
    if (spec.drive.size() != 2) throw ConfigError(cfg.child_path("stages"), "two stages expected");
  }
  const int samples = static_cast<int>(cfg.integer("samples", 200));
  require_range(cfg, "samples", samples, 1, 1e6);
  const auto freqs = grover_transition_freqs(spec.d, hw);
  std::string lines;
  for (double f : freqs) lines += " " + fmt(f);
  ctx.note(mode_name + " mode, d = " + std::to_string(spec.d) + ", marked level " + std::to_string(spec.marked) +
           (mode == GroverMode::pulse ? ", transitions (GHz):" + lines : ""));
  if (ctx.validate_only) return;

  const GroverResult r = grover_qudit(spec, mode, hw, ctx.seed);
  ResultTable pops{"populations", {"level", "population", "stage1_population"}, {}};
  for (int k = 0; k < spec.d; ++k) {
    pops.add({double(k), r.populations[k], r.stage1_populations.empty() ? 0.0 : r.stage1_populations[k]});
  }
  ctx.out->table(std::move(pops));
  json summary = {{"mode", mode_name}, {"d", spec.d}, {"marked", spec.marked},
                  {"marked_population", r.populations[spec.marked]}};
  if (mode == GroverMode::unitary) {
    summary["iterations"] = r.iterations;
  } else {
    json stages = json::array();
    for (const auto& st : r.drive) {
      json tones = json::array();
      for (const auto& t : st.tones) tones.push_back({{"rabi", t.rabi}, {"detuning", t.detuning}, {"phase", t.phase}});
      stages.push_back({{"tau", st.tau}, {"tones", tones}});
    }
    summary["stages"] = stages;
    ctx.out->document("schedule", schedule_to_json(r.schedule));

    // Lab-frame replay of the exported schedule.
    const DrivenSystem sys(grover_register(spec.d), grover_static_hamiltonian(spec.d, hw), r.schedule,
                           HardwareCalibration{});
    const int start = spec.initial < 0 ? spec.d - 1 : spec.initial;
    ResultTable trace{"trace", {"t_ns"}, {}};
    for (int k = 0; k < spec.d; ++k) trace.columns.push_back("p" + std::to_string(k));
    for (const auto& [time, psi] : sys.trace(basis_state(spec.d, start), samples)) {
      std::vector<double> row{time};
      for (int k = 0; k < spec.d; ++k) row.push_back(std::norm(psi(k)));
      trace.add(std::move(row));
    }
    ctx.out->table(std::move(trace));
  }
  ctx.out->document("summary", summary);
  ctx.note("marked-level population " + fmt(r.populations[spec.marked]));
}

void run_tunnel(Section& cfg, Context& ctx) {
  TunnelingSpec spec;
  spec.S = cfg.quantity("S", Quantity::none, spec.S);
  if (spec.S < 0.5 || std::abs(2 * spec.S - std::round(2 * spec.S)) > 1e-12) {
    throw ConfigError(cfg.child_path("S"), "must be a positive multiple of 1/2");
  }
  spec.D = cfg.quantity("D", Quantity::energy, spec.D);
  spec.E = cfg.quantity("E", Quantity::energy, spec.E);
  const bool spin1 = std::abs(spec.S - 1.0) < 1e-12 && spec.E != 0.0;
  const double t_final = cfg.quantity("t_final", Quantity::time, spin1 ? 2.0 * tunneling_period_spin1(spec) : 50.0);
  require_range(cfg, "t_final", t_final, 1e-9);
  const int samples = static_cast<int>(cfg.integer("samples", 400));
  require_range(cfg, "samples", samples, 1, 1e6);
  if (spin1) ctx.note("expected period 1/(2E) = " + fmt(tunneling_period_spin1(spec)) + " ns");
  if (std::abs(spec.E) > 0.1 * std::abs(spec.D)) {
    ctx.out->warning("|E| = " + fmt(std::abs(spec.E)) + " GHz is not small against |D| = " + fmt(std::abs(spec.D)) +
                     " GHz; the two-level tunnelling picture does not apply");
  }
  if (ctx.validate_only) return;

  TunnelingTrace tr;
  {
    WarningCapture cap;  // the condition is already reported above
    tr = tunneling_simulation(spec, time_grid(t_final, samples));
  }
  ResultTable t{"trace", {"t_ns", "sz", "norm"}, {}};
  for (std::size_t k = 0; k < tr.t.size(); ++k) t.add({tr.t[k], tr.sz[k], tr.norm[k]});
  ctx.out->table(std::move(t));

  // Period from the first upward crossing of the mean after the first minimum.
  double period = 0.0;
  const double mean = 0.0;
  bool went_down = false;
  for (std::size_t k = 1; k < tr.t.size(); ++k) {
    if (tr.sz[k] < mean) went_down = true;
    if (went_down && tr.sz[k - 1] < mean && tr.sz[k] >= mean) {
      // Upward crossing at 3/4 of a cosine period.
      const double f = (mean - tr.sz[k - 1]) / (tr.sz[k] - tr.sz[k - 1]);
      period = (tr.t[k - 1] + f * (tr.t[k] - tr.t[k - 1])) / 0.75;
      break;
    }
  }
  json summary = {{"S", spec.S}, {"D", spec.D}, {"E", spec.E}, {"measured_period", period}};
  if (spin1) summary["expected_period"] = tunneling_period_spin1(spec);
  ctx.out->document("summary", summary);
  if (period > 0.0) ctx.note("measured period " + fmt(period) + " ns");
}

// Rabi model with the boson held in a spin-S qudit, against a truncated boson.
void run_spin_boson(Section& cfg, Context& ctx) {
  RabiModelSpec spec;
  spec.omega = cfg.quantity("omega", Quantity::energy, spec.omega);
  spec.qubit_freq = cfg.quantity("qubit_freq", Quantity::energy, spec.qubit_freq);
  spec.g = cfg.quantity("g", Quantity::energy, spec.g);
  spec.initial_photons = static_cast<int>(cfg.integer("initial_photons", 0));
  spec.qubit_up = cfg.boolean("qubit_up", true);
  const double S = cfg.quantity("S", Quantity::none, 1.5);
  if (S < 0.5 || std::abs(2 * S - std::round(2 * S)) > 1e-12) {
    throw ConfigError(cfg.child_path("S"), "must be a positive multiple of 1/2");
  }
  require_range(cfg, "initial_photons", spec.initial_photons, 0, 2 * S);
  const std::string enc_name = cfg.choice("encoding", {"exact", "spin_ladder"}, "exact");
  const BosonEncoding enc = enc_name == "exact" ? BosonEncoding::exact : BosonEncoding::spin_ladder;
  const int n_max = static_cast<int>(cfg.integer("reference_n_max", 20));
  require_range(cfg, "reference_n_max", n_max, 1, 60);
  const double t_final = cfg.quantity("t_final", Quantity::time, 20.0);
  require_range(cfg, "t_final", t_final, 1e-9);
  const int samples = static_cast<int>(cfg.integer("samples", 200));
  require_range(cfg, "samples", samples, 1, 1e6);
  ctx.note("spin " + fmt(S) + " qudit, " + enc_name + " encoding, reference truncated at " + std::to_string(n_max) +
           " photons");
  if (ctx.validate_only) return;

  const auto times = time_grid(t_final, samples);
  const auto q = rabi_model_qudit(spec, S, enc, times);
  const auto b = rabi_model_boson(spec, n_max, times);
  ResultTable t{"trace", {"t_ns", "sz_qudit", "sz_boson"}, {}};
  double rms = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    t.add({times[k], q[k], b[k]});
    rms += (q[k] - b[k]) * (q[k] - b[k]);
  }
  rms = std::sqrt(rms / times.size());
  ctx.out->table(std::move(t));
  ctx.out->document("summary", {{"encoding", enc_name}, {"S", S}, {"rms_deviation", rms}});
  ctx.note("RMS deviation from the truncated boson " + fmt(rms));
}

}  // namespace molspin::cli
