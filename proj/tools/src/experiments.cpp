#include "experiments.hpp"

#include <molspin/diagnostics.hpp>
#include <molspin/hamiltonians.hpp>
#include <molspin/open_system.hpp>
#include <molspin/pulse.hpp>
#include <molspin/units.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace molspin::cli {

const std::map<std::string, ExperimentFn>& experiment_registry() {
  static const std::map<std::string, ExperimentFn> reg = {
      {"rabi", run_rabi},       {"evolve", run_evolve},   {"gate", run_gate},     {"qec", run_qec},
      {"bath-rates", run_bath_rates}, {"trotter", run_trotter}, {"grover", run_grover}, {"tunnel", run_tunnel},
      {"spin-boson", run_spin_boson},
  };
  return reg;
}

std::vector<double> time_grid(double t_end, int samples) {
  std::vector<double> t;
  for (int k = 0; k <= samples; ++k) t.push_back(t_end * k / samples);
  return t;
}

void require_range(const Section& s, const std::string& key, double v, double lo, double hi) {
  if (!(v >= lo) || !(v <= hi)) {
    char buf[160];
    if (hi < 1e299) {
      std::snprintf(buf, sizeof buf, "value %.6g outside [%.6g, %.6g]", v, lo, hi);
    } else {
      std::snprintf(buf, sizeof buf, "value %.6g must be >= %.6g", v, lo);
    }
    throw ConfigError(s.child_path(key), buf);
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

NoiseModel read_noise(Section& s, const SpinRegister* reg) {
  NoiseModel nm;
  if (auto t1 = s.optional_quantity("T1", Quantity::time)) {
    require_range(s, "T1", *t1, 1e-12);
    nm.T1 = *t1;
  }
  if (auto t2 = s.optional_quantity("T2", Quantity::time)) {
    require_range(s, "T2", *t2, 1e-12);
    nm.T2 = *t2;
  }
  if (reg && s.has("sites")) {
    const auto labels = s.text_list("sites");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      try {
        nm.sites.push_back(reg->index_of(labels[i]));
      } catch (const std::exception&) {
        throw ConfigError(s.child_path("sites") + "[" + std::to_string(i) + "]", "no register site labelled '" + labels[i] + "'");
      }
    }
  }
  return nm;
}

std::vector<double> population_row(double t, const DensityMatrix& rho) {
  std::vector<double> row{t};
  for (int k = 0; k < rho.rows(); ++k) row.push_back(rho(k, k).real());
  return row;
}

}  // namespace

// Spin 1/2 in a static field, driven near resonance from the ground state.
void run_rabi(Section& cfg, Context& ctx) {
  Section spin = cfg.object("spin");
  const double g = spin.quantity("g", Quantity::none, 2.0);
  const double B = spin.quantity("B", Quantity::field);
  spin.finish();
  Section drive = cfg.object("drive");
  const double rabi = drive.quantity("rabi", Quantity::energy);
  const double detuning = drive.quantity("detuning", Quantity::energy, 0.0);
  const double phase = drive.quantity("phase", Quantity::angle, 0.0);
  const double duration = drive.quantity("duration", Quantity::time);
  drive.finish();
  NoiseModel noise;
  if (auto n = cfg.optional_object("noise")) {
    noise = read_noise(*n, nullptr);
    n->finish();
  }
  const int samples = static_cast<int>(cfg.integer("samples", 200));
  require_range(cfg, "samples", samples, 1, 1e6);
  require_range(drive, "rabi", rabi, 0.0);
  require_range(drive, "duration", duration, 1e-9);
  require_range(spin, "B", B, 1e-9);

  const double larmor = g * units::bohr_magneton_ghz_per_tesla * B;
  if (rabi > 0.1 * larmor) {
    ctx.out->warning("rabi frequency " + fmt(rabi) + " GHz is not small against the Larmor frequency " + fmt(larmor) +
                     " GHz; the drive is far from the rotating-wave regime");
  }
  ctx.note("Larmor frequency " + fmt(larmor) + " GHz, Rabi period " + (rabi > 0 ? fmt(1.0 / rabi) : "inf") + " ns");
  if (ctx.validate_only) return;

  SpinRegister reg;
  reg.add(SpinSite::electron(0.5, "q"));
  const Operator h0 = larmor * spin_operators(0.5).Sz;
  HardwareCalibration hw;
  hw.g_perp_default = g;
  PulseSegment seg;
  seg.target = "q";
  seg.freq = larmor + detuning;
  seg.amp = hw.amp_for(rabi, "q");
  seg.phase = phase;
  seg.tau = duration;
  seg.t0 = 0.5 * duration;
  PulseSchedule sched;
  sched.segments.push_back(seg);
  sched.total_time = duration;
  const State ground = basis_state(2, 1);
  const Operator sz = 2.0 * spin_operators(0.5).Sz;

  ResultTable t{"rabi", {"t_ns", "sigma_z", "p_up"}, {}};
  if (noise.T1 || noise.T2) {
    // Master equation in the frame rotating at the drive frequency.
    const Operator h_rf = to_rotating_frame(h0, seg, {}, reg, hw);
    const auto times = time_grid(duration, samples);
    const auto rhos = lindblad_trajectory(h_rf, noise.terms(reg), density_from_state(ground), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      t.add({times[k], (sz * rhos[k]).trace().real(), rhos[k](0, 0).real()});
    }
  } else {
    const DrivenSystem sys(reg, h0, sched, hw);
    for (const auto& [time, psi] : sys.trace(ground, samples, 1.0 / (100.0 * sys.max_frequency()))) {
      t.add({time, psi.dot(sz * psi).real(), std::norm(psi(0))});
    }
  }
  ctx.out->table(std::move(t));
  ctx.out->document("schedule", schedule_to_json(sched));
}

namespace {

std::size_t site_index(const SpinRegister& reg, Section& s, const std::string& key) {
  const std::string label = s.text(key);
  try {
    return reg.index_of(label);
  } catch (const std::exception&) {
    throw ConfigError(s.child_path(key), "no register site labelled '" + label + "'");
  }
}

Eigen::Vector3d vector3(Section& s, const std::string& key, Quantity q, Eigen::Vector3d fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.quantity_list(key, q);
  if (v.size() != 3) throw ConfigError(s.child_path(key), "expected three components");
  return {v[0], v[1], v[2]};
}

std::string level_label(const SpinRegister& reg, int flat) {
  std::string out;
  for (int l : reg.levels_of(flat)) out += (out.empty() ? "" : "_") + std::to_string(l);
  return out;
}

struct EvolveSetup {
  SpinRegister reg;
  Operator h0;
  PulseSchedule schedule;
  HardwareCalibration hw;
  NoiseModel noise;
  State initial;
  int samples = 200;
  double duration = 0.0;
  double dt = 0.0;
};

EvolveSetup read_evolve(Section& cfg) {
  EvolveSetup e;
  for (auto& site : cfg.objects("register")) {
    const std::string label = site.text("label");
    const std::string kind = site.choice("kind", {"electron", "nucleus", "mode"}, "electron");
    if (kind == "mode") {
      const long long n = site.integer("n_max");
      if (n < 1 || n > 40) throw ConfigError(site.child_path("n_max"), "must be in [1, 40]");
      e.reg.add(SpinSite::boson_mode(static_cast<int>(n), label));
    } else {
      const double s = site.quantity("s", Quantity::none);
      if (s <= 0 || std::abs(2 * s - std::round(2 * s)) > 1e-12) throw ConfigError(site.child_path("s"), "must be a positive multiple of 1/2");
      e.reg.add(kind == "electron" ? SpinSite::electron(s, label) : SpinSite::nucleus(s, label));
    }
    site.finish();
  }
  if (e.reg.size() == 0) throw ConfigError(cfg.child_path("register"), "needs at least one site");
  if (e.reg.total_dim() > 64) throw ConfigError(cfg.child_path("register"), "Hilbert space above 64 states is not supported here");

  Section ham = cfg.object("hamiltonian");
  HamiltonianSpec spec;
  spec.reg = e.reg;
  if (ham.has("zeeman")) {
    for (auto& z : ham.objects("zeeman")) {
      ZeemanTerm t;
      t.site = site_index(e.reg, z, "site");
      if (z.has("g") && z.has("g_principal")) throw ConfigError(z.path(), "give either g or g_principal");
      const double g_iso = z.quantity("g", Quantity::none, 2.0);
      t.g = g_tensor(vector3(z, "g_principal", Quantity::none, {g_iso, g_iso, g_iso}),
                     vector3(z, "euler", Quantity::angle, Eigen::Vector3d::Zero()));
      t.B = vector3(z, "B", Quantity::field, Eigen::Vector3d::Zero());
      z.finish();
      spec.zeeman.push_back(t);
    }
  }
  if (ham.has("exchange")) {
    for (auto& x : ham.objects("exchange")) {
      ExchangeTerm t;
      t.i = site_index(e.reg, x, "i");
      t.j = site_index(e.reg, x, "j");
      if (t.i == t.j) throw ConfigError(x.path(), "exchange needs two distinct sites");
      t.J_iso = x.quantity("J", Quantity::energy, 0.0);
      t.J_diag = vector3(x, "J_diag", Quantity::energy, Eigen::Vector3d::Zero());
      t.G_dm = vector3(x, "G_dm", Quantity::energy, Eigen::Vector3d::Zero());
      x.finish();
      spec.exchange.push_back(t);
    }
  }
  if (ham.has("zfs")) {
    for (auto& z : ham.objects("zfs")) {
      ZfsTerm t;
      t.site = site_index(e.reg, z, "site");
      t.d = z.quantity("d", Quantity::energy, 0.0);
      t.e = z.quantity("e", Quantity::energy, 0.0);
      z.finish();
      spec.zfs.push_back(t);
    }
  }
  ham.finish();
  if (spec.zeeman.empty() && spec.exchange.empty() && spec.zfs.empty()) {
    throw ConfigError(ham.path(), "no terms: give at least one of zeeman, exchange, zfs");
  }
  try {
    e.h0 = build_hamiltonian(spec);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(ham.path(), err.what());
  }

  if (auto hw = cfg.optional_object("hardware")) {
    e.hw.g_perp_default = hw->quantity("g_perp", Quantity::none, 2.0);
    hw->finish();
  }

  double end = 0.0;
  if (auto sched = cfg.optional_object("schedule")) {
    for (auto& p : sched->objects("segments")) {
      PulseSegment seg;
      seg.target = p.text("target");
      site_index(e.reg, p, "target");
      seg.freq = p.quantity("freq", Quantity::energy);
      const double rabi = p.quantity("rabi", Quantity::energy);
      require_range(p, "rabi", rabi, 0.0);
      seg.amp = e.hw.amp_for(rabi, seg.target);
      seg.phase = p.quantity("phase", Quantity::angle, 0.0);
      seg.tau = p.quantity("tau", Quantity::time);
      require_range(p, "tau", seg.tau, 1e-9);
      const double start = p.quantity("start", Quantity::time, end);
      require_range(p, "start", start, 0.0);
      seg.t0 = start + 0.5 * seg.tau;
      end = std::max(end, seg.end());
      p.finish();
      e.schedule.segments.push_back(seg);
    }
    e.schedule.multi_tone = sched->boolean("multi_tone", false);
    e.schedule.total_time = sched->quantity("total_time", Quantity::time, end);
    if (e.schedule.total_time < end) throw ConfigError(sched->child_path("total_time"), "ends before the last segment");
    sched->finish();
    try {
      e.schedule.validate();
    } catch (const std::exception& err) {
      throw ConfigError(sched->path(), err.what());
    }
  }
  e.duration = cfg.quantity("duration", Quantity::time, e.schedule.total_time);
  require_range(cfg, "duration", e.duration, 1e-9);
  e.schedule.total_time = std::max(e.schedule.total_time, e.duration);

  if (auto n = cfg.optional_object("noise")) {
    e.noise = read_noise(*n, &e.reg);
    n->finish();
  }

  const auto levels = cfg.integer_list("initial_levels", {});
  if (levels.empty()) {
    e.initial = eigendecompose(e.h0).vectors.col(0);
  } else {
    if (levels.size() != e.reg.size()) throw ConfigError(cfg.child_path("initial_levels"), "one level per site expected");
    std::vector<int> lv;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 0 || levels[i] >= e.reg.site_dim(i)) {
        throw ConfigError(cfg.child_path("initial_levels") + "[" + std::to_string(i) + "]", "level out of range");
      }
      lv.push_back(static_cast<int>(levels[i]));
    }
    e.initial = product_state(e.reg, lv);
  }
  e.samples = static_cast<int>(cfg.integer("samples", 200));
  require_range(cfg, "samples", e.samples, 1, 1e6);
  e.dt = cfg.quantity("dt", Quantity::time, 0.0);
  require_range(cfg, "dt", e.dt, 0.0);
  return e;
}

// Names the transition each segment drives and its nearest neighbour on the
// same site, warning when the segment is too short to separate them.
void selectivity_report(const EvolveSetup& e, Context& ctx) {
  const Spectrum spec = dressed_spectrum(e.h0);
  const int n = e.reg.total_dim();
  for (std::size_t k = 0; k < e.schedule.segments.size(); ++k) {
    const auto& seg = e.schedule.segments[k];
    const std::size_t site = e.reg.index_of(seg.target);
    const Operator sp = spec.states.adjoint() * embed(spin_operators(e.reg.site(site).s).Splus, site, e.reg) * spec.states;
    struct Line {
      int u, l;
      double f;
    };
    std::vector<Line> lines;
    for (int u = 0; u < n; ++u) {
      for (int l = 0; l < n; ++l) {
        if (std::abs(sp(u, l)) > 1e-3) lines.push_back({u, l, spec.energies(u) - spec.energies(l)});
      }
    }
    if (lines.empty()) continue;
    std::sort(lines.begin(), lines.end(), [&](const Line& a, const Line& b) {
      return std::abs(a.f - seg.freq) < std::abs(b.f - seg.freq);
    });
    const Line& hit = lines.front();
    double sep = std::numeric_limits<double>::infinity();
    const Line* other = nullptr;
    for (const auto& l : lines) {
      if ((l.u == hit.u && l.l == hit.l) || std::abs(l.f - hit.f) < 1e-12) continue;
      if (std::abs(l.f - hit.f) < sep) {
        sep = std::abs(l.f - hit.f);
        other = &l;
      }
    }
    const std::string name = "|" + level_label(e.reg, hit.l) + "> -> |" + level_label(e.reg, hit.u) + ">";
    ctx.note("segment " + std::to_string(k) + " on '" + seg.target + "' drives " + name + " at " + fmt(hit.f) + " GHz");
    if (other && !is_selective(seg.tau, sep)) {
      ctx.out->warning("segment " + std::to_string(k) + " (tau " + fmt(seg.tau) + " ns, bandwidth " + fmt(1.0 / seg.tau) +
                       " GHz) does not resolve " + name + " at " + fmt(hit.f) + " GHz from |" +
                       level_label(e.reg, other->l) + "> -> |" + level_label(e.reg, other->u) + "> at " + fmt(other->f) +
                       " GHz (separation " + fmt(sep) + " GHz)");
    }
  }
}

}  // namespace

// Register, Hamiltonian terms, optional schedule and noise; writes level populations.
void run_evolve(Section& cfg, Context& ctx) {
  const EvolveSetup e = read_evolve(cfg);
  selectivity_report(e, ctx);
  ctx.note("register dimension " + std::to_string(e.reg.total_dim()) + ", " +
           std::to_string(e.schedule.segments.size()) + " segment(s), duration " + fmt(e.duration) + " ns");
  if (ctx.validate_only) return;

  ResultTable t{"populations", {"t_ns"}, {}};
  for (int k = 0; k < e.reg.total_dim(); ++k) t.columns.push_back("p_" + level_label(e.reg, k));
  const DrivenSystem sys(e.reg, e.h0, e.schedule, e.hw);
  const double dt = e.dt > 0.0 ? e.dt : 1.0 / (20.0 * std::max(sys.max_frequency(), 1e-9));
  const auto terms = e.noise.terms(e.reg);
  if (terms.empty()) {
    for (const auto& [time, psi] : sys.trace(e.initial, e.samples, dt)) t.add(population_row(time, density_from_state(psi)));
  } else {
    const auto times = time_grid(e.duration, e.samples);
    const auto rhos = lindblad_trajectory_driven([&](double time) { return sys.hamiltonian(time); }, terms,
                                                 density_from_state(e.initial), times, dt, sys.breakpoints());
    for (std::size_t k = 0; k < times.size(); ++k) t.add(population_row(times[k], rhos[k]));
  }
  ctx.out->table(std::move(t));
  ctx.out->document("schedule", schedule_to_json(e.schedule));
}

}  // namespace molspin::cli
