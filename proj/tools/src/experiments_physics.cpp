#include "experiments.hpp"

#include <molspin/diagnostics.hpp>
#include <molspin/gates.hpp>
#include <molspin/hamiltonians.hpp>
#include <molspin/open_system.hpp>
#include <molspin/pulse.hpp>
#include <molspin/qec.hpp>
#include <molspin/units.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace molspin::cli {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Eigen::Vector3d vector3(Section& s, const std::string& key, Quantity q, const Eigen::Vector3d& fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.quantity_list(key, q);
  if (v.size() != 3) throw ConfigError(s.child_path(key), "expected three components");
  return {v[0], v[1], v[2]};
}

// Restricts a propagator to the listed states, expressed in the eigenbasis of h_static.
Operator dressed_block(const Operator& u, const Operator& h_static, const std::vector<int>& states) {
  const Spectrum sp = dressed_spectrum(h_static);
  const Operator ud = sp.states.adjoint() * u * sp.states;
  Operator blk(states.size(), states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) blk(i, j) = ud(states[i], states[j]);
  }
  return blk;
}

json phase_report_json(const ConditionalPhaseReport& r) {
  return {{"conditional_phase", r.conditional_phase}, {"local_phase_first", r.local_phase_first},
          {"local_phase_second", r.local_phase_second}, {"global_phase", r.global_phase},
          {"fidelity", r.fidelity},   {"leakage", r.leakage}};
}

TrimerSpec read_trimer(Section& cfg, double B) {
  TrimerSpec t = cr7ni_co_trimer(B);
  if (auto s = cfg.optional_object("trimer")) {
    t.g1 = vector3(*s, "g1", Quantity::none, t.g1);
    t.g2 = vector3(*s, "g2", Quantity::none, t.g2);
    t.g3 = vector3(*s, "g3", Quantity::none, t.g3);
    t.J1 = vector3(*s, "J1", Quantity::energy, t.J1);
    t.J2 = vector3(*s, "J2", Quantity::energy, t.J2);
    t.euler1 = vector3(*s, "euler1", Quantity::angle, t.euler1);
    t.euler2 = vector3(*s, "euler2", Quantity::angle, t.euler2);
    t.euler3 = vector3(*s, "euler3", Quantity::angle, t.euler3);
    s->finish();
  }
  return t;
}

// Switch-mediated gate on the trimer, traced from the uniform superposition of
// the computational states. Amplitudes are shown in the frame of the static
// Hamiltonian so the only visible dynamics are those driven by the pulse.
void gate_switch(Section& cfg, Context& ctx, bool cz) {
  const double B = cfg.quantity("B", Quantity::field);
  require_range(cfg, "B", B, 1e-6);
  HardwareCalibration hw;
  hw.rabi_ghz = cfg.quantity("rabi", Quantity::energy, 0.05);
  require_range(cfg, "rabi", hw.rabi_ghz, 1e-9);
  const double phi = cz ? pi : cfg.quantity("phi", Quantity::angle);
  const int samples = static_cast<int>(cfg.integer("samples", 400));
  require_range(cfg, "samples", samples, 1, 1e6);
  const TrimerSpec spec = read_trimer(cfg, B);

  const SwitchGateReport rep = cz ? compile_cz_switch(spec, hw) : compile_cphi_switch(spec, phi, hw);
  const PulseSegment& seg = rep.schedule.segments.front();
  ctx.note("switch lines (GHz): " + fmt(rep.switch_freqs[0]) + " " + fmt(rep.switch_freqs[1]) + " " +
           fmt(rep.switch_freqs[2]) + " " + fmt(rep.switch_freqs[3]));
  ctx.note("pulse at " + fmt(seg.freq) + " GHz for " + fmt(seg.tau) + " ns; nearest other switch line " +
           fmt(rep.min_separation) + " GHz away");
  if (ctx.validate_only) return;

  const SpinRegister reg = trimer_register();
  const Operator h0 = build_trimer(spec);
  const DrivenSystem sys(reg, h0, rep.schedule, hw);
  const auto cs = trimer_computational_states();
  const Eigensystem es = eigendecompose(h0);
  const Spectrum sp = dressed_spectrum(h0);
  State psi0 = State::Zero(reg.total_dim());
  for (int k : cs) psi0 += 0.5 * sp.states.col(k);

  ResultTable t{"trace", {"t_ns", "p00", "p01", "p10", "p11", "p_switch_up", "coh_00_11_re", "coh_00_11_im"}, {}};
  const Operator sw_up = embed(Operator(Eigen::Vector2cd(1.0, 0.0).asDiagonal()), 1, reg);
  for (const auto& [time, psi] : sys.trace(psi0, samples)) {
    // Undo the free evolution: exp(+i 2 pi H0 t) psi, then read dressed amplitudes.
    const Eigen::VectorXcd phases =
        (es.values.cast<cplx>() * cplx(0.0, 2.0 * pi * time)).array().exp().matrix();
    const State in_frame = es.vectors * phases.asDiagonal() * es.vectors.adjoint() * psi;
    const State amp = sp.states.adjoint() * in_frame;
    // Coherence normalised to 1 for the initial state.
    const cplx coh = 4.0 * amp(cs[0]) * std::conj(amp(cs[3]));
    t.add({time, std::norm(amp(cs[0])), std::norm(amp(cs[1])), std::norm(amp(cs[2])), std::norm(amp(cs[3])),
           psi.dot(sw_up * psi).real(), coh.real(), coh.imag()});
  }
  ctx.out->table(std::move(t));

  const Operator u = sys.interaction_frame_unitary();
  const ConditionalPhaseReport r = analyse_conditional_phase(dressed_block(u, h0, cs), phi);
  double residual = 0.0;
  for (int k : cs) {
    const State out = u * sp.states.col(k);
    residual = std::max(residual, out.dot(sw_up * out).real());
  }
  json summary = phase_report_json(r);
  summary["gate"] = cz ? "cz_switch" : "cphi_switch";
  summary["target_phase"] = phi;
  summary["switch_residual_excitation"] = residual;
  summary["switch_lines_ghz"] = rep.switch_freqs;
  ctx.out->document("gate", summary);
  ctx.out->document("schedule", schedule_to_json(rep.schedule));
  ctx.note("fidelity " + fmt(r.fidelity) + ", conditional phase " + fmt(r.conditional_phase) +
           " rad, switch residual " + fmt(residual));
}

void gate_hadamard(Section& cfg, Context& ctx) {
  const double B = cfg.quantity("B", Quantity::field);
  require_range(cfg, "B", B, 1e-6);
  const double g = cfg.quantity("g", Quantity::none, 2.0);
  HardwareCalibration hw;
  hw.rabi_ghz = cfg.quantity("rabi", Quantity::energy, 0.05);
  hw.g_perp_default = g;
  require_range(cfg, "rabi", hw.rabi_ghz, 1e-9);
  const int samples = static_cast<int>(cfg.integer("samples", 200));
  require_range(cfg, "samples", samples, 1, 1e6);
  const double larmor = g * units::bohr_magneton_ghz_per_tesla * B;
  if (hw.rabi_ghz > 0.1 * larmor) ctx.out->warning("rabi frequency is not small against the Larmor frequency");
  const PulseSchedule sched = hadamard_schedule("q", larmor, hw);
  ctx.note("Hadamard as R_y(pi/2) then R_x(pi), total " + fmt(sched.total_time) + " ns");
  if (ctx.validate_only) return;

  SpinRegister reg;
  reg.add(SpinSite::electron(0.5, "q"));
  const Operator h0 = larmor * spin_operators(0.5).Sz;
  const DrivenSystem sys(reg, h0, sched, hw);
  // Midpoint stepping is second order; this step keeps the gate error near 1e-8.
  const double dt = 1.0 / (200.0 * larmor);
  const Operator sz = pauli_z();
  ResultTable t{"trace", {"t_ns", "sigma_z", "p_up"}, {}};
  for (const auto& [time, psi] : sys.trace(basis_state(2, 0), samples, dt)) {
    t.add({time, psi.dot(sz * psi).real(), std::norm(psi(0))});
  }
  ctx.out->table(std::move(t));
  const double fid = gate_fidelity(sys.interaction_frame_unitary(dt), hadamard());
  ctx.out->document("gate", {{"gate", "hadamard"}, {"fidelity", fid}});
  ctx.out->document("schedule", schedule_to_json(sched));
  ctx.note("fidelity vs Hadamard " + fmt(fid));
}

// Two spins sharing a resonator; the resonator is tuned through emission,
// a phase step and reabsorption.
void gate_photon(Section& cfg, Context& ctx) {
  SpinPhotonSpec spec;
  spec.B = cfg.quantity("B", Quantity::field);
  spec.n_max = static_cast<int>(cfg.integer("n_max", 3));
  if (spec.n_max < 1 || spec.n_max > 20) throw ConfigError(cfg.child_path("n_max"), "must be in [1, 20]");
  std::vector<PhotonGateLevels> levels;
  for (auto& s : cfg.objects("spins")) {
    PhotonCoupledSpin p;
    p.s = s.quantity("s", Quantity::none);
    if (p.s < 1.0 || std::abs(2 * p.s - std::round(2 * p.s)) > 1e-12) {
      throw ConfigError(s.child_path("s"), "must be a multiple of 1/2 and at least 1 (three levels are used)");
    }
    p.g = s.quantity("g", Quantity::none, 2.0);
    p.D = s.quantity("D", Quantity::energy, 0.0);
    p.G = s.quantity("G", Quantity::energy);
    PhotonGateLevels lv;
    const auto l = s.integer_list("levels", {lv.zero, lv.one, lv.aux});
    if (l.size() != 3) throw ConfigError(s.child_path("levels"), "expected [zero, one, aux]");
    lv = {static_cast<int>(l[0]), static_cast<int>(l[1]), static_cast<int>(l[2])};
    s.finish();
    spec.spins.push_back(p);
    levels.push_back(lv);
  }
  if (spec.spins.size() != 2) throw ConfigError(cfg.child_path("spins"), "exactly two spins expected");
  const double phi = cfg.quantity("phi", Quantity::angle, pi);
  HardwareCalibration hw;
  hw.coherence_time_ns = cfg.quantity("coherence_time", Quantity::time, 0.0);

  PhotonGateReport rep;
  {
    WarningCapture cap;
    try {
      rep = compile_cphase_photon(spec, phi, hw, levels);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.path(), e.what());
    }
    for (const auto& w : cap.messages()) ctx.out->warning(w);
  }
  spec.omega0 = rep.omega_idle;
  ctx.note("resonator idle " + fmt(rep.omega_idle) + " GHz, emission " + fmt(rep.omega_emit) + " GHz for " +
           fmt(rep.emit_time) + " ns, phase step " + fmt(rep.omega_phase) + " GHz for " + fmt(rep.phase_time) + " ns");
  if (ctx.validate_only) return;

  const SpinRegister reg = spin_photon_register(spec);
  const Operator h_idle = build_spin_photon(spec);
  std::vector<int> cs;
  for (int a : {levels[0].zero, levels[0].one}) {
    for (int b : {levels[1].zero, levels[1].one}) cs.push_back(reg.flat_index({0, a, b}));
  }
  const Spectrum sp = dressed_spectrum(h_idle);
  const Eigensystem es = eigendecompose(h_idle);
  const auto to_frame = [&](const State& psi, double time) {
    const Eigen::VectorXcd ph = (es.values.cast<cplx>() * cplx(0.0, 2.0 * pi * time)).array().exp().matrix();
    return State(sp.states.adjoint() * es.vectors * ph.asDiagonal() * es.vectors.adjoint() * psi);
  };

  // Trace sampled at the end of each resonator step.
  ResultTable t{"trace", {"t_ns", "p00", "p01", "p10", "p11", "photon_number"}, {}};
  State psi0 = State::Zero(reg.total_dim());
  for (int k : cs) psi0 += 0.5 * sp.states.col(k);
  const Operator n_op = embed(Operator(annihilation(spec.n_max).adjoint() * annihilation(spec.n_max)), 0, reg);
  const int per_step = static_cast<int>(cfg.integer("samples_per_step", 20));
  require_range(cfg, "samples_per_step", per_step, 1, 10000);
  std::vector<double> times{0.0};
  for (const auto& r : rep.schedule.detuning_ramps) {
    for (int k = 1; k <= per_step; ++k) times.push_back(r.t_start + r.duration * k / per_step);
  }
  for (double time : times) {
    PulseSchedule partial;
    for (const auto& r : rep.schedule.detuning_ramps) {
      if (r.t_start >= time) break;
      partial.detuning_ramps.push_back({r.t_start, std::min(r.duration, time - r.t_start), r.omega0});
    }
    partial.total_time = time;
    const State psi = evolve_spin_photon(spec, partial, psi0);
    const State amp = to_frame(psi, time);
    t.add({time, std::norm(amp(cs[0])), std::norm(amp(cs[1])), std::norm(amp(cs[2])), std::norm(amp(cs[3])),
           psi.dot(n_op * psi).real()});
  }
  ctx.out->table(std::move(t));

  Operator u(reg.total_dim(), reg.total_dim());
  for (int k = 0; k < reg.total_dim(); ++k) {
    u.col(k) = to_frame(evolve_spin_photon(spec, rep.schedule, sp.states.col(k)), rep.schedule.total_time);
  }
  u = sp.states * u;  // columns back in the lab basis so dressed_block can rotate them
  const ConditionalPhaseReport r = analyse_conditional_phase(dressed_block(u, h_idle, cs), phi);
  json summary = phase_report_json(r);
  summary["gate"] = "cphase_photon";
  summary["target_phase"] = phi;
  ctx.out->document("gate", summary);
  ctx.out->document("schedule", schedule_to_json(rep.schedule));
  ctx.note("fidelity " + fmt(r.fidelity) + ", conditional phase " + fmt(r.conditional_phase) + " rad");
}

}  // namespace

void run_gate(Section& cfg, Context& ctx) {
  const std::string gate = cfg.choice("gate", {"cz_switch", "cphi_switch", "cphase_photon", "hadamard"}, "cz_switch");
  if (gate == "cz_switch" || gate == "cphi_switch") {
    gate_switch(cfg, ctx, gate == "cz_switch");
  } else if (gate == "hadamard") {
    gate_hadamard(cfg, ctx);
  } else {
    gate_photon(cfg, ctx);
  }
}

namespace {

void qec_memory(Section& cfg, Context& ctx) {
  const double T2 = cfg.quantity("T2", Quantity::time, 50000.0);
  require_range(cfg, "T2", T2, 1e-6);
  QecTiming timing;
  timing.qudit_rabi_ghz = cfg.quantity("qudit_rabi", Quantity::energy, timing.qudit_rabi_ghz);
  timing.ancilla_rabi_ghz = cfg.quantity("ancilla_rabi", Quantity::energy, timing.ancilla_rabi_ghz);
  timing.instantaneous = cfg.boolean("instantaneous", false);
  require_range(cfg, "qudit_rabi", timing.qudit_rabi_ghz, 1e-9);
  require_range(cfg, "ancilla_rabi", timing.ancilla_rabi_ghz, 1e-9);
  std::vector<double> t_mem = cfg.quantity_list("t_mem", Quantity::time, {});
  if (t_mem.empty()) {
    // Logarithmic sweep of T_mem / T2 from 1e-3 to 0.3.
    const int n = 16;
    for (int k = 0; k < n; ++k) t_mem.push_back(T2 * std::pow(10.0, -3.0 + 2.5 * k / (n - 1)));
  }
  for (std::size_t i = 0; i < t_mem.size(); ++i) {
    if (t_mem[i] < 0.0) throw ConfigError(cfg.child_path("t_mem") + "[" + std::to_string(i) + "]", "must be >= 0");
  }
  ctx.note(std::to_string(t_mem.size()) + " memory times, T2 " + fmt(T2) + " ns");
  if (ctx.validate_only) return;

  const auto pts = qec_memory_experiment(t_mem, T2, timing);
  ResultTable t{"memory", {"T_mem", "E_corrected", "E_reference"}, {}};
  double crossing = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.add({pts[i].t_mem, pts[i].e_corrected, pts[i].e_reference});
    if (crossing < 0.0 && i > 0 && pts[i - 1].e_corrected > pts[i - 1].e_reference &&
        pts[i].e_corrected <= pts[i].e_reference) {
      crossing = pts[i].t_mem;
    }
  }
  ctx.out->table(std::move(t));
  ctx.note(crossing > 0.0 ? "correction wins from T_mem ~ " + fmt(crossing) + " ns"
                          : "no crossing between corrected and reference error in this sweep");
}

void qec_knill_laflamme(Section& cfg, Context& ctx) {
  (void)cfg;
  if (ctx.validate_only) return;
  ResultTable t{"knill_laflamme", {"code", "k", "j", "diagonal_mismatch", "off_diagonal", "pass"}, {}};
  json doc = json::array();
  const std::vector<CodeSpec> codes = {three_qubit_code(), amplitude_code(), spin32_code(), spin32_register_code(),
                                       naive_spin32_code()};
  for (std::size_t c = 0; c < codes.size(); ++c) {
    const auto rep = knill_laflamme_check(codes[c]);
    for (const auto& e : rep.entries) {
      t.add({static_cast<double>(c), static_cast<double>(e.k), static_cast<double>(e.j), e.diagonal_mismatch,
             e.off_diagonal, e.pass ? 1.0 : 0.0});
    }
    doc.push_back({{"index", c}, {"code", codes[c].name}, {"pass", rep.pass}, {"max_residual", rep.max_residual},
                   {"errors", codes[c].error_names}});
    ctx.note(codes[c].name + ": " + (rep.pass ? "pass" : "fail") + ", max residual " + fmt(rep.max_residual));
  }
  ctx.out->table(std::move(t));
  ctx.out->document("codes", doc);
}

// One detect/correct cycle per declared error on random logical states; the
// syndrome branch is sampled from the seeded generator.
void qec_cycle(Section& cfg, Context& ctx) {
  const std::string code = cfg.choice("code", {"three_qubit", "amplitude", "spin32"}, "spin32");
  const int trials = static_cast<int>(cfg.integer("trials", 20));
  require_range(cfg, "trials", trials, 1, 100000);
  ctx.note(std::to_string(trials) + " random logical states per error on the " + code + " code");
  if (ctx.validate_only) return;

  std::mt19937_64 rng(ctx.seed);
  std::normal_distribution<double> normal;
  ResultTable t{"cycle", {"trial", "error", "fidelity", "inferred_matches"}, {}};
  json names = json::array();
  for (int trial = 0; trial < trials; ++trial) {
    cplx alpha(normal(rng), normal(rng)), beta(normal(rng), normal(rng));
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    alpha /= norm;
    beta /= norm;
    if (code == "three_qubit") {
      const State enc = three_qubit_encode(alpha, beta);
      const std::vector<std::string> labels = {"none", "X1", "X2", "X3"};
      for (int e = 0; e < 4; ++e) {
        State bad = enc;
        if (e > 0) bad = gate_unitary(single_qubit_gate("X", e - 1, pauli_x()), 3) * enc;
        const auto r = three_qubit_correct(bad, &rng);
        t.add({double(trial), double(e), std::norm(enc.dot(r.state)), r.record.inferred == labels[e] ? 1.0 : 0.0});
        if (trial == 0) names.push_back(labels[e]);
      }
    } else if (code == "amplitude") {
      const State enc = amplitude_code_encode(alpha, beta);
      const std::vector<std::pair<ShiftError, std::string>> errs = {
          {ShiftError::none, "none"}, {ShiftError::down, "shift-"}, {ShiftError::up, "shift+"}};
      for (std::size_t e = 0; e < errs.size(); ++e) {
        const auto r = amplitude_code_cycle(enc, errs[e].first, &rng);
        t.add({double(trial), double(e), std::norm(enc.dot(r.state)), r.record.inferred == errs[e].second ? 1.0 : 0.0});
        if (trial == 0) names.push_back(errs[e].second);
      }
    } else {
      const CodeSpec c = spin32_register_code();
      const State enc = alpha * c.zero_l + beta * c.one_l;
      for (std::size_t e = 0; e < c.errors.size(); ++e) {
        State bad = c.errors[e] * enc;
        bad.normalize();
        const auto r = spin32_detect_correct(bad, &rng);
        const bool match = e == 0 ? r.record.inferred == "none" : r.record.inferred != "none";
        t.add({double(trial), double(e), std::norm(enc.dot(r.state)), match ? 1.0 : 0.0});
        if (trial == 0) names.push_back(c.error_names[e]);
      }
    }
  }
  double worst = 1.0;
  for (const auto& row : t.rows) worst = std::min(worst, row[2]);
  ctx.out->table(std::move(t));
  ctx.out->document("errors", names);
  ctx.note("worst recovery fidelity " + fmt(worst));
}

}  // namespace

void run_qec(Section& cfg, Context& ctx) {
  const std::string mode = cfg.choice("mode", {"memory", "knill_laflamme", "cycle"}, "memory");
  if (mode == "memory") {
    qec_memory(cfg, ctx);
  } else if (mode == "knill_laflamme") {
    qec_knill_laflamme(cfg, ctx);
  } else {
    qec_cycle(cfg, ctx);
  }
}

// Worst-case bath rates of the double tetrahedron with ferromagnetic versus
// competing (antiferromagnetic, frustrated) couplings under the same bath.
void run_bath_rates(Section& cfg, Context& ctx) {
  const double J_ferro = cfg.quantity("J_ferro", Quantity::energy, -1.0);
  const double J_frustrated = cfg.quantity("J_frustrated", Quantity::energy, 1.0);
  const double B = cfg.quantity("B", Quantity::field, 0.01);
  const double g = cfg.quantity("g", Quantity::none, 2.0);
  const int n_states = static_cast<int>(cfg.integer("n_states", 8));
  const double c_self = cfg.quantity("c_self", Quantity::rate, 1e-3);
  const double c_cross = cfg.quantity("c_cross", Quantity::rate, 0.0);
  if (J_ferro >= 0.0) throw ConfigError(cfg.child_path("J_ferro"), "must be negative (ferromagnetic)");
  if (J_frustrated <= 0.0) throw ConfigError(cfg.child_path("J_frustrated"), "must be positive (antiferromagnetic)");
  require_range(cfg, "n_states", n_states, 2, 128);
  require_range(cfg, "c_self", c_self, 0.0);
  const SpinRegister reg = double_tetrahedron_register();
  const int n_spins = static_cast<int>(reg.size());
  ctx.note(std::to_string(n_spins) + " spins, lowest " + std::to_string(n_states) + " states, C_jj = " + fmt(c_self) +
           " /ns, C_jj' = " + fmt(c_cross) + " /ns");
  if (ctx.validate_only) return;

  Eigen::MatrixXd C = Eigen::MatrixXd::Constant(n_spins, n_spins, c_cross);
  C.diagonal().setConstant(c_self);
  const Eigensystem ferro = eigendecompose(double_tetrahedron(J_ferro, B, g));
  const Eigensystem frus = eigendecompose(double_tetrahedron(J_frustrated, B, g));
  for (const auto* es : {&ferro, &frus}) {
    if (n_states < es->values.size() && es->values(n_states) - es->values(n_states - 1) < 1e-9) {
      ctx.out->warning("the lowest " + std::to_string(n_states) + " states split a degenerate level (J = " +
                       fmt(es == &ferro ? J_ferro : J_frustrated) + " GHz); rates depend on the basis chosen in it");
    }
  }
  const Eigen::MatrixXd rf = bath_rate_matrix(ferro.vectors, reg, n_states, C);
  const Eigen::MatrixXd rc = bath_rate_matrix(frus.vectors, reg, n_states, C);
  ResultTable t{"bath_rates", {"mu", "nu", "gamma_ferro", "gamma_competing"}, {}};
  for (int mu = 0; mu < n_states; ++mu) {
    for (int nu = mu + 1; nu < n_states; ++nu) t.add({double(mu), double(nu), rf(mu, nu), rc(mu, nu)});
  }
  ctx.out->table(std::move(t));

  SpinRegister single;
  single.add(SpinSite::electron(0.5, "s"));
  const Eigen::MatrixXd c1 = Eigen::MatrixXd::Constant(1, 1, c_self);
  const double gamma_single = bath_rate(identity(2), single, 0, 1, c1);
  const double worst_f = rf.maxCoeff(), worst_c = rc.maxCoeff();
  ctx.out->document("summary", {{"worst_gamma_ferro", worst_f},
                                {"worst_gamma_competing", worst_c},
                                {"single_spin_gamma", gamma_single},
                                {"single_spin_C11", c_self}});
  ctx.note("worst rate: ferromagnetic " + fmt(worst_f) + " /ns, competing " + fmt(worst_c) + " /ns");
}

}  // namespace molspin::cli
