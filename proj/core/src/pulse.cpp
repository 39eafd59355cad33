#include "molspin/pulse.hpp"

#include "molspin/diagnostics.hpp"
#include "molspin/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace molspin {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_phase(double x) {
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void PulseSchedule::validate() const {
  for (const auto& s : segments) {
    if (!(s.tau > 0.0)) throw std::invalid_argument("PulseSchedule: segment duration must be positive");
    if (s.amp < 0.0) throw std::invalid_argument("PulseSchedule: segment amplitude must be non-negative");
    if (s.end() > total_time + 1e-9) throw std::invalid_argument("PulseSchedule: segment ends after total_time");
  }
  for (const auto& r : detuning_ramps) {
    if (r.duration < 0.0) throw std::invalid_argument("PulseSchedule: negative ramp duration");
  }
  if (multi_tone) return;
  for (std::size_t a = 0; a < segments.size(); ++a) {
    for (std::size_t b = a + 1; b < segments.size(); ++b) {
      const auto& x = segments[a];
      const auto& y = segments[b];
      if (x.target != y.target) continue;
      if (x.start() < y.end() - 1e-12 && y.start() < x.end() - 1e-12) {
        throw std::invalid_argument("PulseSchedule: overlapping segments on '" + x.target +
                                    "' without multi_tone");
      }
    }
  }
}

double HardwareCalibration::g_perp_for(const std::string& target) const {
  const auto it = g_perp.find(target);
  return it == g_perp.end() ? g_perp_default : it->second;
}

double HardwareCalibration::amp_for(double rabi, const std::string& target) const {
  return rabi / (g_perp_for(target) * units::bohr_magneton_ghz_per_tesla);
}

double HardwareCalibration::rabi_for(double amp, const std::string& target) const {
  return g_perp_for(target) * units::bohr_magneton_ghz_per_tesla * amp;
}

Operator drive_hamiltonian(const PulseSegment& p, const SpinRegister& reg, double t, const HardwareCalibration& hw) {
  const std::size_t site = reg.index_of(p.target);
  if (!p.active(t) || p.amp == 0.0) return Operator::Zero(reg.total_dim(), reg.total_dim());
  const auto ops = spin_operators(reg.site(site).s);
  const double theta = 2.0 * pi * p.freq * t + p.phase;
  return hw.rabi_for(p.amp, p.target) * embed(std::cos(theta) * ops.Sx + std::sin(theta) * ops.Sy, site, reg);
}

Operator to_rotating_frame(const Operator& h_static, const PulseSegment& drive, const FrameSpec& frame,
                           const SpinRegister& reg, const HardwareCalibration& hw) {
  std::map<std::string, double> freqs = frame.rotation_freqs;
  freqs.emplace(drive.target, drive.freq);
  Operator h = h_static;
  for (const auto& [label, f] : freqs) {
    const std::size_t site = reg.index_of(label);
    const Operator sz = embed(spin_operators(reg.site(site).s).Sz, site, reg);
    if (operator_norm(commutator(h_static, sz)) > 1e-9 * std::max(1.0, operator_norm(h_static))) {
      warn("to_rotating_frame: static Hamiltonian does not commute with S_z of '" + label +
           "'; the frame Hamiltonian is only approximately time independent");
    }
    h -= f * sz;
  }
  const std::size_t site = reg.index_of(drive.target);
  const auto ops = spin_operators(reg.site(site).s);
  h += hw.rabi_for(drive.amp, drive.target) *
       embed(std::cos(drive.phase) * ops.Sx + std::sin(drive.phase) * ops.Sy, site, reg);
  return h;
}

Spectrum dressed_spectrum(const Operator& h_static) {
  const auto es = eigendecompose(h_static);
  const int n = static_cast<int>(h_static.rows());
  std::vector<std::tuple<double, int, int>> pairs;  // (overlap, eigen index, product index)
  pairs.reserve(static_cast<std::size_t>(n) * n);
  for (int e = 0; e < n; ++e) {
    for (int k = 0; k < n; ++k) pairs.emplace_back(std::norm(es.vectors(k, e)), e, k);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<int> label_of(n, -1), owner(n, -1);
  int assigned = 0;
  for (const auto& [ov, e, k] : pairs) {
    if (label_of[e] >= 0 || owner[k] >= 0) continue;
    label_of[e] = k;
    owner[k] = e;
    if (++assigned == n) break;
  }
  Spectrum spec;
  spec.energies.resize(n);
  spec.overlap.resize(n);
  spec.states.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const int e = owner[k];
    State v = es.vectors.col(e);
    const cplx c = v(k);
    if (std::abs(c) > 0) v *= std::conj(c) / std::abs(c);
    spec.states.col(k) = v;
    spec.energies(k) = es.values(e);
    spec.overlap(k) = std::norm(c);
  }
  return spec;
}

Transition find_transition(const Spectrum& spec, const SpinRegister& reg, const std::string& target, int lower_state,
                           int upper_state) {
  const int n = static_cast<int>(spec.energies.size());
  if (lower_state < 0 || upper_state < 0 || lower_state >= n || upper_state >= n || lower_state == upper_state) {
    throw std::invalid_argument("find_transition: invalid state indices");
  }
  const std::size_t site = reg.index_of(target);
  const Operator sp = embed(spin_operators(reg.site(site).s).Splus, site, reg);
  const cplx m = spec.states.col(upper_state).dot(sp * spec.states.col(lower_state));
  if (std::abs(m) < 1e-6) {
    throw CompileError("find_transition: states " + std::to_string(lower_state) + " and " +
                       std::to_string(upper_state) + " are not connected by S+ on '" + target + "'");
  }
  Transition tr;
  tr.target = target;
  tr.freq = spec.energies(upper_state) - spec.energies(lower_state);
  tr.matrix_element = std::abs(m);
  tr.matrix_phase = std::arg(m);
  tr.upper = upper_state;
  tr.lower = lower_state;
  return tr;
}

PulseSegment rotation_pulse(double phi, double theta, const Transition& tr, const HardwareCalibration& hw) {
  if (!(theta > 0.0)) throw std::invalid_argument("rotation_pulse: theta must be positive");
  if (!(hw.rabi_ghz > 0.0)) throw std::invalid_argument("rotation_pulse: rabi frequency must be positive");
  PulseSegment seg;
  seg.target = tr.target;
  seg.freq = tr.freq;
  seg.amp = hw.amp_for(hw.rabi_ghz, tr.target);
  seg.phase = phi + tr.matrix_phase;
  seg.tau = theta / (2.0 * pi * hw.rabi_ghz * tr.matrix_element);
  seg.t0 = 0.5 * seg.tau;
  return seg;
}

SemiresonantPulse semiresonant_phase(double delta, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("semiresonant_phase: gamma must be positive");
  const double omega = std::sqrt(delta * delta + 4.0 * gamma * gamma);
  return {pi * (1.0 - delta / omega), 1.0 / omega};
}

double semiresonant_detuning(double phi, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("semiresonant_detuning: gamma must be positive");
  if (!(phi > 0.0 && phi < 2.0 * pi)) throw std::invalid_argument("semiresonant_detuning: phi must lie in (0, 2 pi)");
  const double x = 1.0 - phi / pi;
  return 2.0 * gamma * x / std::sqrt(1.0 - x * x);
}

ScheduleBuilder& ScheduleBuilder::pulse(PulseSegment seg) {
  seg.t0 = cursor_ + 0.5 * seg.tau;
  cursor_ += seg.tau;
  sched_.segments.push_back(std::move(seg));
  sched_.total_time = std::max(sched_.total_time, cursor_);
  return *this;
}

ScheduleBuilder& ScheduleBuilder::tones(std::vector<PulseSegment> segs) {
  double longest = 0.0;
  for (auto& s : segs) {
    s.t0 = cursor_ + 0.5 * s.tau;
    longest = std::max(longest, s.tau);
    sched_.segments.push_back(std::move(s));
  }
  if (segs.size() > 1) sched_.multi_tone = true;
  cursor_ += longest;
  sched_.total_time = std::max(sched_.total_time, cursor_);
  return *this;
}

ScheduleBuilder& ScheduleBuilder::wait(double duration) {
  if (duration < 0.0) throw std::invalid_argument("ScheduleBuilder::wait: negative duration");
  cursor_ += duration;
  sched_.total_time = std::max(sched_.total_time, cursor_);
  return *this;
}

ScheduleBuilder& ScheduleBuilder::ramp(double duration, double omega0) {
  if (duration < 0.0) throw std::invalid_argument("ScheduleBuilder::ramp: negative duration");
  sched_.detuning_ramps.push_back({cursor_, duration, omega0});
  cursor_ += duration;
  sched_.total_time = std::max(sched_.total_time, cursor_);
  return *this;
}

PulseSchedule ScheduleBuilder::build() const {
  sched_.validate();
  return sched_;
}

PulseSchedule hadamard_schedule(const std::string& qubit, double qubit_freq, const HardwareCalibration& hw) {
  Transition tr;
  tr.target = qubit;
  tr.freq = qubit_freq;
  tr.upper = 0;
  tr.lower = 1;
  ScheduleBuilder b;
  b.pulse(rotation_pulse(pi / 2, pi / 2, tr, hw)).pulse(rotation_pulse(0.0, pi, tr, hw));
  auto s = b.build();
  // R_x(pi) R_y(pi/2) = -i H
  s.metadata["global_phase"] = pi / 2;
  return s;
}

bool is_selective(double tau, double separation) { return tau > 0.0 && 1.0 / tau < 0.2 * separation; }

std::vector<int> trimer_computational_states() {
  const SpinRegister reg = trimer_register();
  return {reg.flat_index({0, 1, 0}), reg.flat_index({0, 1, 1}), reg.flat_index({1, 1, 0}), reg.flat_index({1, 1, 1})};
}

namespace {

const char* updown(int level) { return level == 0 ? "up" : "down"; }

struct SwitchLines {
  std::vector<Transition> lines;  // (up,up), (up,down), (down,up), (down,down)
};

SwitchLines switch_lines(const TrimerSpec& spec) {
  const SpinRegister reg = trimer_register();
  const Spectrum sp = dressed_spectrum(build_trimer(spec));
  SwitchLines out;
  for (int l1 : {0, 1}) {
    for (int l3 : {0, 1}) {
      out.lines.push_back(find_transition(sp, reg, "switch", reg.flat_index({l1, 1, l3}), reg.flat_index({l1, 0, l3})));
    }
  }
  return out;
}

void check_exchange_regime(const TrimerSpec& spec) {
  const double jperp = std::max({std::abs(spec.J1(0)), std::abs(spec.J1(1)), std::abs(spec.J2(0)), std::abs(spec.J2(1))});
  const double mub = units::bohr_magneton_ghz_per_tesla * spec.B;
  const double gap = std::min(std::abs(spec.g1(2) - spec.g2(2)), std::abs(spec.g3(2) - spec.g2(2))) * mub;
  if (gap <= 0.0 || jperp > 0.1 * gap) {
    warn("switch gate: transverse exchange " + fmt(jperp) + " GHz is not small against the qubit-switch Zeeman gap " +
         fmt(gap) + " GHz; flip-flop admixture will degrade the gate");
  }
}

void check_resolved(const SwitchLines& sl, double drive_freq, double tau, double& min_sep) {
  min_sep = std::numeric_limits<double>::infinity();
  int nearest = -1;
  for (int k = 1; k < 4; ++k) {
    const double sep = std::abs(sl.lines[k].freq - drive_freq);
    if (sep < min_sep) {
      min_sep = sep;
      nearest = k;
    }
  }
  if (!is_selective(tau, min_sep)) {
    const int l1 = nearest / 2, l3 = nearest % 2;
    throw CompileError("switch gate: drive at " + fmt(drive_freq) + " GHz for (m1,m3)=(up,up) and the line for (m1,m3)=(" +
                       updown(l1) + "," + updown(l3) + ") at " + fmt(sl.lines[nearest].freq) + " GHz are " +
                       fmt(min_sep) + " GHz apart; pulse bandwidth 1/tau = " + fmt(1.0 / tau) +
                       " GHz must be below 0.2 x separation");
  }
}

void record_switch_phases(PulseSchedule& s, double phi) {
  // Driving the (up,up) line puts the phase on |00>; equal to c-phi on |11> up to
  // these z phases on each qubit's |1> and a global phase.
  s.metadata["conditional_phase"] = phi;
  s.metadata["local_phase_q1"] = phi;
  s.metadata["local_phase_q3"] = phi;
  s.metadata["global_phase"] = -phi;
}

}  // namespace

SwitchGateReport compile_cz_switch(const TrimerSpec& spec, const HardwareCalibration& hw) {
  check_exchange_regime(spec);
  const SwitchLines sl = switch_lines(spec);
  const Transition& tr = sl.lines[0];
  PulseSegment seg = rotation_pulse(0.0, 2.0 * pi, tr, hw);
  SwitchGateReport rep;
  check_resolved(sl, tr.freq, seg.tau, rep.min_separation);
  ScheduleBuilder b;
  b.pulse(seg);
  rep.schedule = b.build();
  record_switch_phases(rep.schedule, pi);
  rep.schedule.metadata["target_freq"] = tr.freq;
  rep.target_freq = tr.freq;
  for (const auto& l : sl.lines) rep.switch_freqs.push_back(l.freq);
  return rep;
}

SwitchGateReport compile_cphi_switch(const TrimerSpec& spec, double phi, const HardwareCalibration& hw) {
  const double phase = std::fmod(std::fmod(phi, 2.0 * pi) + 2.0 * pi, 2.0 * pi);
  if (phase < 1e-9 || phase > 2.0 * pi - 1e-9) throw std::invalid_argument("compile_cphi_switch: phi must not be 0 mod 2 pi");
  check_exchange_regime(spec);
  const SwitchLines sl = switch_lines(spec);
  const Transition& tr = sl.lines[0];
  const double gamma = 0.5 * hw.rabi_ghz * tr.matrix_element;
  const double delta = semiresonant_detuning(phase, gamma);
  const auto sr = semiresonant_phase(delta, gamma);
  PulseSegment seg;
  seg.target = tr.target;
  seg.freq = tr.freq + delta;
  seg.amp = hw.amp_for(hw.rabi_ghz, tr.target);
  seg.phase = tr.matrix_phase;
  seg.tau = sr.tau;
  SwitchGateReport rep;
  check_resolved(sl, seg.freq, seg.tau, rep.min_separation);
  ScheduleBuilder b;
  b.pulse(seg);
  rep.schedule = b.build();
  record_switch_phases(rep.schedule, phase);
  rep.schedule.metadata["target_freq"] = tr.freq;
  rep.schedule.metadata["detuning"] = delta;
  rep.target_freq = tr.freq;
  for (const auto& l : sl.lines) rep.switch_freqs.push_back(l.freq);
  return rep;
}

ConditionalPhaseReport analyse_conditional_phase(const Operator& block, double phi_target) {
  if (block.rows() != 4 || block.cols() != 4) throw std::invalid_argument("analyse_conditional_phase: need a 4x4 block");
  ConditionalPhaseReport r;
  for (int k = 0; k < 4; ++k) r.phases(k) = std::arg(block(k, k));
  const auto& d = r.phases;
  r.conditional_phase = wrap_phase(d(0) - d(1) - d(2) + d(3));
  // Least-squares split of the diagonal phases into global + local z phases +
  // conditional term; the residual error is shared equally over the four entries.
  const double err = wrap_phase(r.conditional_phase + phi_target);
  r.global_phase = wrap_phase(d(0) - err / 4);
  r.local_phase_second = wrap_phase(d(1) + err / 4 - r.global_phase);
  r.local_phase_first = wrap_phase(d(2) + err / 4 - r.global_phase);
  Operator ideal = Operator::Zero(4, 4);
  ideal(0, 0) = 1.0;
  ideal(1, 1) = std::polar(1.0, r.local_phase_second);
  ideal(2, 2) = std::polar(1.0, r.local_phase_first);
  ideal(3, 3) = std::polar(1.0, r.local_phase_first + r.local_phase_second - phi_target);
  ideal *= std::polar(1.0, r.global_phase);
  r.fidelity = std::norm((ideal.adjoint() * block).trace()) / 16.0;
  r.leakage = 1.0 - block.squaredNorm() / 4.0;
  return r;
}

namespace {

double level_energy(const PhotonCoupledSpin& sp, double B, int level) {
  const double m = sp.s - level;
  return sp.g * units::bohr_magneton_ghz_per_tesla * B * m + sp.D * m * m;
}

double sx_element(double s, int a, int b) { return std::abs(spin_operators(s).Sx(a, b)); }

void check_level(const PhotonCoupledSpin& sp, int level, const char* what) {
  if (level < 0 || level >= static_cast<int>(std::lround(2 * sp.s)) + 1) {
    throw std::invalid_argument(std::string("compile_cphase_photon: level '") + what + "' out of range");
  }
}

// Smallest distance from `freq` to the listed |gaps|.
double nearest_gap(double freq, const std::vector<double>& gaps) {
  double best = std::numeric_limits<double>::infinity();
  for (double g : gaps) best = std::min(best, std::abs(freq - std::abs(g)));
  return best;
}

}  // namespace

PhotonGateReport compile_cphase_photon(const SpinPhotonSpec& spec, double phi, const HardwareCalibration& hw,
                                       const std::vector<PhotonGateLevels>& levels) {
  if (spec.spins.size() != 2) throw std::invalid_argument("compile_cphase_photon: need exactly two spins");
  if (levels.size() != 2) throw std::invalid_argument("compile_cphase_photon: need levels for both spins");
  const auto& q1 = spec.spins[0];
  const auto& q2 = spec.spins[1];
  const auto& l1 = levels[0];
  const auto& l2 = levels[1];
  check_level(q1, l1.zero, "zero");
  check_level(q1, l1.one, "one");
  check_level(q2, l2.zero, "zero");
  check_level(q2, l2.one, "one");
  check_level(q2, l2.aux, "aux");
  if (std::abs(l1.one - l1.zero) != 1 || std::abs(l2.aux - l2.one) != 1) {
    throw CompileError("compile_cphase_photon: photon transitions must change m by one");
  }
  if (q1.G == 0.0 || q2.G == 0.0) throw CompileError("compile_cphase_photon: both spins must couple to the resonator");

  const double gap_emit = level_energy(q1, spec.B, l1.one) - level_energy(q1, spec.B, l1.zero);
  const double gap_aux = level_energy(q2, spec.B, l2.aux) - level_energy(q2, spec.B, l2.one);
  if (gap_emit <= 0.0) throw CompileError("compile_cphase_photon: spin 0 level 'one' must lie above 'zero' to emit");
  if (gap_aux <= 0.0) throw CompileError("compile_cphase_photon: spin 1 level 'aux' must lie above 'one' to absorb");
  const double c1 = 2.0 * q1.G * sx_element(q1.s, l1.one, l1.zero);
  const double c2 = 2.0 * q2.G * sx_element(q2.s, l2.aux, l2.one);

  if (hw.coherence_time_ns > 0.0) {
    for (const auto& sp : spec.spins) {
      if (sp.G * hw.coherence_time_ns < 10.0) {
        warn("compile_cphase_photon: coupling G = " + fmt(sp.G) + " GHz is not strong against the coherence time " +
             fmt(hw.coherence_time_ns) + " ns (G T < 10)");
      }
    }
  }

  PhotonGateReport rep;
  rep.emit_time = 1.0 / (4.0 * c1);
  rep.omega_emit = gap_emit;

  const auto gap = [&](const PhotonCoupledSpin& sp, int a, int b) {
    return level_energy(sp, spec.B, a) - level_energy(sp, spec.B, b);
  };
  std::vector<double> q2_gaps;
  for (int lv : {l2.zero, l2.one}) {
    for (int nb : {lv - 1, lv + 1}) {
      if (nb >= 0 && nb <= static_cast<int>(std::lround(2 * q2.s))) q2_gaps.push_back(gap(q2, nb, lv));
    }
  }
  const double sep_emit = nearest_gap(gap_emit, q2_gaps);
  if (!is_selective(rep.emit_time, sep_emit)) {
    throw CompileError("compile_cphase_photon: emission line " + fmt(gap_emit) + " GHz is within " + fmt(sep_emit) +
                       " GHz of a spin 1 transition; bandwidth " + fmt(1.0 / rep.emit_time) + " GHz is too large");
  }

  const double phase = std::fmod(std::fmod(phi, 2.0 * pi) + 2.0 * pi, 2.0 * pi);
  const bool skip_phase = phase < 1e-9 || phase > 2.0 * pi - 1e-9;
  double local_q1 = pi;  // emission followed by reabsorption flips the sign of spin 0's |1>
  if (!skip_phase) {
    const double delta = semiresonant_detuning(phase, c2);
    const auto sr = semiresonant_phase(delta, c2);
    rep.phase_time = sr.tau;
    rep.omega_phase = gap_aux + delta;
    std::vector<double> others{gap(q1, l1.one, l1.zero), gap(q2, l2.one, l2.zero)};
    const double sep = nearest_gap(rep.omega_phase, others);
    if (!is_selective(rep.phase_time, sep)) {
      throw CompileError("compile_cphase_photon: phase step at " + fmt(rep.omega_phase) + " GHz is within " + fmt(sep) +
                         " GHz of another photon transition; bandwidth " + fmt(1.0 / rep.phase_time) +
                         " GHz is too large");
    }
    // The photon carried by spin 0's |1> branch accumulates its detuning from the emission line.
    local_q1 -= 2.0 * pi * (rep.omega_phase - gap_emit) * rep.phase_time;
  }

  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& sp : spec.spins) {
    for (int k = 0; k + 1 < static_cast<int>(std::lround(2 * sp.s)) + 1; ++k) {
      lowest = std::min(lowest, std::abs(gap(sp, k, k + 1)));
    }
  }
  rep.omega_idle = 0.5 * lowest;

  const double idle = 1.0;
  ScheduleBuilder b;
  b.ramp(idle, rep.omega_idle).ramp(rep.emit_time, rep.omega_emit);
  if (!skip_phase) b.ramp(rep.phase_time, rep.omega_phase);
  b.ramp(rep.emit_time, rep.omega_emit).ramp(idle, rep.omega_idle);
  rep.schedule = b.build();
  rep.schedule.metadata["conditional_phase"] = skip_phase ? 0.0 : phase;
  rep.schedule.metadata["local_phase_q1"] = wrap_phase(local_q1);
  rep.schedule.metadata["local_phase_q2"] = 0.0;
  rep.schedule.metadata["global_phase"] = 0.0;
  return rep;
}

State evolve_spin_photon(const SpinPhotonSpec& spec, const PulseSchedule& sched, const State& psi0) {
  std::vector<DetuningRamp> ramps = sched.detuning_ramps;
  std::sort(ramps.begin(), ramps.end(), [](const auto& a, const auto& b) { return a.t_start < b.t_start; });
  std::map<double, Operator> cache;
  const auto hamiltonian = [&](double omega0) -> const Operator& {
    auto it = cache.find(omega0);
    if (it == cache.end()) {
      SpinPhotonSpec s = spec;
      s.omega0 = omega0;
      it = cache.emplace(omega0, build_spin_photon(s)).first;
    }
    return it->second;
  };
  State psi = psi0;
  double t = 0.0;
  for (const auto& r : ramps) {
    if (r.t_start > t + 1e-12) psi = matexp_unitary(hamiltonian(spec.omega0), r.t_start - t) * psi;
    if (r.duration > 0.0) psi = matexp_unitary(hamiltonian(r.omega0), r.duration) * psi;
    t = std::max(t, r.t_start + r.duration);
  }
  if (sched.total_time > t + 1e-12) psi = matexp_unitary(hamiltonian(spec.omega0), sched.total_time - t) * psi;
  return psi;
}

}  // namespace molspin
