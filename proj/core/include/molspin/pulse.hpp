#pragma once

#include "molspin/hamiltonians.hpp"
#include "molspin/spin_core.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace molspin {

enum class PulseShape { rectangular };

// One circularly polarized drive tone. A negative frequency drives the
// opposite rotation sense, which is how transitions with E(m+1) < E(m) are reached.
struct PulseSegment {
  std::string target;  // site label
  double freq = 0.0;   // GHz
  double amp = 0.0;    // B1, tesla
  double phase = 0.0;  // rad
  double t0 = 0.0;     // center, ns
  double tau = 0.0;    // duration, ns
  PulseShape shape = PulseShape::rectangular;

  double start() const { return t0 - 0.5 * tau; }
  double end() const { return t0 + 0.5 * tau; }
  bool active(double t) const { return t >= start() && t <= end(); }
};

// Resonator frequency held at omega0 on [t_start, t_start + duration).
struct DetuningRamp {
  double t_start = 0.0;
  double duration = 0.0;
  double omega0 = 0.0;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  std::vector<DetuningRamp> detuning_ramps;
  double total_time = 0.0;
  bool multi_tone = false;
  // Bookkeeping such as single-qubit z phases left for software correction.
  std::map<std::string, double> metadata;

  // Throws if two segments on one target overlap and multi_tone is false.
  void validate() const;
};

// Drive calibration. rabi_ghz is gamma = g_perp mu_B B1 for a spin 1/2.
struct HardwareCalibration {
  double rabi_ghz = 0.05;
  double g_perp_default = 2.0;
  std::map<std::string, double> g_perp;
  double coherence_time_ns = 0.0;  // 0 disables strong-coupling checks

  double g_perp_for(const std::string& target) const;
  double amp_for(double rabi, const std::string& target) const;
  double rabi_for(double amp, const std::string& target) const;
};

// g_perp mu_B B1 [s_x cos(w t + phi) + s_y sin(w t + phi)] on the target site,
// zero outside the rectangular window.
Operator drive_hamiltonian(const PulseSegment& p, const SpinRegister& reg, double t, const HardwareCalibration& hw);

// Per-site rotating-frame frequencies (GHz).
struct FrameSpec {
  std::map<std::string, double> rotation_freqs;
};

// Static Hamiltonian plus one drive, seen in the frame rotating about z at the
// frame frequencies. For a spin 1/2 with H = dE s_z this is
// (dE - f) s_z + gamma (s_x cos phi + s_y sin phi).
Operator to_rotating_frame(const Operator& h_static, const PulseSegment& drive, const FrameSpec& frame,
                           const SpinRegister& reg, const HardwareCalibration& hw);

using TimeDependentHamiltonian = std::function<Operator(double)>;

struct PropagationOptions {
  double dt = 0.0;     // 0 selects 1 / (20 f_max)
  double f_max = 0.0;  // 0 estimates from the spectral width of H(t0)
  std::vector<double> breakpoints;  // times where H(t) may jump
};

// Midpoint exponential stepping. Steps never straddle a breakpoint.
State propagate(const TimeDependentHamiltonian& h, const State& psi0, double t0, double t1,
                const PropagationOptions& opts = {});
Operator propagate_unitary(const TimeDependentHamiltonian& h, int dim, double t0, double t1,
                           const PropagationOptions& opts = {});

// Static Hamiltonian plus a pulse schedule on a register.
class DrivenSystem {
 public:
  DrivenSystem(SpinRegister reg, Operator h_static, PulseSchedule schedule, HardwareCalibration hw);

  Operator hamiltonian(double t) const;
  double max_frequency() const;
  std::vector<double> breakpoints() const;

  State evolve(const State& psi0, double dt = 0.0) const;
  Operator evolve_unitary(double dt = 0.0) const;

  // Propagator with the free evolution under the static Hamiltonian removed,
  // exp(+i 2 pi H0 T) U(T).
  Operator interaction_frame_unitary(double dt = 0.0) const;

  // Samples the state on a uniform grid of n_samples+1 points including both ends.
  std::vector<std::pair<double, State>> trace(const State& psi0, int n_samples, double dt = 0.0) const;

  const SpinRegister& reg() const { return reg_; }
  const Operator& h_static() const { return h0_; }
  const PulseSchedule& schedule() const { return schedule_; }

 private:
  SpinRegister reg_;
  Operator h0_;
  PulseSchedule schedule_;
  HardwareCalibration hw_;
  std::vector<std::size_t> target_sites_;
  std::vector<Operator> splus_, sminus_;
  double f_max_ = 0.0;
};

// A transition between two eigenstates of a static Hamiltonian driven on one site.
struct Transition {
  std::string target;
  double freq = 0.0;            // E_upper - E_lower, GHz (may be negative)
  double matrix_element = 1.0;  // |<upper| S+ |lower>| on the target site
  double matrix_phase = 0.0;    // arg <upper| S+ |lower>
  int upper = 0, lower = 1;     // eigenstate indices
};

// Eigenstates of a static Hamiltonian labelled by the product state they overlap most.
struct Spectrum {
  Eigen::VectorXd energies;   // indexed by product-state label
  Operator states;            // column k is the dressed version of product state k
  Eigen::VectorXd overlap;    // |<k|dressed k>|^2
};

Spectrum dressed_spectrum(const Operator& h_static);

// Transition raising the target site by one unit of m between dressed product states.
Transition find_transition(const Spectrum& spec, const SpinRegister& reg, const std::string& target, int lower_state,
                           int upper_state);

// Resonant segment rotating the transition by theta about (cos phi, sin phi, 0).
// Duration tau = theta / (2 pi gamma |M|). The segment is centered at tau/2.
PulseSegment rotation_pulse(double phi, double theta, const Transition& tr, const HardwareCalibration& hw);

struct SemiresonantPulse {
  double phi = 0.0;  // phase acquired by the driven state, e^{-i phi}
  double tau = 0.0;  // ns
};

// Detuned 2 pi pulse on a two-level transition with off-diagonal element
// `gamma` (GHz) and detuning delta = f_drive - f_transition (GHz):
// tau = 1/sqrt(delta^2 + 4 gamma^2), phi = pi [1 - delta/sqrt(delta^2 + 4 gamma^2)].
SemiresonantPulse semiresonant_phase(double delta, double gamma);

// Detuning that yields phase phi in (0, 2 pi) for coupling gamma.
double semiresonant_detuning(double phi, double gamma);

// Appends segments back to back.
class ScheduleBuilder {
 public:
  ScheduleBuilder& pulse(PulseSegment seg);
  // Simultaneous tones sharing one time window.
  ScheduleBuilder& tones(std::vector<PulseSegment> segs);
  ScheduleBuilder& wait(double duration);
  ScheduleBuilder& ramp(double duration, double omega0);
  double now() const { return cursor_; }
  PulseSchedule build() const;
  PulseSchedule& schedule() { return sched_; }

 private:
  PulseSchedule sched_;
  double cursor_ = 0.0;
};

// Hadamard on a spin-1/2 qubit site: R_y(pi/2) then R_x(pi).
PulseSchedule hadamard_schedule(const std::string& qubit, double qubit_freq, const HardwareCalibration& hw);

// Bandwidth rule: a segment of duration tau is selective when
// 1/tau < 0.2 * (nearest off-resonant separation).
bool is_selective(double tau, double separation);

struct SwitchGateReport {
  PulseSchedule schedule;
  double target_freq = 0.0;
  double min_separation = 0.0;
  std::vector<double> switch_freqs;  // (m1, m3) = (up,up), (up,down), (down,up), (down,down)
};

// cZ between the two qubits of a trimer: one 2 pi pulse on the switch resonance
// for both qubits up. Throws CompileError when the switch lines are unresolved.
SwitchGateReport compile_cz_switch(const TrimerSpec& spec, const HardwareCalibration& hw);

// c-phi via a semi-resonant 2 pi pulse on the same switch transition.
SwitchGateReport compile_cphi_switch(const TrimerSpec& spec, double phi, const HardwareCalibration& hw);

// Computational basis of the trimer (switch down) as product-state indices:
// |00> = up,down,up; |01> = up,down,down; |10> = down,down,up; |11> = down,down,down.
std::vector<int> trimer_computational_states();

struct ConditionalPhaseReport {
  Eigen::Vector4d phases;       // arg of the diagonal of the 4x4 block
  double conditional_phase = 0;  // phi00 - phi01 - phi10 + phi11, wrapped to (-pi, pi]
  double local_phase_first = 0;  // z phase on the first qubit's |1>
  double local_phase_second = 0;
  double global_phase = 0;
  double fidelity = 0;  // vs diag(1,1,1,e^{i conditional}) after removing local phases
  double leakage = 0;   // 1 - average population kept in the block
};

// Analyses a 4x4 block against diag(1,1,1,e^{-i phi_target}) up to local z phases.
ConditionalPhaseReport analyse_conditional_phase(const Operator& block, double phi_target);

struct PhotonGateLevels {
  int zero = 2, one = 1, aux = 0;  // S_z level indices (m = s - index)
};

struct PhotonGateReport {
  PulseSchedule schedule;
  double emit_time = 0.0;
  double phase_time = 0.0;
  double omega_idle = 0.0;
  double omega_emit = 0.0;
  double omega_phase = 0.0;
};

// Controlled phase between two spins sharing a resonator, by tuning the resonator
// through emission on spin 0, a semi-resonant 2 pi cycle on spin 1's aux
// transition, and reabsorption on spin 0.
PhotonGateReport compile_cphase_photon(const SpinPhotonSpec& spec, double phi, const HardwareCalibration& hw,
                                       const std::vector<PhotonGateLevels>& levels = {{}, {}});

// Piecewise-constant evolution of the spin-photon system through the ramps.
State evolve_spin_photon(const SpinPhotonSpec& spec, const PulseSchedule& sched, const State& psi0);

}  // namespace molspin
