#pragma once

#include "molspin/gates.hpp"
#include "molspin/pulse.hpp"
#include "molspin/spin_core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace molspin {

// Product formula for exp(-i 2 pi (sum H_i) t).
struct TrotterPlan {
  std::vector<Operator> terms;  // GHz
  double t = 0.0;               // ns
  int n = 1;
};

enum class TrotterOrder { first, symmetric };

// (prod_i exp(-i 2 pi H_i t/n))^n with the first term acting first; the
// symmetric variant uses the Strang splitting of each slice.
Operator trotterize(const TrotterPlan& plan, TrotterOrder order = TrotterOrder::first);
Operator exact_propagator(const TrotterPlan& plan);

// Operator-norm distance between one slice and the exact slice exp(-i 2 pi H t/n).
double trotter_slice_error(const TrotterPlan& plan, TrotterOrder order = TrotterOrder::first);
// Operator-norm distance between the full product formula and the exact propagator.
double trotter_error(const TrotterPlan& plan, TrotterOrder order = TrotterOrder::first);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// H = b sum_i s_x,i + J sum_<ij> s_z,i s_z,j on an open chain (the pair for n_spins = 2).
struct TfimSpec {
  double b = 1.0;  // GHz
  double J = 1.0;  // GHz
  int n_spins = 2;
};

// {field term, Ising term}.
std::vector<Operator> tfim_terms(const TfimSpec& spec);
Operator tfim_hamiltonian(const TfimSpec& spec);

// Gates for exp(-i 2 pi H_Ising tau) exp(-i 2 pi H_field tau): x rotations by
// 2 pi b tau, then per bond z rotations by pi J tau on both spins and a
// controlled phase of 2 pi J tau, with the global phase kept as a gate.
std::vector<Gate> tfim_step_circuit(const TfimSpec& spec, double tau);

struct TfimTrace {
  std::vector<double> t, trotter, exact;  // mean <s_z> per spin, all spins start up
  double rms_deviation = 0.0;
  double peak_to_peak = 0.0;              // of the exact trace
};

// Samples after each of the n slices of [0, t_final].
TfimTrace tfim_magnetization_trace(const TfimSpec& spec, double t_final, int n);

// Single-spin pi/2 rotations W (on both spins) with exp(-i phi s_a1 s_b2) = W^+ exp(-i phi s_z1 s_z2) W.
struct PauliConjugation {
  char axis1 = 'z', axis2 = 'z';
  Operator w1, w2;  // 2x2 wrappers per spin

  Operator wrapper() const { return kron(w1, w2); }
};

PauliConjugation pauli_conjugate(char axis1, char axis2);

// exp(-i phi s_a1 s_b2) as W, exp(-i phi s_z1 s_z2), W^+.
std::vector<Gate> two_spin_coupling_circuit(char axis1, char axis2, double phi);

// exp(-i theta (s_x1 s_x2 + s_y1 s_y2)) from one flip-flop gate at coupling
// gamma; a z pi rotation on spin 1 around it sets the sign.
std::vector<Gate> xy_coupling_circuit(double gamma_ghz, double theta);

// exp(-i theta s_1 . s_2) from three flip-flop gates and pi/2 wrappers.
std::vector<Gate> heisenberg_from_uxy(double gamma_ghz, double theta);

// Truncated boson on the 2S+1 levels of a spin, vacuum at m = -S.
enum class BosonEncoding {
  spin_ladder,  // a = S_- / sqrt(2S): the bare ladder, exact only as occupation / S -> 0
  exact,        // a = sum sqrt(n) |n-1><n|, realised with level-selective transition amplitudes
};

struct SpinBosonMap {
  double S = 0.5;
  Operator creation, annihilation, number;  // number = S_z + S

  int level_of_occupation(int n) const { return static_cast<int>(2 * S + 0.5) - n; }
};

SpinBosonMap spin_boson_map(double S, BosonEncoding encoding = BosonEncoding::spin_ladder);

// Quantum Rabi model omega a^+ a + (qubit_freq / 2) sigma_z + g sigma_x (a + a^+).
struct RabiModelSpec {
  double omega = 1.0;       // GHz
  double qubit_freq = 1.0;  // GHz
  double g = 0.1;           // GHz
  int initial_photons = 0;
  bool qubit_up = true;
};

// <sigma_z>(t) with the boson encoded in a spin S qudit.
std::vector<double> rabi_model_qudit(const RabiModelSpec& spec, double S, BosonEncoding encoding,
                                     const std::vector<double>& times);
// <sigma_z>(t) for an explicitly truncated boson with n_max photons.
std::vector<double> rabi_model_boson(const RabiModelSpec& spec, int n_max, const std::vector<double>& times);

// Fermion operators on N spins 1/2: c_j^+ = (prod_{k<j} -sigma_z,k) sigma_+,j.
struct FermionMode {
  Operator c, c_dag;
};

FermionMode jordan_wigner(int j, int n_modes);

// H = D S_z^2 + E (S_x^2 - S_y^2).
struct TunnelingSpec {
  double S = 1.0;
  double D = -1.0;  // GHz
  double E = 0.05;  // GHz
};

Operator tunneling_hamiltonian(const TunnelingSpec& spec);

struct TunnelingTrace {
  std::vector<double> t, sz, norm;
};

// Starts in m = S. Warns when |E| is not small against |D|.
TunnelingTrace tunneling_simulation(const TunnelingSpec& spec, const std::vector<double>& times);

// Period of <S_z> for S = 1, where the m = +-1 doublet is split by 2E.
double tunneling_period_spin1(const TunnelingSpec& spec);

// Grover search on the levels of a single qudit.
struct GroverTone {
  double rabi = 0.0;      // GHz, on a spin 1/2
  double detuning = 0.0;  // GHz, drive minus transition
  double phase = 0.0;     // rad
};

struct GroverStage {
  std::vector<GroverTone> tones;  // one per adjacent transition (level k+1 -> k)
  double tau = 0.0;               // ns
};

// Qudit H0 = f0 I_z + p I_z^2 (GHz) with I = (d-1)/2.
struct GroverHardware {
  double f0 = 0.2;
  double p = 0.03;
  double max_rabi = 0.004;
  double max_detuning = 0.01;
  double min_tau = 50.0;
  double max_tau = 600.0;
  int max_evaluations = 1500;
};

struct GroverSpec {
  int d = 3;
  int marked = 0;
  int initial = -1;            // starting level; -1 uses the ground level
  std::vector<GroverStage> drive;  // pulse mode: empty runs the optimizer
};

enum class GroverMode { unitary, pulse };

struct GroverResult {
  std::vector<double> populations;         // final
  std::vector<double> stage1_populations;  // pulse mode only
  int iterations = 0;                      // unitary mode only
  std::vector<GroverStage> drive;          // pulse mode: the stages used
  PulseSchedule schedule;                  // pulse mode only
};

// Oracle phase flip on the marked level followed by inversion about the mean.
Operator grover_iterate(int d, int marked);
int grover_optimal_iterations(int d);

// Unitary mode runs the optimal number of iterates from the uniform state.
// Pulse mode drives the qudit with two multi-tone stages (superposition, then
// amplification), optimising the tone parameters when spec.drive is empty.
// Throws CompileError when two transition frequencies are not resolved.
GroverResult grover_qudit(const GroverSpec& spec, GroverMode mode, const GroverHardware& hw = {},
                          std::uint64_t seed = 1);

SpinRegister grover_register(int d);
Operator grover_static_hamiltonian(int d, const GroverHardware& hw);
// Transition frequencies level k+1 -> k, k = 0..d-2.
std::vector<double> grover_transition_freqs(int d, const GroverHardware& hw);
PulseSchedule grover_schedule(int d, const std::vector<GroverStage>& stages, const GroverHardware& hw);

}  // namespace molspin
