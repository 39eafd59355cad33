#pragma once

#include "molspin/hamiltonians.hpp"
#include "molspin/open_system.hpp"
#include "molspin/pulse.hpp"
#include "molspin/spin_core.hpp"

#include <random>
#include <string>
#include <vector>

namespace molspin {

// Logical code words, declared errors and derived error-space words.
struct CodeSpec {
  std::string name;
  State zero_l, one_l;
  std::vector<Operator> errors;
  std::vector<std::string> error_names;
  std::vector<State> error_words;  // orthonormal basis of the span of E_k|i_L> outside the code space
  Operator P_L, P_e;
};

// Fills error_words, P_L and P_e from the code words and errors.
CodeSpec make_code(std::string name, State zero_l, State one_l, std::vector<Operator> errors,
                   std::vector<std::string> error_names);

struct KnillLaflammeEntry {
  int k = 0, j = 0;
  double diagonal_mismatch = 0.0;  // |<0_L|E_k^+ E_j|0_L> - <1_L|E_k^+ E_j|1_L>|
  double off_diagonal = 0.0;       // max |<0_L|E_k^+ E_j|1_L>|, |<1_L|E_k^+ E_j|0_L>|
  bool pass = false;
};

struct KnillLaflammeReport {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<KnillLaflammeEntry> entries;
};

KnillLaflammeReport knill_laflamme_check(const CodeSpec& code, double tol = 1e-10);

// Shipped codes.
CodeSpec three_qubit_code();
CodeSpec amplitude_code();       // I = 5/2 nucleus (x) electron ancilla, errors {I, E+, E-}
CodeSpec spin32_code();          // bare spin 3/2, errors {I, S_z}
CodeSpec spin32_register_code(); // the same words on I = 3/2 (x) electron ancilla (ancilla down)
CodeSpec naive_spin32_code();    // |-3/2>, |3/2> with {I, S_z}; fails the conditions

// Dephasing code on a half-integer spin S <= 7/2 correcting {I, S_z, ..., S_z^k}:
// |0_L> on m = S, S-2, ..., |1_L> its mirror image, weights from the
// Knill-Laflamme moment conditions solved by least squares. Throws when no
// non-negative solution exists.
CodeSpec dephasing_code(double S, int k);

// Unit shift operators sum_m |m +- 1><m| on a spin s.
Operator shift_up(double s);
Operator shift_down(double s);

// Two-level rotation exp(-i theta/2 (e^{-i phi}|upper><lower| + h.c.)) between
// product states of a register, driven on `target`.
struct SelectiveRotation {
  std::string target;
  int upper = 0, lower = 1;
  double theta = 0.0, phi = 0.0;
};

// Rotations applied simultaneously (on disjoint level pairs).
using RotationLayer = std::vector<SelectiveRotation>;

Operator layer_unitary(const RotationLayer& layer, int dim);
Operator sequence_unitary(const std::vector<RotationLayer>& layers, int dim);

// Real Givens factorisation over adjacent levels. For an orthogonal matrix with
// det +1 on `levels` (product-state indices in descending m order), returns
// layers whose product equals it exactly. Throws for det -1.
std::vector<RotationLayer> givens_decomposition(const Eigen::MatrixXd& orthogonal, const std::vector<int>& levels,
                                                const std::string& target);

// Layers mapping the last k levels to the k real orthonormal columns of `isometry`.
std::vector<RotationLayer> givens_isometry(const Eigen::MatrixXd& isometry, const std::vector<int>& levels,
                                           const std::string& target);

// Lowers layers to a pulse schedule on a static Hamiltonian; each layer becomes
// one set of simultaneous tones. Throws CompileError for unresolved transitions.
PulseSchedule lower_to_pulses(const std::vector<RotationLayer>& layers, const Operator& h_static,
                              const SpinRegister& reg, const HardwareCalibration& hw);

struct SyndromeRecord {
  std::vector<int> outcomes;  // per measurement, stabiliser sign (+1/-1) or ancilla level (0 = up)
  std::string inferred;       // "none" or the error name
  std::string recovery;       // applied correction
  bool recoverable = true;
};

// Syndrome outcome selection: sample with rng when given, otherwise take the most likely branch.
struct CycleResult {
  SyndromeRecord record;
  State state;
};

State three_qubit_encode(cplx alpha, cplx beta);
// Measures Z1Z2 and Z1Z3 and applies X on the flagged qubit.
CycleResult three_qubit_correct(const State& psi, std::mt19937_64* rng = nullptr);

enum class ShiftError { none, down, up };

// Hyperfine register used by the amplitude code (axial coupling, no mixing).
HyperfineQuditSpec amplitude_code_hyperfine();
State amplitude_code_encode(cplx alpha, cplx beta);
// Applies the error, then the two-round detect/correct protocol.
CycleResult amplitude_code_cycle(const State& encoded, ShiftError error, std::mt19937_64* rng = nullptr);
// Round-by-round rotation layers: round 1 flips the ancilla for m in {-5/2, 1/2}, round 2 for {-1/2, 5/2}.
RotationLayer amplitude_detection_layer(int round);

HyperfineQuditSpec spin32_hyperfine();

struct EncodedState {
  State state;
  PulseSchedule schedule;
  std::vector<RotationLayer> layers;
};

// Prepares alpha|0_L> + beta|1_L> from alpha|-3/2> + beta|-1/2> on I = 3/2 (x) ancilla.
EncodedState spin32_encode(cplx alpha, cplx beta, const HardwareCalibration& hw);
std::vector<RotationLayer> spin32_encoding_layers();

// The detection/correction protocol as layers on I = 3/2 (x) ancilla.
struct Spin32Protocol {
  std::vector<RotationLayer> map;       // |0_L>,|e0>,|1_L>,|e1> -> |3/2>,|1/2>,|-1/2>,|-3/2>
  RotationLayer ancilla_flip;           // two-tone ancilla excitation for m in {1/2, -3/2}
  std::vector<RotationLayer> unmap;     // inverse of map
  std::vector<RotationLayer> recovery;  // |e0>,|e1> -> |0_L>,|1_L>
};
Spin32Protocol spin32_protocol();

CycleResult spin32_detect_correct(const State& psi, std::mt19937_64* rng = nullptr);

// Schedule of the detection stage (mapping and two-tone ancilla excitation).
// Throws CompileError when the ancilla lines are not resolved from the qudit lines.
PulseSchedule spin32_detection_schedule(const HardwareCalibration& hw);

// Memory experiment: encode, wait, detect and correct with dephasing x = S_z on
// the qudit at 1/T2 during pulses and waits.
struct QecTiming {
  double qudit_rabi_ghz = 0.01;
  double ancilla_rabi_ghz = 0.05;
  bool instantaneous = false;  // ideal noiseless pulses
};

struct MemoryPoint {
  double t_mem = 0.0;
  double e_corrected = 0.0;
  double e_reference = 0.0;
};

MemoryPoint qec_memory_point(double t_mem, double T2, const QecTiming& timing = {});
std::vector<MemoryPoint> qec_memory_experiment(const std::vector<double>& t_mem, double T2,
                                               const QecTiming& timing = {});

}  // namespace molspin
