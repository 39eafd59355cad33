#pragma once

#include "molspin/spin_core.hpp"

#include <string>
#include <vector>

namespace molspin {

// R_a(theta) = exp(-i theta sigma_a / 2) for a in {x, y, z}.
Operator rotation(char axis, double theta);

// Rotation about (cos phi, sin phi, 0).
Operator rotation_xy(double phi, double theta);

// (1/sqrt 2) [[1, 1], [1, -1]].
Operator hadamard();

// diag(1, 1, 1, e^{-i phi}).
Operator cphase(double phi);

// Control is the first (most significant) qubit.
Operator cnot();

// Flip-flop gate [[1,0,0,0],[0,c,is,0],[0,is,c,0],[0,0,0,1]] with
// c = cos(a/2), s = sin(a/2) and a = 2 pi Gamma tau (Gamma in GHz, tau in ns).
Operator uxy_gate(double gamma_ghz, double tau_ns);

// Two-level rotation between levels `upper` and `lower` of a d-level system,
// exp(-i theta/2 (e^{-i phi} |upper><lower| + h.c.)), identity elsewhere.
Operator transition_rotation(int dim, int upper, int lower, double theta, double phi);

struct Gate {
  std::string name;
  std::vector<int> qubits;  // qubit 0 is the most significant tensor factor
  Operator matrix;          // acts on the listed qubits in the listed order
};

Gate single_qubit_gate(std::string name, int qubit, Operator matrix);
Gate two_qubit_gate(std::string name, int first, int second, Operator matrix);
Gate global_phase_gate(double phase);

// Lifts a gate to n qubits.
Operator gate_unitary(const Gate& gate, int n_qubits);

// Product of the gates applied left to right in time order (first gate acts first).
Operator circuit_unitary(const std::vector<Gate>& gates, int n_qubits);

}  // namespace molspin
