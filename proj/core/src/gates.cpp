#include "molspin/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molspin {

namespace {
constexpr cplx I{0.0, 1.0};
}

Operator rotation(char axis, double theta) {
  Operator sigma;
  switch (axis) {
    case 'x': sigma = pauli_x(); break;
    case 'y': sigma = pauli_y(); break;
    case 'z': sigma = pauli_z(); break;
    default: throw std::invalid_argument(std::string("rotation: unknown axis '") + axis + "'");
  }
  return std::cos(theta / 2) * identity(2) - I * std::sin(theta / 2) * sigma;
}

Operator rotation_xy(double phi, double theta) {
  const Operator n = std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y();
  return std::cos(theta / 2) * identity(2) - I * std::sin(theta / 2) * n;
}

Operator hadamard() {
  Operator h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Operator cphase(double phi) {
  Operator u = identity(4);
  u(3, 3) = std::polar(1.0, -phi);
  return u;
}

Operator cnot() {
  Operator u = Operator::Zero(4, 4);
  u(0, 0) = u(1, 1) = 1;
  u(2, 3) = u(3, 2) = 1;
  return u;
}

Operator uxy_gate(double gamma_ghz, double tau_ns) {
  if (gamma_ghz < 0) throw std::invalid_argument("uxy_gate: Gamma must be non-negative");
  const double half = std::numbers::pi * gamma_ghz * tau_ns;
  Operator u = identity(4);
  u(1, 1) = u(2, 2) = std::cos(half);
  u(1, 2) = u(2, 1) = I * std::sin(half);
  return u;
}

Operator transition_rotation(int dim, int upper, int lower, double theta, double phi) {
  if (upper == lower || upper < 0 || lower < 0 || upper >= dim || lower >= dim) {
    throw std::invalid_argument("transition_rotation: invalid level pair");
  }
  Operator u = identity(dim);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  u(upper, upper) = c;
  u(lower, lower) = c;
  u(upper, lower) = -I * s * std::polar(1.0, -phi);
  u(lower, upper) = -I * s * std::polar(1.0, phi);
  return u;
}

Gate single_qubit_gate(std::string name, int qubit, Operator matrix) {
  return {std::move(name), {qubit}, std::move(matrix)};
}

Gate two_qubit_gate(std::string name, int first, int second, Operator matrix) {
  return {std::move(name), {first, second}, std::move(matrix)};
}

Gate global_phase_gate(double phase) { return {"phase", {}, Operator::Constant(1, 1, std::polar(1.0, phase))}; }

Operator gate_unitary(const Gate& gate, int n_qubits) {
  const int dim = 1 << n_qubits;
  const int k = static_cast<int>(gate.qubits.size());
  if (gate.matrix.rows() != (1 << k)) throw std::invalid_argument("gate '" + gate.name + "': matrix size mismatch");
  if (k == 0) return gate.matrix(0, 0) * identity(dim);
  int mask = 0;
  for (int q : gate.qubits) {
    if (q < 0 || q >= n_qubits) throw std::out_of_range("gate '" + gate.name + "': qubit out of range");
    mask |= 1 << (n_qubits - 1 - q);
  }
  auto sub_index = [&](int full) {
    int s = 0;
    for (int q : gate.qubits) s = (s << 1) | ((full >> (n_qubits - 1 - q)) & 1);
    return s;
  };
  Operator u = Operator::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    for (int col = 0; col < dim; ++col) {
      if ((row & ~mask) != (col & ~mask)) continue;
      u(row, col) = gate.matrix(sub_index(row), sub_index(col));
    }
  }
  return u;
}

Operator circuit_unitary(const std::vector<Gate>& gates, int n_qubits) {
  Operator u = identity(1 << n_qubits);
  for (const auto& g : gates) u = gate_unitary(g, n_qubits) * u;
  return u;
}

}  // namespace molspin
