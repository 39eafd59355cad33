#include "molspin/algorithms.hpp"

#include "molspin/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace molspin {

namespace {

constexpr double pi = std::numbers::pi;

void check_plan(const TrotterPlan& plan) {
  if (plan.terms.empty()) throw std::invalid_argument("trotter plan: no terms");
  if (plan.n < 1) throw std::invalid_argument("trotter plan: n must be >= 1");
  const auto dim = plan.terms.front().rows();
  for (const auto& h : plan.terms) {
    if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("trotter plan: terms differ in dimension");
  }
}

Operator slice(const TrotterPlan& plan, TrotterOrder order) {
  const double dt = plan.t / plan.n;
  const auto dim = static_cast<int>(plan.terms.front().rows());
  Operator u = identity(dim);
  if (order == TrotterOrder::first) {
    for (const auto& h : plan.terms) u = matexp_unitary(h, dt) * u;
    return u;
  }
  const std::size_t k = plan.terms.size();
  for (std::size_t i = 0; i + 1 < k; ++i) u = matexp_unitary(plan.terms[i], 0.5 * dt) * u;
  u = matexp_unitary(plan.terms[k - 1], dt) * u;
  for (std::size_t i = k - 1; i-- > 0;) u = matexp_unitary(plan.terms[i], 0.5 * dt) * u;
  return u;
}

Operator matrix_power(const Operator& u, int n) {
  Operator out = identity(static_cast<int>(u.rows()));
  Operator base = u;
  while (n > 0) {
    if (n & 1) out = base * out;
    base = base * base;
    n >>= 1;
  }
  return out;
}

Operator sum_terms(const std::vector<Operator>& terms) {
  Operator h = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) h += terms[i];
  return h;
}

SpinRegister chain_register(int n) {
  SpinRegister reg;
  for (int i = 0; i < n; ++i) reg.add(SpinSite::electron(0.5, "s" + std::to_string(i)));
  return reg;
}

// exp(-i phi s_z1 s_z2) = e^{i phi/4} cphase(phi) R_z(phi/2) (x) R_z(phi/2).
void append_zz(std::vector<Gate>& gates, int q1, int q2, double phi) {
  gates.push_back(single_qubit_gate("Rz", q1, rotation('z', 0.5 * phi)));
  gates.push_back(single_qubit_gate("Rz", q2, rotation('z', 0.5 * phi)));
  gates.push_back(two_qubit_gate("cphase", q1, q2, cphase(phi)));
  gates.push_back(global_phase_gate(0.25 * phi));
}

}  // namespace

Operator trotterize(const TrotterPlan& plan, TrotterOrder order) {
  check_plan(plan);
  return matrix_power(slice(plan, order), plan.n);
}

Operator exact_propagator(const TrotterPlan& plan) {
  check_plan(plan);
  return matexp_unitary(sum_terms(plan.terms), plan.t);
}

double trotter_slice_error(const TrotterPlan& plan, TrotterOrder order) {
  check_plan(plan);
  return operator_norm(slice(plan, order) - matexp_unitary(sum_terms(plan.terms), plan.t / plan.n));
}

double trotter_error(const TrotterPlan& plan, TrotterOrder order) {
  return operator_norm(trotterize(plan, order) - exact_propagator(plan));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<Operator> tfim_terms(const TfimSpec& spec) {
  if (spec.n_spins < 2) throw std::invalid_argument("tfim: need at least two spins");
  const SpinRegister reg = chain_register(spec.n_spins);
  const auto s = spin_operators(0.5);
  const int dim = reg.total_dim();
  Operator field = Operator::Zero(dim, dim), ising = Operator::Zero(dim, dim);
  for (int i = 0; i < spec.n_spins; ++i) field += spec.b * embed(s.Sx, i, reg);
  for (int i = 0; i + 1 < spec.n_spins; ++i) ising += spec.J * embed_pair(s.Sz, i, s.Sz, i + 1, reg);
  return {field, ising};
}

Operator tfim_hamiltonian(const TfimSpec& spec) { return sum_terms(tfim_terms(spec)); }

std::vector<Gate> tfim_step_circuit(const TfimSpec& spec, double tau) {
  if (spec.n_spins < 2) throw std::invalid_argument("tfim: need at least two spins");
  std::vector<Gate> gates;
  const double field_angle = 2.0 * pi * spec.b * tau;
  if (field_angle != 0.0) {
    for (int i = 0; i < spec.n_spins; ++i) gates.push_back(single_qubit_gate("Rx", i, rotation('x', field_angle)));
  }
  const double ising_angle = 2.0 * pi * spec.J * tau;
  if (ising_angle != 0.0) {
    for (int i = 0; i + 1 < spec.n_spins; ++i) append_zz(gates, i, i + 1, ising_angle);
  }
  return gates;
}

TfimTrace tfim_magnetization_trace(const TfimSpec& spec, double t_final, int n) {
  if (n < 1) throw std::invalid_argument("tfim trace: n must be >= 1");
  const SpinRegister reg = chain_register(spec.n_spins);
  const int dim = reg.total_dim();
  const auto terms = tfim_terms(spec);
  const Operator h = sum_terms(terms);
  Operator mz = Operator::Zero(dim, dim);
  for (int i = 0; i < spec.n_spins; ++i) mz += embed(spin_operators(0.5).Sz, i, reg);
  mz /= static_cast<double>(spec.n_spins);

  const double dt = t_final / n;
  const Operator step = slice({terms, dt, 1}, TrotterOrder::first);
  const Operator exact_step = matexp_unitary(h, dt);
  State a = basis_state(dim, 0), b = a;
  TfimTrace out;
  auto record = [&](double t) {
    out.t.push_back(t);
    out.trotter.push_back(a.dot(mz * a).real());
    out.exact.push_back(b.dot(mz * b).real());
  };
  record(0.0);
  for (int k = 1; k <= n; ++k) {
    a = step * a;
    b = exact_step * b;
    record(k * dt);
  }
  double sq = 0.0, lo = out.exact.front(), hi = lo;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    sq += std::pow(out.trotter[i] - out.exact[i], 2);
    lo = std::min(lo, out.exact[i]);
    hi = std::max(hi, out.exact[i]);
  }
  out.rms_deviation = std::sqrt(sq / static_cast<double>(out.t.size()));
  out.peak_to_peak = hi - lo;
  return out;
}

PauliConjugation pauli_conjugate(char axis1, char axis2) {
  auto wrapper = [](char a) -> Operator {
    switch (a) {
      case 'x': return rotation('y', -0.5 * pi);
      case 'y': return rotation('x', 0.5 * pi);
      case 'z': return identity(2);
      default: throw std::invalid_argument(std::string("pauli_conjugate: unknown axis '") + a + "'");
    }
  };
  return {axis1, axis2, wrapper(axis1), wrapper(axis2)};
}

std::vector<Gate> two_spin_coupling_circuit(char axis1, char axis2, double phi) {
  const PauliConjugation pc = pauli_conjugate(axis1, axis2);
  std::vector<Gate> gates;
  if (axis1 != 'z') gates.push_back(single_qubit_gate("W", 0, pc.w1));
  if (axis2 != 'z') gates.push_back(single_qubit_gate("W", 1, pc.w2));
  append_zz(gates, 0, 1, phi);
  if (axis1 != 'z') gates.push_back(single_qubit_gate("W+", 0, pc.w1.adjoint()));
  if (axis2 != 'z') gates.push_back(single_qubit_gate("W+", 1, pc.w2.adjoint()));
  return gates;
}

std::vector<Gate> xy_coupling_circuit(double gamma_ghz, double theta) {
  if (!(gamma_ghz > 0.0)) throw std::invalid_argument("xy_coupling_circuit: Gamma must be positive");
  const double tau = std::abs(theta) / (2.0 * pi * gamma_ghz);
  std::vector<Gate> gates;
  if (theta > 0.0) gates.push_back(single_qubit_gate("Rz", 0, rotation('z', -pi)));
  gates.push_back(two_qubit_gate("U_XY", 0, 1, uxy_gate(gamma_ghz, tau)));
  if (theta > 0.0) gates.push_back(single_qubit_gate("Rz", 0, rotation('z', pi)));
  return gates;
}

std::vector<Gate> heisenberg_from_uxy(double gamma_ghz, double theta) {
  // s1.s2 = 1/2 [(xx + yy) + (xx + zz) + (yy + zz)]; the three parts commute.
  std::vector<Gate> gates;
  auto wrapped = [&](const Operator& v) {
    gates.push_back(single_qubit_gate("V", 0, v));
    gates.push_back(single_qubit_gate("V", 1, v));
    for (auto& g : xy_coupling_circuit(gamma_ghz, 0.5 * theta)) gates.push_back(std::move(g));
    gates.push_back(single_qubit_gate("V+", 0, v.adjoint()));
    gates.push_back(single_qubit_gate("V+", 1, v.adjoint()));
  };
  for (auto& g : xy_coupling_circuit(gamma_ghz, 0.5 * theta)) gates.push_back(std::move(g));
  wrapped(rotation('x', -0.5 * pi));  // y -> z
  wrapped(rotation('y', 0.5 * pi));   // x -> z
  return gates;
}

SpinBosonMap spin_boson_map(double S, BosonEncoding encoding) {
  if (S < 0.5 || !(is_half_integer(S) || std::abs(S - std::round(S)) < 1e-12)) {
    throw std::invalid_argument("spin_boson_map: S must be a positive multiple of 1/2");
  }
  const auto ops = spin_operators(S);
  SpinBosonMap m;
  m.S = S;
  const int dim = ops.Sz.rows();
  if (encoding == BosonEncoding::spin_ladder) {
    m.annihilation = ops.Sminus / std::sqrt(2.0 * S);
  } else {
    m.annihilation = Operator::Zero(dim, dim);
    // occupation n sits on level dim-1-n
    for (int n = 1; n < dim; ++n) m.annihilation(dim - n, dim - 1 - n) = std::sqrt(static_cast<double>(n));
  }
  m.creation = m.annihilation.adjoint();
  m.number = ops.Sz + S * identity(dim);
  return m;
}

namespace {

std::vector<double> sigma_z_trace(const Operator& h, const State& psi0, const Operator& sz,
                                  const std::vector<double>& times) {
  const Eigensystem es = eigendecompose(h);
  const State c = es.vectors.adjoint() * psi0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    State phased = c;
    for (int k = 0; k < phased.size(); ++k) phased(k) *= std::polar(1.0, -2.0 * pi * es.values(k) * t);
    const State psi = es.vectors * phased;
    out.push_back(psi.dot(sz * psi).real());
  }
  return out;
}

Operator rabi_hamiltonian(const RabiModelSpec& spec, const SpinRegister& reg, const Operator& a, const Operator& n) {
  const Operator sz = 2.0 * spin_operators(0.5).Sz;
  const Operator sx = 2.0 * spin_operators(0.5).Sx;
  return spec.omega * embed(n, 1, reg) + 0.5 * spec.qubit_freq * embed(sz, 0, reg) +
         spec.g * embed_pair(sx, 0, a + a.adjoint(), 1, reg);
}

}  // namespace

std::vector<double> rabi_model_qudit(const RabiModelSpec& spec, double S, BosonEncoding encoding,
                                     const std::vector<double>& times) {
  const SpinBosonMap map = spin_boson_map(S, encoding);
  if (spec.initial_photons < 0 || spec.initial_photons > static_cast<int>(2 * S + 0.5)) {
    throw std::invalid_argument("rabi_model_qudit: initial occupation outside the encoded levels");
  }
  SpinRegister reg;
  reg.add(SpinSite::electron(0.5, "qubit")).add(SpinSite::nucleus(S, "boson"));
  const Operator h = rabi_hamiltonian(spec, reg, map.annihilation, map.number);
  const State psi0 = product_state(reg, {spec.qubit_up ? 0 : 1, map.level_of_occupation(spec.initial_photons)});
  return sigma_z_trace(h, psi0, embed(2.0 * spin_operators(0.5).Sz, 0, reg), times);
}

std::vector<double> rabi_model_boson(const RabiModelSpec& spec, int n_max, const std::vector<double>& times) {
  if (spec.initial_photons < 0 || spec.initial_photons > n_max) {
    throw std::invalid_argument("rabi_model_boson: initial photon number above the truncation");
  }
  SpinRegister reg;
  reg.add(SpinSite::electron(0.5, "qubit")).add(SpinSite::boson_mode(n_max, "mode"));
  const Operator a = annihilation(n_max);
  const Operator h = rabi_hamiltonian(spec, reg, a, a.adjoint() * a);
  const State psi0 = product_state(reg, {spec.qubit_up ? 0 : 1, spec.initial_photons});
  return sigma_z_trace(h, psi0, embed(2.0 * spin_operators(0.5).Sz, 0, reg), times);
}

FermionMode jordan_wigner(int j, int n_modes) {
  if (n_modes < 1 || j < 0 || j >= n_modes) throw std::invalid_argument("jordan_wigner: mode index out of range");
  Operator sigma_plus = Operator::Zero(2, 2);
  sigma_plus(0, 1) = 1.0;  // |up><down|
  std::vector<Operator> factors;
  for (int k = 0; k < n_modes; ++k) {
    if (k < j) {
      factors.push_back(-pauli_z());
    } else if (k == j) {
      factors.push_back(sigma_plus);
    } else {
      factors.push_back(identity(2));
    }
  }
  FermionMode m;
  m.c_dag = kron(factors);
  m.c = m.c_dag.adjoint();
  return m;
}

Operator tunneling_hamiltonian(const TunnelingSpec& spec) {
  if (spec.S < 0.5) throw std::invalid_argument("tunneling: S must be >= 1/2");
  const auto o = spin_operators(spec.S);
  return spec.D * o.Sz * o.Sz + spec.E * (o.Sx * o.Sx - o.Sy * o.Sy);
}

TunnelingTrace tunneling_simulation(const TunnelingSpec& spec, const std::vector<double>& times) {
  if (std::abs(spec.E) > 0.1 * std::abs(spec.D)) {
    warn("tunneling: |E| = " + std::to_string(std::abs(spec.E)) + " GHz is not small against |D| = " +
         std::to_string(std::abs(spec.D)) + " GHz");
  }
  const Operator h = tunneling_hamiltonian(spec);
  const int dim = static_cast<int>(h.rows());
  const Operator sz = spin_operators(spec.S).Sz;
  const Eigensystem es = eigendecompose(h);
  const State c = es.vectors.adjoint() * basis_state(dim, 0);
  TunnelingTrace out;
  for (double t : times) {
    State phased = c;
    for (int k = 0; k < dim; ++k) phased(k) *= std::polar(1.0, -2.0 * pi * es.values(k) * t);
    const State psi = es.vectors * phased;
    out.t.push_back(t);
    out.sz.push_back(psi.dot(sz * psi).real());
    out.norm.push_back(psi.squaredNorm());
  }
  return out;
}

double tunneling_period_spin1(const TunnelingSpec& spec) {
  if (spec.E == 0.0) throw std::invalid_argument("tunneling_period_spin1: E = 0 does not tunnel");
  return 1.0 / (2.0 * std::abs(spec.E));
}

}  // namespace molspin
