#include "molspin/qec.hpp"

#include "molspin/diagnostics.hpp"
#include "molspin/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace molspin {

namespace {

constexpr double pi = std::numbers::pi;

int nuclear_level(double I, double m) { return static_cast<int>(std::lround(I - m)); }

}  // namespace

CodeSpec make_code(std::string name, State zero_l, State one_l, std::vector<Operator> errors,
                   std::vector<std::string> error_names) {
  if (zero_l.size() != one_l.size()) throw std::invalid_argument("make_code: code words differ in dimension");
  if (std::abs(zero_l.norm() - 1.0) > 1e-10 || std::abs(one_l.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("make_code: code words must be normalized");
  }
  if (std::abs(zero_l.dot(one_l)) > 1e-10) throw std::invalid_argument("make_code: code words are not orthogonal");
  if (errors.size() != error_names.size()) throw std::invalid_argument("make_code: one name per error operator");
  CodeSpec c;
  c.name = std::move(name);
  c.zero_l = std::move(zero_l);
  c.one_l = std::move(one_l);
  c.errors = std::move(errors);
  c.error_names = std::move(error_names);
  const auto n = c.zero_l.size();
  c.P_L = c.zero_l * c.zero_l.adjoint() + c.one_l * c.one_l.adjoint();
  c.P_e = Operator::Zero(n, n);
  for (const auto& e : c.errors) {
    if (e.rows() != n || e.cols() != n) throw std::invalid_argument("make_code: error operator size mismatch");
    for (const State* w : {&c.zero_l, &c.one_l}) {
      State v = e * *w;
      v -= c.P_L * v;
      v -= c.P_e * v;
      const double norm = v.norm();
      if (norm < 1e-9) continue;
      v /= norm;
      c.error_words.push_back(v);
      c.P_e += v * v.adjoint();
    }
  }
  return c;
}

KnillLaflammeReport knill_laflamme_check(const CodeSpec& code, double tol) {
  KnillLaflammeReport r;
  r.pass = true;
  const int n = static_cast<int>(code.errors.size());
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Operator m = code.errors[k].adjoint() * code.errors[j];
      KnillLaflammeEntry e;
      e.k = k;
      e.j = j;
      e.diagonal_mismatch = std::abs(code.zero_l.dot(m * code.zero_l) - code.one_l.dot(m * code.one_l));
      e.off_diagonal = std::max(std::abs(code.zero_l.dot(m * code.one_l)), std::abs(code.one_l.dot(m * code.zero_l)));
      e.pass = e.diagonal_mismatch <= tol && e.off_diagonal <= tol;
      r.max_residual = std::max({r.max_residual, e.diagonal_mismatch, e.off_diagonal});
      r.pass = r.pass && e.pass;
      r.entries.push_back(e);
    }
  }
  return r;
}

Operator shift_up(double s) {
  const int d = static_cast<int>(std::lround(2 * s)) + 1;
  Operator u = Operator::Zero(d, d);
  for (int k = 1; k < d; ++k) u(k - 1, k) = 1.0;  // level k-1 has m one higher than level k
  return u;
}

Operator shift_down(double s) { return shift_up(s).transpose(); }

CodeSpec three_qubit_code() {
  const State zero = basis_state(8, 0), one = basis_state(8, 7);
  std::vector<Operator> errors{identity(8)};
  std::vector<std::string> names{"none"};
  for (int q = 0; q < 3; ++q) {
    errors.push_back(gate_unitary(single_qubit_gate("X", q, pauli_x()), 3));
    names.push_back("X" + std::to_string(q + 1));
  }
  return make_code("three-qubit bit flip", zero, one, errors, names);
}

HyperfineQuditSpec amplitude_code_hyperfine() {
  HyperfineQuditSpec s;
  s.I = 2.5;
  s.s = 0.5;
  s.A = Eigen::Matrix3d::Zero();
  s.A(2, 2) = 0.8;
  s.p = 0.05;
  s.g = Eigen::Matrix3d::Identity() * 2.0;
  s.B = {0.0, 0.0, 0.3};
  return s;
}

CodeSpec amplitude_code() {
  const SpinRegister reg = hyperfine_register(amplitude_code_hyperfine());
  const int down = 1;
  const State zero = basis_state(reg.total_dim(), reg.flat_index({nuclear_level(2.5, -1.5), down}));
  const State one = basis_state(reg.total_dim(), reg.flat_index({nuclear_level(2.5, 1.5), down}));
  return make_code("amplitude shift (I=5/2)", zero, one,
                   {identity(reg.total_dim()), embed(shift_up(2.5), 0, reg), embed(shift_down(2.5), 0, reg)},
                   {"none", "shift+", "shift-"});
}

namespace {

State spin32_word(bool one) {
  // levels: 0 -> m=3/2, 1 -> 1/2, 2 -> -1/2, 3 -> -3/2
  State v = State::Zero(4);
  const double a = std::sqrt(3.0) / 2.0;
  if (!one) {
    v(2) = a;
    v(0) = 0.5;
  } else {
    v(3) = 0.5;
    v(1) = a;
  }
  return v;
}

}  // namespace

CodeSpec spin32_code() {
  return make_code("spin-3/2 dephasing", spin32_word(false), spin32_word(true), {identity(4), spin_operators(1.5).Sz},
                   {"none", "S_z"});
}

HyperfineQuditSpec spin32_hyperfine() {
  HyperfineQuditSpec s;
  s.I = 1.5;
  s.s = 0.5;
  s.A = Eigen::Matrix3d::Zero();
  s.A(2, 2) = 0.9;
  s.p = 0.15;
  s.g = Eigen::Matrix3d::Identity() * 2.0;
  s.B = {0.0, 0.0, 0.3};
  return s;
}

CodeSpec spin32_register_code() {
  const SpinRegister reg = hyperfine_register(spin32_hyperfine());
  const State down = basis_state(2, 1);
  return make_code("spin-3/2 dephasing (with ancilla)", kron(spin32_word(false), down), kron(spin32_word(true), down),
                   {identity(8), embed(spin_operators(1.5).Sz, 0, reg)}, {"none", "S_z"});
}

CodeSpec naive_spin32_code() {
  return make_code("naive +-3/2", basis_state(4, 3), basis_state(4, 0), {identity(4), spin_operators(1.5).Sz},
                   {"none", "S_z"});
}

CodeSpec dephasing_code(double S, int k) {
  if (!is_half_integer(S) || std::abs(S - std::round(S)) < 1e-12 || S < 1.5 || S > 3.5) {
    throw std::invalid_argument("dephasing_code: S must be a half-integer in [3/2, 7/2]");
  }
  if (k < 1) throw std::invalid_argument("dephasing_code: k must be at least 1");
  const int dim = static_cast<int>(std::lround(2 * S)) + 1;
  std::vector<int> support;  // levels with m = S, S-2, ...
  for (int lv = 0; lv < dim; lv += 2) support.push_back(lv);
  const int n = static_cast<int>(support.size());
  // Mirror symmetry equalises even moments; odd moments up to 2k must vanish.
  Eigen::MatrixXd a(k + 1, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
  for (int c = 0; c < n; ++c) {
    const double m = S - support[c];
    a(0, c) = 1.0;
    for (int j = 1; j <= k; ++j) a(j, c) = std::pow(m, 2 * j - 1);
  }
  b(0) = 1.0;
  const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(b);
  if ((a * w - b).norm() > 1e-10 || w.minCoeff() < -1e-12) {
    throw std::invalid_argument("dephasing_code: no non-negative weights satisfy the conditions for S=" +
                                std::to_string(S) + ", k=" + std::to_string(k));
  }
  State zero = State::Zero(dim), one = State::Zero(dim);
  for (int c = 0; c < n; ++c) {
    const double amp = std::sqrt(std::max(0.0, w(c)));
    zero(support[c]) = amp;
    one(dim - 1 - support[c]) = amp;
  }
  zero.normalize();
  one.normalize();
  const Operator sz = spin_operators(S).Sz;
  std::vector<Operator> errors{identity(dim)};
  std::vector<std::string> names{"none"};
  Operator p = identity(dim);
  for (int j = 1; j <= k; ++j) {
    p = p * sz;
    errors.push_back(p);
    names.push_back("S_z^" + std::to_string(j));
  }
  return make_code("dephasing S=" + std::to_string(S), zero, one, errors, names);
}

Operator layer_unitary(const RotationLayer& layer, int dim) {
  Operator u = identity(dim);
  std::set<int> used;
  for (const auto& r : layer) {
    if (!used.insert(r.upper).second || !used.insert(r.lower).second) {
      throw std::invalid_argument("layer_unitary: simultaneous rotations must act on disjoint levels");
    }
    u = transition_rotation(dim, r.upper, r.lower, r.theta, r.phi) * u;
  }
  return u;
}

Operator sequence_unitary(const std::vector<RotationLayer>& layers, int dim) {
  Operator u = identity(dim);
  for (const auto& l : layers) u = layer_unitary(l, dim) * u;
  return u;
}

namespace {

struct Givens {
  int i = 0;  // rotates rows (i, i+1)
  double theta = 0.0;
};

// Zeroes a(i, col) by rotating rows (i, i+1) so that weight moves to i+1.
// With `positive`, also leaves a(i+1, col) >= 0 (a 2 pi rotation when only the sign is wrong).
bool eliminate(Eigen::MatrixXd& a, int i, int col, Givens& g, bool positive = false) {
  const double up = a(i, col), lo = a(i + 1, col);
  const double r = std::hypot(up, lo);
  if (std::abs(up) < 1e-15 && (!positive || lo >= 0.0)) return false;
  const double c = lo / r, s = up / r;
  const Eigen::RowVectorXd ru = a.row(i), rl = a.row(i + 1);
  a.row(i) = c * ru - s * rl;
  a.row(i + 1) = s * ru + c * rl;
  g = {i, 2.0 * std::atan2(s, c)};
  return true;
}

// Layers realising G_1^{-1} ... G_K^{-1} (time order: G_K^{-1} first).
std::vector<RotationLayer> inverse_layers(const std::vector<Givens>& gs, const std::vector<int>& levels,
                                          const std::string& target) {
  std::vector<RotationLayer> out;
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
    // G = R(theta, pi/2); its inverse is R(theta, 3 pi/2) = R(-theta, pi/2).
    double theta = it->theta, phi = 1.5 * pi;
    if (theta < 0) {
      theta = -theta;
      phi = 0.5 * pi;
    }
    if (theta < 1e-14) continue;
    out.push_back({SelectiveRotation{target, levels[it->i], levels[it->i + 1], theta, phi}});
  }
  return out;
}

void check_levels(const Eigen::MatrixXd& m, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != m.rows()) throw std::invalid_argument("givens: one level per matrix row");
}

}  // namespace

std::vector<RotationLayer> givens_decomposition(const Eigen::MatrixXd& orthogonal, const std::vector<int>& levels,
                                                const std::string& target) {
  check_levels(orthogonal, levels);
  const int n = static_cast<int>(orthogonal.rows());
  if (orthogonal.cols() != n || (orthogonal.transpose() * orthogonal - Eigen::MatrixXd::Identity(n, n)).norm() > 1e-10) {
    throw std::invalid_argument("givens_decomposition: matrix is not orthogonal");
  }
  Eigen::MatrixXd a = orthogonal;
  std::vector<Givens> gs;
  for (int col = n - 1; col >= 1; --col) {
    for (int i = 0; i < col; ++i) {
      Givens g;
      if (eliminate(a, i, col, g, i == col - 1)) gs.push_back(g);
    }
  }
  if (a(0, 0) < 0) throw std::invalid_argument("givens_decomposition: determinant is -1");
  return inverse_layers(gs, levels, target);
}

std::vector<RotationLayer> givens_isometry(const Eigen::MatrixXd& isometry, const std::vector<int>& levels,
                                           const std::string& target) {
  check_levels(isometry, levels);
  const int n = static_cast<int>(isometry.rows()), k = static_cast<int>(isometry.cols());
  if (k > n || (isometry.transpose() * isometry - Eigen::MatrixXd::Identity(k, k)).norm() > 1e-10) {
    throw std::invalid_argument("givens_isometry: columns are not orthonormal");
  }
  Eigen::MatrixXd a = isometry;
  std::vector<Givens> gs;
  for (int j = 0; j < k; ++j) {
    const int t = n - 1 - j;
    for (int i = 0; i < t; ++i) {
      Givens g;
      if (eliminate(a, i, j, g)) gs.push_back(g);
    }
  }
  return inverse_layers(gs, levels, target);
}

PulseSchedule lower_to_pulses(const std::vector<RotationLayer>& layers, const Operator& h_static,
                              const SpinRegister& reg, const HardwareCalibration& hw) {
  const Spectrum spec = dressed_spectrum(h_static);
  const int n = reg.total_dim();
  // Every allowed line of every site, as (site, upper, lower, frequency).
  struct Line {
    std::size_t site;
    int upper, lower;
    double freq;
  };
  std::vector<Line> lines;
  for (std::size_t s = 0; s < reg.size(); ++s) {
    const Operator sp = spec.states.adjoint() * embed(spin_operators(reg.site(s).s).Splus, s, reg) * spec.states;
    for (int u = 0; u < n; ++u) {
      for (int l = 0; l < n; ++l) {
        if (std::abs(sp(u, l)) > 1e-3) lines.push_back({s, u, l, spec.energies(u) - spec.energies(l)});
      }
    }
  }
  ScheduleBuilder b;
  for (const auto& layer : layers) {
    std::vector<PulseSegment> tones;
    for (const auto& r : layer) {
      const Transition tr = find_transition(spec, reg, r.target, r.lower, r.upper);
      PulseSegment seg = rotation_pulse(r.phi, r.theta, tr, hw);
      double sep = std::numeric_limits<double>::infinity();
      for (const auto& line : lines) {
        bool own = false;
        for (const auto& other : layer) {
          own = own || (line.site == reg.index_of(other.target) && line.upper == other.upper && line.lower == other.lower);
        }
        if (!own) sep = std::min(sep, std::abs(line.freq - seg.freq));
      }
      if (!is_selective(seg.tau, sep)) {
        throw CompileError("lower_to_pulses: line " + std::to_string(r.lower) + "->" + std::to_string(r.upper) + " on '" +
                           r.target + "' at " + std::to_string(seg.freq) + " GHz lies " + std::to_string(sep) +
                           " GHz from another line; bandwidth " + std::to_string(1.0 / seg.tau) + " GHz is too large");
      }
      tones.push_back(seg);
    }
    if (tones.size() == 1) {
      b.pulse(tones.front());
    } else if (!tones.empty()) {
      b.tones(tones);
    }
  }
  return b.build();
}

namespace {

// Measures one site of a pure state; returns the outcome level and collapses psi.
int measure_site(State& psi, const SpinRegister& reg, std::size_t site, std::mt19937_64* rng) {
  const int d = reg.site_dim(site);
  std::vector<double> p(d, 0.0);
  for (int k = 0; k < psi.size(); ++k) p[reg.levels_of(k)[site]] += std::norm(psi(k));
  int outcome = 0;
  if (rng) {
    std::discrete_distribution<int> dist(p.begin(), p.end());
    outcome = dist(*rng);
  } else {
    outcome = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  for (int k = 0; k < psi.size(); ++k) {
    if (reg.levels_of(k)[site] != outcome) psi(k) = 0.0;
  }
  psi /= psi.norm();
  return outcome;
}

// Measures a +-1 observable; returns the sign and collapses psi.
int measure_sign(State& psi, const Operator& obs, std::mt19937_64* rng) {
  const Operator plus = 0.5 * (identity(static_cast<int>(obs.rows())) + obs);
  const State a = plus * psi;
  const double p_plus = a.squaredNorm();
  int sign = 0;
  if (rng) {
    sign = std::uniform_real_distribution<double>(0.0, 1.0)(*rng) < p_plus ? 1 : -1;
  } else {
    sign = p_plus >= 0.5 ? 1 : -1;
  }
  psi = sign == 1 ? a : State(psi - a);
  psi /= psi.norm();
  return sign;
}

bool in_code_or_error_space(const CodeSpec& code, const State& psi) {
  return std::abs(psi.dot((code.P_L + code.P_e) * psi).real() - psi.squaredNorm()) < 1e-9;
}

}  // namespace

State three_qubit_encode(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw std::invalid_argument("three_qubit_encode: state is not normalized");
  }
  State q(2);
  q << alpha, beta;
  const State in = kron(kron(Operator(q), Operator(basis_state(2, 0))), Operator(basis_state(2, 0)));
  const Operator u = circuit_unitary({two_qubit_gate("cX", 0, 1, cnot()), two_qubit_gate("cX", 0, 2, cnot())}, 3);
  return u * in;
}

CycleResult three_qubit_correct(const State& psi, std::mt19937_64* rng) {
  if (psi.size() != 8) throw std::invalid_argument("three_qubit_correct: need a three-qubit state");
  const Operator z = pauli_z();
  const Operator z1z2 = kron({z, z, identity(2)});
  const Operator z1z3 = kron({z, identity(2), z});
  CycleResult r;
  r.state = psi;
  const int s1 = measure_sign(r.state, z1z2, rng);
  const int s2 = measure_sign(r.state, z1z3, rng);
  r.record.outcomes = {s1, s2};
  int flip = -1;
  if (s1 == 1 && s2 == 1) {
    r.record.inferred = "none";
  } else if (s1 == -1 && s2 == -1) {
    flip = 0;
  } else if (s1 == -1 && s2 == 1) {
    flip = 1;
  } else {
    flip = 2;
  }
  if (flip >= 0) {
    r.record.inferred = "X" + std::to_string(flip + 1);
    r.record.recovery = "X" + std::to_string(flip + 1);
    r.state = gate_unitary(single_qubit_gate("X", flip, pauli_x()), 3) * r.state;
  } else {
    r.record.recovery = "none";
  }
  return r;
}

State amplitude_code_encode(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw std::invalid_argument("amplitude_code_encode: state is not normalized");
  }
  const CodeSpec c = amplitude_code();
  return alpha * c.zero_l + beta * c.one_l;
}

namespace {

RotationLayer ancilla_flips(const SpinRegister& reg, double I, const std::vector<double>& ms) {
  RotationLayer l;
  for (double m : ms) {
    const int n = nuclear_level(I, m);
    l.push_back({"electron", reg.flat_index({n, 0}), reg.flat_index({n, 1}), pi, 0.0});
  }
  return l;
}

// Pi rotations moving nuclear m to m + dm (electron down).
RotationLayer nuclear_moves(const SpinRegister& reg, double I, const std::vector<double>& ms, int dm) {
  RotationLayer l;
  for (double m : ms) {
    const int from = nuclear_level(I, m), to = nuclear_level(I, m + dm);
    const int a = reg.flat_index({from, 1}), b = reg.flat_index({to, 1});
    l.push_back({"nucleus", dm > 0 ? b : a, dm > 0 ? a : b, pi, 0.0});
  }
  return l;
}

}  // namespace

RotationLayer amplitude_detection_layer(int round) {
  const SpinRegister reg = hyperfine_register(amplitude_code_hyperfine());
  if (round == 1) return ancilla_flips(reg, 2.5, {-2.5, 0.5});
  if (round == 2) return ancilla_flips(reg, 2.5, {-0.5, 2.5});
  throw std::invalid_argument("amplitude_detection_layer: round must be 1 or 2");
}

CycleResult amplitude_code_cycle(const State& encoded, ShiftError error, std::mt19937_64* rng) {
  const CodeSpec code = amplitude_code();
  const SpinRegister reg = hyperfine_register(amplitude_code_hyperfine());
  const int dim = reg.total_dim();
  if (encoded.size() != dim) throw std::invalid_argument("amplitude_code_cycle: state dimension mismatch");
  CycleResult r;
  r.state = encoded;
  if (error == ShiftError::up) r.state = code.errors[1] * r.state;
  if (error == ShiftError::down) r.state = code.errors[2] * r.state;
  if (r.state.norm() < 1e-12 || !in_code_or_error_space(code, r.state)) {
    r.record.recoverable = false;
    r.record.inferred = "unrecoverable";
    r.record.recovery = "none";
    return r;
  }
  for (int round = 1; round <= 2; ++round) {
    const RotationLayer det = amplitude_detection_layer(round);
    r.state = layer_unitary(det, dim) * r.state;
    const int outcome = measure_site(r.state, reg, 1, rng);
    r.record.outcomes.push_back(outcome);
    if (outcome == 0) {
      r.state = layer_unitary(det, dim) * r.state;
      if (round == 1) {
        r.state = layer_unitary(nuclear_moves(reg, 2.5, {-2.5, 0.5}, +1), dim) * r.state;
        r.record.inferred = "shift-";
        r.record.recovery = "raise m for {-5/2, 1/2}";
      } else {
        r.state = layer_unitary(nuclear_moves(reg, 2.5, {-0.5, 2.5}, -1), dim) * r.state;
        r.record.inferred = "shift+";
        r.record.recovery = "lower m for {-1/2, 5/2}";
      }
      return r;
    }
  }
  r.record.inferred = "none";
  r.record.recovery = "none";
  return r;
}

namespace {

std::vector<int> nuclear_levels_down(const SpinRegister& reg) {
  std::vector<int> lv;
  for (int n = 0; n < reg.site_dim(0); ++n) lv.push_back(reg.flat_index({n, 1}));
  return lv;
}

Eigen::MatrixXd real_part(const State& v) { return v.real(); }

}  // namespace

std::vector<RotationLayer> spin32_encoding_layers() {
  const SpinRegister reg = hyperfine_register(spin32_hyperfine());
  Eigen::MatrixXd v(4, 2);
  v.col(0) = real_part(spin32_word(false));
  v.col(1) = real_part(spin32_word(true));
  return givens_isometry(v, nuclear_levels_down(reg), "nucleus");
}

EncodedState spin32_encode(cplx alpha, cplx beta, const HardwareCalibration& hw) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw std::invalid_argument("spin32_encode: state is not normalized");
  }
  const HyperfineQuditSpec hs = spin32_hyperfine();
  const SpinRegister reg = hyperfine_register(hs);
  EncodedState out;
  out.layers = spin32_encoding_layers();
  State in = State::Zero(reg.total_dim());
  in(reg.flat_index({3, 1})) = alpha;
  in(reg.flat_index({2, 1})) = beta;
  out.state = sequence_unitary(out.layers, reg.total_dim()) * in;
  out.schedule = lower_to_pulses(out.layers, build_hyperfine_qudit(hs, reg), reg, hw);
  return out;
}

Spin32Protocol spin32_protocol() {
  const SpinRegister reg = hyperfine_register(spin32_hyperfine());
  const CodeSpec bare = spin32_code();
  const Eigen::VectorXd l0 = bare.zero_l.real(), l1 = bare.one_l.real();
  const Eigen::VectorXd e0 = bare.error_words.at(0).real(), e1 = bare.error_words.at(1).real();
  // Rows: targets |3/2>, |1/2>, |-1/2>, |-3/2> (levels 0..3).
  Eigen::MatrixXd w(4, 4);
  w.row(0) = l0.transpose();
  w.row(1) = e0.transpose();
  w.row(2) = l1.transpose();
  w.row(3) = e1.transpose();
  if (w.determinant() < 0) w.row(3) *= -1.0;
  Eigen::MatrixXd rec = l0 * e0.transpose() + e0 * l0.transpose() + l1 * e1.transpose() + e1 * l1.transpose();
  const auto levels = nuclear_levels_down(reg);
  Spin32Protocol p;
  p.map = givens_decomposition(w, levels, "nucleus");
  p.ancilla_flip = ancilla_flips(reg, 1.5, {0.5, -1.5});
  p.unmap = givens_decomposition(w.transpose(), levels, "nucleus");
  p.recovery = givens_decomposition(rec, levels, "nucleus");
  return p;
}

CycleResult spin32_detect_correct(const State& psi, std::mt19937_64* rng) {
  const CodeSpec code = spin32_register_code();
  const SpinRegister reg = hyperfine_register(spin32_hyperfine());
  const int dim = reg.total_dim();
  if (psi.size() != dim) throw std::invalid_argument("spin32_detect_correct: state dimension mismatch");
  CycleResult r;
  r.state = psi;
  if (!in_code_or_error_space(code, psi)) {
    r.record.recoverable = false;
    r.record.inferred = "unrecoverable";
    r.record.recovery = "none";
    return r;
  }
  const Spin32Protocol p = spin32_protocol();
  r.state = sequence_unitary(p.map, dim) * r.state;
  r.state = layer_unitary(p.ancilla_flip, dim) * r.state;
  const int outcome = measure_site(r.state, reg, 1, rng);
  r.record.outcomes.push_back(outcome);
  if (outcome == 0) {
    r.state = layer_unitary(p.ancilla_flip, dim) * r.state;
    r.state = sequence_unitary(p.unmap, dim) * r.state;
    r.state = sequence_unitary(p.recovery, dim) * r.state;
    r.record.inferred = "S_z";
    r.record.recovery = "error words to code words";
  } else {
    r.state = sequence_unitary(p.unmap, dim) * r.state;
    r.record.inferred = "none";
    r.record.recovery = "none";
  }
  return r;
}

PulseSchedule spin32_detection_schedule(const HardwareCalibration& hw) {
  const HyperfineQuditSpec hs = spin32_hyperfine();
  const SpinRegister reg = hyperfine_register(hs);
  const Spin32Protocol p = spin32_protocol();
  std::vector<RotationLayer> layers = p.map;
  layers.push_back(p.ancilla_flip);
  return lower_to_pulses(layers, build_hyperfine_qudit(hs, reg), reg, hw);
}

}  // namespace molspin
