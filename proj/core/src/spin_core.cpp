#include "molspin/spin_core.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molspin {

namespace {
constexpr cplx I{0.0, 1.0};
}

int SpinSite::dim() const { return static_cast<int>(std::lround(2.0 * s)) + 1; }

int SpinSite::level_of(double m) const {
  const double k = s - m;
  const long r = std::lround(k);
  if (std::abs(k - static_cast<double>(r)) > 1e-9 || r < 0 || r >= dim()) {
    throw std::invalid_argument("m=" + std::to_string(m) + " is not a level of site '" + label + "'");
  }
  return static_cast<int>(r);
}

SpinSite SpinSite::electron(double s, std::string label) {
  if (!is_half_integer(s)) throw std::invalid_argument("spin must be a positive half-integer");
  return {SiteKind::electronic, s, std::move(label)};
}

SpinSite SpinSite::nucleus(double s, std::string label) {
  if (!is_half_integer(s)) throw std::invalid_argument("spin must be a positive half-integer");
  return {SiteKind::nuclear, s, std::move(label)};
}

SpinSite SpinSite::boson_mode(int n_max, std::string label) {
  if (n_max < 1) throw std::invalid_argument("boson truncation n_max must be >= 1");
  return {SiteKind::mode, 0.5 * n_max, std::move(label)};
}

SpinRegister::SpinRegister(std::vector<SpinSite> sites) {
  for (auto& s : sites) add(std::move(s));
}

SpinRegister& SpinRegister::add(SpinSite site) {
  if (site.kind != SiteKind::mode && !is_half_integer(site.s)) {
    throw std::invalid_argument("site '" + site.label + "': spin must be a positive half-integer");
  }
  for (const auto& existing : sites_) {
    if (!site.label.empty() && existing.label == site.label) {
      throw std::invalid_argument("duplicate site label '" + site.label + "'");
    }
  }
  sites_.push_back(std::move(site));
  return *this;
}

int SpinRegister::total_dim() const {
  int d = 1;
  for (const auto& s : sites_) d *= s.dim();
  return d;
}

std::size_t SpinRegister::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i].label == label) return i;
  }
  throw std::invalid_argument("no site labelled '" + label + "'");
}

int SpinRegister::flat_index(const std::vector<int>& levels) const {
  if (levels.size() != sites_.size()) throw std::invalid_argument("level list does not match register size");
  int idx = 0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (levels[i] < 0 || levels[i] >= sites_[i].dim()) throw std::invalid_argument("level index out of range");
    idx = idx * sites_[i].dim() + levels[i];
  }
  return idx;
}

std::vector<int> SpinRegister::levels_of(int flat) const {
  std::vector<int> levels(sites_.size());
  for (std::size_t i = sites_.size(); i-- > 0;) {
    const int d = sites_[i].dim();
    levels[i] = flat % d;
    flat /= d;
  }
  return levels;
}

bool is_half_integer(double s) {
  const double twice = 2.0 * s;
  return s >= 0.5 - 1e-12 && std::abs(twice - std::round(twice)) < 1e-12;
}

SpinOperators spin_operators(double s) {
  if (!is_half_integer(s)) {
    throw std::invalid_argument("spin_operators: s=" + std::to_string(s) + " is not a positive half-integer");
  }
  const int d = static_cast<int>(std::lround(2.0 * s)) + 1;
  SpinOperators ops;
  ops.Sz = Operator::Zero(d, d);
  ops.Splus = Operator::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s - k;
    ops.Sz(k, k) = m;
    if (k > 0) {
      // <m+1|S+|m>, row k-1 holds m+1
      ops.Splus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
  }
  ops.Sminus = ops.Splus.adjoint();
  ops.Sx = 0.5 * (ops.Splus + ops.Sminus);
  ops.Sy = -0.5 * I * (ops.Splus - ops.Sminus);
  return ops;
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator pauli_x() {
  Operator p(2, 2);
  p << 0, 1, 1, 0;
  return p;
}

Operator pauli_y() {
  Operator p(2, 2);
  p << 0, -I, I, 0;
  return p;
}

Operator pauli_z() {
  Operator p(2, 2);
  p << 1, 0, 0, -1;
  return p;
}

Operator kron(const Operator& a, const Operator& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Operator kron(const std::vector<Operator>& factors) {
  if (factors.empty()) return identity(1);
  Operator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

Operator embed(const Operator& op, std::size_t site_index, const SpinRegister& reg) {
  if (site_index >= reg.size()) throw std::out_of_range("embed: site index out of range");
  const int d = reg.site_dim(site_index);
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("embed: operator dimension " + std::to_string(op.rows()) +
                                " does not match site dimension " + std::to_string(d));
  }
  int left = 1, right = 1;
  for (std::size_t i = 0; i < site_index; ++i) left *= reg.site_dim(i);
  for (std::size_t i = site_index + 1; i < reg.size(); ++i) right *= reg.site_dim(i);
  return kron(kron(identity(left), op), identity(right));
}

Operator embed_pair(const Operator& a, std::size_t i, const Operator& b, std::size_t j, const SpinRegister& reg) {
  if (i == j) throw std::invalid_argument("embed_pair: sites must differ");
  return embed(a, i, reg) * embed(b, j, reg);
}

bool is_hermitian(const Operator& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Operator expm(const Operator& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  return a.exp();
}

Eigensystem eigendecompose(const Operator& h) {
  if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("eigendecompose: operator is not hermitian");
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Operator matexp_unitary(const Operator& h, double t) {
  if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("matexp_unitary: generator is not hermitian");
  const auto es = eigendecompose(h);
  const double w = -2.0 * std::numbers::pi * t;
  Eigen::VectorXcd phases(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) phases(k) = std::polar(1.0, w * es.values(k));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double operator_norm(const Operator& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(a);
  return svd.singularValues()(0);
}

State basis_state(int dim, int index) {
  if (index < 0 || index >= dim) throw std::out_of_range("basis_state: index out of range");
  State v = State::Zero(dim);
  v(index) = 1.0;
  return v;
}

State product_state(const SpinRegister& reg, const std::vector<int>& levels) {
  return basis_state(reg.total_dim(), reg.flat_index(levels));
}

double state_fidelity(const State& a, const State& b) { return std::norm(a.dot(b)); }

double gate_fidelity(const Operator& u, const Operator& v) {
  const double d = static_cast<double>(u.rows());
  return std::norm((u.adjoint() * v).trace()) / (d * d);
}

double phase_aligned_distance(const Operator& u, const Operator& v) {
  const cplx tr = (v.adjoint() * u).trace();
  const cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
  return operator_norm(u - phase * v);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

}  // namespace molspin
