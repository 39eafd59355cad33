#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace molspin {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

enum class SiteKind { electronic, nuclear, mode };

// One tensor factor of the Hilbert space. For spins the dimension is 2s+1 and
// level index k holds m = s - k. A `mode` site is a truncated boson with
// levels 0..n_max stored as s = n_max / 2 so that dim() stays 2s+1.
struct SpinSite {
  SiteKind kind = SiteKind::electronic;
  double s = 0.5;
  std::string label;

  int dim() const;
  double m_of(int level) const { return s - level; }
  int level_of(double m) const;

  static SpinSite electron(double s, std::string label);
  static SpinSite nucleus(double s, std::string label);
  static SpinSite boson_mode(int n_max, std::string label);
};

class SpinRegister {
 public:
  SpinRegister() = default;
  explicit SpinRegister(std::vector<SpinSite> sites);

  SpinRegister& add(SpinSite site);

  std::size_t size() const { return sites_.size(); }
  const SpinSite& site(std::size_t i) const { return sites_.at(i); }
  const std::vector<SpinSite>& sites() const { return sites_; }
  int site_dim(std::size_t i) const { return sites_.at(i).dim(); }
  int total_dim() const;
  std::size_t index_of(const std::string& label) const;

  // Flat index of a product state given per-site level indices.
  int flat_index(const std::vector<int>& levels) const;
  std::vector<int> levels_of(int flat) const;

 private:
  std::vector<SpinSite> sites_;
};

struct SpinOperators {
  Operator Sx, Sy, Sz, Splus, Sminus;
};

bool is_half_integer(double s);

// Spin matrices in the Sz eigenbasis ordered m = s, s-1, ..., -s.
SpinOperators spin_operators(double s);

Operator identity(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

Operator kron(const Operator& a, const Operator& b);
Operator kron(const std::vector<Operator>& factors);

// Lifts a single-site operator to the full register.
Operator embed(const Operator& op, std::size_t site_index, const SpinRegister& reg);

// Product a_i b_j of operators on two distinct sites.
Operator embed_pair(const Operator& a, std::size_t i, const Operator& b, std::size_t j,
                    const SpinRegister& reg);

bool is_hermitian(const Operator& a, double rel_tol = 1e-12);

// General matrix exponential (Pade scaling and squaring).
Operator expm(const Operator& a);

// exp(-i 2 pi H t) for hermitian H in GHz and t in ns, via the spectral decomposition.
Operator matexp_unitary(const Operator& h, double t);

struct Eigensystem {
  Eigen::VectorXd values;  // ascending
  Operator vectors;        // columns are eigenvectors
};

Eigensystem eigendecompose(const Operator& h);

double operator_norm(const Operator& a);

State basis_state(int dim, int index);
State product_state(const SpinRegister& reg, const std::vector<int>& levels);

// |<a|b>|^2 for normalized states.
double state_fidelity(const State& a, const State& b);

// |Tr(U^dagger V)|^2 / d^2, insensitive to global phase.
double gate_fidelity(const Operator& u, const Operator& v);

// Distance min_phi ||U - e^{i phi} V|| in operator norm, via the trace phase.
double phase_aligned_distance(const Operator& u, const Operator& v);

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

}  // namespace molspin
