#include "molspin/open_system.hpp"

#include "molspin/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace molspin {

Eigen::Matrix3d dipolar_tensor(const Eigen::Vector3d& r, double g_k, double g_n) {
  const double d = r.norm();
  if (!(d > 0.0)) throw std::invalid_argument("dipolar_tensor: zero distance");
  const double pref = g_k * g_n * units::dipolar_ghz_angstrom3 / (d * d * d);
  return pref * (3.0 * r * r.transpose() / (d * d) - Eigen::Matrix3d::Identity());
}

BathCoupling BathCoupling::from_geometry(std::vector<Eigen::Vector3d> spins, std::vector<double> g,
                                         std::vector<Eigen::Vector3d> nuclei, double g_nuclear, double c0) {
  if (spins.size() != g.size()) throw std::invalid_argument("BathCoupling: one g value per central spin required");
  BathCoupling b;
  b.spin_positions = std::move(spins);
  b.g_central = std::move(g);
  b.nuclear_positions = std::move(nuclei);
  b.g_nuclear = g_nuclear;
  const std::size_t ns = b.spin_positions.size(), nn = b.nuclear_positions.size();
  Eigen::MatrixXd dzz(ns, nn);
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t n = 0; n < nn; ++n) {
      dzz(j, n) = dipolar_tensor(b.nuclear_positions[n] - b.spin_positions[j], b.g_central[j], g_nuclear)(2, 2);
    }
  }
  b.C = c0 * dzz * dzz.transpose();
  return b;
}

double bath_rate(const Operator& eigvecs, const SpinRegister& reg, int mu, int nu, const Eigen::MatrixXd& C) {
  const auto n = static_cast<Eigen::Index>(reg.size());
  if (C.rows() != n || C.cols() != n) throw std::invalid_argument("bath_rate: C must be square with one row per site");
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("bath_rate: C must be symmetric");
  }
  if (mu < 0 || nu < 0 || mu >= eigvecs.cols() || nu >= eigvecs.cols()) {
    throw std::out_of_range("bath_rate: state index out of range");
  }
  if (mu == nu) return 0.0;
  Eigen::VectorXd a(n), b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Operator sz = embed(spin_operators(reg.site(j).s).Sz, j, reg);
    a(j) = eigvecs.col(mu).dot(sz * eigvecs.col(mu)).real();
    b(j) = eigvecs.col(nu).dot(sz * eigvecs.col(nu)).real();
  }
  // sum_jj' C_jj' (a_j a_j' + b_j b_j' - 2 a_j b_j') = (a - b)^T C (a - b) for symmetric C
  const Eigen::VectorXd d = a - b;
  return d.dot(C * d);
}

Eigen::MatrixXd bath_rate_matrix(const Operator& eigvecs, const SpinRegister& reg, int n, const Eigen::MatrixXd& C) {
  if (n < 1 || n > eigvecs.cols()) throw std::out_of_range("bath_rate_matrix: invalid state count");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) g(a, b) = g(b, a) = bath_rate(eigvecs, reg, a, b, C);
  }
  return g;
}

SpinRegister double_tetrahedron_register() {
  SpinRegister reg;
  for (int k = 0; k < 7; ++k) reg.add(SpinSite::electron(0.5, "s" + std::to_string(k)));
  return reg;
}

Operator double_tetrahedron(double J, double B, double g) {
  const SpinRegister reg = double_tetrahedron_register();
  HamiltonianSpec spec;
  spec.reg = reg;
  for (std::size_t k = 0; k < reg.size(); ++k) spec.zeeman.push_back({k, g_tensor(g), Eigen::Vector3d(0.0, 0.0, B)});
  const std::vector<std::vector<std::size_t>> tetrahedra{{0, 1, 2, 3}, {0, 4, 5, 6}};
  for (const auto& t : tetrahedra) {
    for (std::size_t a = 0; a < t.size(); ++a) {
      for (std::size_t b = a + 1; b < t.size(); ++b) {
        ExchangeTerm ex;
        ex.i = t[a];
        ex.j = t[b];
        ex.J_iso = J;
        spec.exchange.push_back(ex);
      }
    }
  }
  return build_hamiltonian(spec);
}

double worst_bath_rate(const Operator& h, const SpinRegister& reg, int n, const Eigen::MatrixXd& C) {
  const auto es = eigendecompose(h);
  return bath_rate_matrix(es.vectors, reg, n, C).maxCoeff();
}

}  // namespace molspin
