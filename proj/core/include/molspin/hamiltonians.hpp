#pragma once

#include "molspin/spin_core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace molspin {

// Rotation matrix for z-y-z Euler angles (radians).
Eigen::Matrix3d euler_zyz(double alpha, double beta, double gamma);

// g tensor R diag(gx, gy, gz) R^T; angles default to the laboratory frame.
Eigen::Matrix3d g_tensor(const Eigen::Vector3d& principal, const Eigen::Vector3d& euler = Eigen::Vector3d::Zero());
Eigen::Matrix3d g_tensor(double isotropic);

struct ZeemanTerm {
  std::size_t site = 0;
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity() * 2.0;
  Eigen::Vector3d B = Eigen::Vector3d::Zero();  // tesla
};

struct ExchangeTerm {
  std::size_t i = 0, j = 1;
  double J_iso = 0.0;                                      // GHz, multiplies s_i . s_j
  Eigen::Vector3d J_diag = Eigen::Vector3d::Zero();        // GHz, sum_a J^a s_i^a s_j^a
  Eigen::Matrix3d D_aniso = Eigen::Matrix3d::Zero();       // GHz, s_i . D . s_j
  Eigen::Vector3d G_dm = Eigen::Vector3d::Zero();          // GHz, G . (s_i x s_j)
};

struct StevensTerm {
  int k = 2;
  int q = 0;
  double b = 0.0;  // GHz
};

struct ZfsTerm {
  std::size_t site = 0;
  double d = 0.0;  // axial, GHz
  double e = 0.0;  // rhombic, GHz
  std::vector<StevensTerm> stevens;
};

// Rank-2 Stevens operators are built in; other ranks can be supplied here.
using StevensProvider = std::function<Operator(double s)>;
void register_stevens_operator(int k, int q, StevensProvider provider);
Operator stevens_operator(int k, int q, double s);

Operator build_zeeman(const ZeemanTerm& term, const SpinRegister& reg);
Operator build_exchange(const ExchangeTerm& term, const SpinRegister& reg);
Operator build_zfs(const ZfsTerm& term, const SpinRegister& reg);

struct HamiltonianSpec {
  SpinRegister reg;
  std::vector<ZeemanTerm> zeeman;
  std::vector<ExchangeTerm> exchange;
  std::vector<ZfsTerm> zfs;
};

Operator build_hamiltonian(const HamiltonianSpec& spec);

// Nuclear spin I coupled to an electronic spin s; the nuclear Zeeman term is omitted.
struct HyperfineQuditSpec {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();  // GHz
  double p = 0.0;                               // quadrupole, GHz
  double I = 1.5;
  double s = 0.5;
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity() * 2.0;
  Eigen::Vector3d B = Eigen::Vector3d::Zero();
};

// Register ordered (nucleus, electron).
SpinRegister hyperfine_register(const HyperfineQuditSpec& spec);
Operator build_hyperfine_qudit(const HyperfineQuditSpec& spec, const SpinRegister& reg);

// Three spins 1/2 in a chain; sites 0 and 2 are the qubits, site 1 the switch.
// Field along z; J vectors hold (J^x, J^y, J^z) in GHz.
struct TrimerSpec {
  Eigen::Vector3d g1{2.0, 2.0, 2.0}, g2{2.0, 2.0, 2.0}, g3{2.0, 2.0, 2.0};
  Eigen::Vector3d J1 = Eigen::Vector3d::Zero(), J2 = Eigen::Vector3d::Zero();
  double B = 0.0;
  Eigen::Vector3d euler1 = Eigen::Vector3d::Zero(), euler2 = Eigen::Vector3d::Zero(),
                  euler3 = Eigen::Vector3d::Zero();
};

// Trimer with the published Cr7Ni-Co-Cr7Ni parameters, exchange converted from cm^-1.
TrimerSpec cr7ni_co_trimer(double B_tesla);

SpinRegister trimer_register();
Operator build_trimer(const TrimerSpec& spec);

// Switch excitation frequency (GHz) for qubit projections m1, m3 = +-1/2.
double switch_resonance(const TrimerSpec& spec, double m1, double m3);

struct PhotonCoupledSpin {
  double s = 0.5;
  double g = 2.0;
  double D = 0.0;  // GHz, multiplies S_z^2
  double G = 0.0;  // coupling, GHz
};

struct SpinPhotonSpec {
  double omega0 = 0.0;  // resonator frequency, GHz
  double B = 0.0;       // tesla, along z
  std::vector<PhotonCoupledSpin> spins;
  int n_max = 5;
};

// Register ordered (mode, spin 0, spin 1, ...).
SpinRegister spin_photon_register(const SpinPhotonSpec& spec);
Operator build_spin_photon(const SpinPhotonSpec& spec);

// Truncated boson annihilation operator on levels 0..n_max.
Operator annihilation(int n_max);

// Population of the highest Fock level; warns above 1e-4.
double top_fock_population(const State& psi, const SpinRegister& reg, std::size_t mode_site = 0);

// Coupling of the effective flip-flop interaction between two qubits mediated by
// a switch, J^2 / (2 |g1 - g2| mu_B B), in GHz.
double effective_xy_coupling(double J, double g1, double g2, double B);

}  // namespace molspin
