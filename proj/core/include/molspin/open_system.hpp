#pragma once

#include "molspin/hamiltonians.hpp"
#include "molspin/spin_core.hpp"

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace molspin {

using DensityMatrix = Operator;

DensityMatrix density_from_state(const State& psi);

// Throws std::invalid_argument unless rho is hermitian, unit trace and positive
// (eigenvalues >= -1e-9) within `tol`.
void check_density_matrix(const DensityMatrix& rho, double tol = 1e-10);

double purity(const DensityMatrix& rho);

// One jump operator x with rate gamma (1/ns), entering as gamma (2 x rho x^+ - {x^+ x, rho}).
struct LindbladTerm {
  Operator x;
  double rate = 0.0;
};

struct LindbladOptions {
  double dt = 0.0;     // ns; 0 picks a step with the step-halving probe
  double tol = 1e-8;   // relative difference between one step and two half steps
};

// d rho/dt = -i 2 pi [H, rho] + sum gamma (2 x rho x^+ - x^+ x rho - rho x^+ x), H in GHz, t in ns.
Operator lindblad_rhs(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho);

// Fixed-step RK4 over [0, t].
DensityMatrix lindblad_evolve(const Operator& h, const std::vector<LindbladTerm>& terms, const DensityMatrix& rho0,
                              double t, const LindbladOptions& opts = {});

// States at each of the requested (ascending) times.
std::vector<DensityMatrix> lindblad_trajectory(const Operator& h, const std::vector<LindbladTerm>& terms,
                                               const DensityMatrix& rho0, const std::vector<double>& times,
                                               const LindbladOptions& opts = {});

// Time-dependent Hamiltonian (GHz) for driven master equations.
using HamiltonianFn = std::function<Operator(double)>;

// RK4 with H sampled inside each step, stepping from 0 through the requested
// ascending times with step <= dt (dt > 0 required). Steps never straddle a breakpoint.
std::vector<DensityMatrix> lindblad_trajectory_driven(const HamiltonianFn& h, const std::vector<LindbladTerm>& terms,
                                                      const DensityMatrix& rho0, const std::vector<double>& times,
                                                      double dt, const std::vector<double>& breakpoints = {});

struct KrausChannel {
  std::vector<Operator> ops;
  // Largest entry of sum E^+ E - I.
  double completeness_error() const;
};

DensityMatrix kraus_apply(const KrausChannel& ch, const DensityMatrix& rho);

// Single-qubit channels. Level 0 is |0> = up, level 1 is |1> = down; |1> is the
// ground state, so relaxation moves population from |0> to |1>.
KrausChannel dephasing_channel(double t, double T2);
KrausChannel relaxation_channel(double t, double T1);

// Lifts a single-site channel onto one site of a register.
KrausChannel embed_channel(const KrausChannel& ch, std::size_t site, const SpinRegister& reg);

// T1 and T2 act on every listed site (all sites when empty):
// dephasing x = S_z at 1/T2, relaxation x = S_- at 1/(2 T1).
struct NoiseModel {
  std::optional<double> T1, T2;
  std::vector<LindbladTerm> custom;
  std::vector<std::size_t> sites;

  std::vector<LindbladTerm> terms(const SpinRegister& reg) const;
};

DensityMatrix partial_trace(const DensityMatrix& rho, const SpinRegister& reg, const std::set<std::size_t>& keep);

// Qubit state after the conditional-rotation toy environment with overlap parameter p.
DensityMatrix dephasing_toy_model(cplx alpha, cplx beta, double p);

struct MeasurementResult {
  std::vector<double> probabilities;       // per level of the measured site
  std::vector<DensityMatrix> post_states;  // zero matrix for zero-probability outcomes
};

MeasurementResult measure_z(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site);

// Post-measurement state for one outcome; throws when the outcome has zero probability.
DensityMatrix project(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site, int outcome);

// <sigma_axis> on a spin-1/2 site. x and y are read out as z-probability
// differences after R_y(pi/2) and R_x(pi/2) pre-rotations.
double expectation_pauli(const DensityMatrix& rho, const SpinRegister& reg, std::size_t site, char axis);

// Nodes and weights of n-point Gauss-Hermite quadrature (weight e^{-x^2}).
struct Quadrature {
  Eigen::VectorXd nodes, weights;
};
Quadrature gauss_hermite(int n);

struct EchoOptions {
  double sigma_f = 0.0;  // GHz, Gaussian spread of static detunings
  double T2 = 0.0;       // ns; 0 disables dephasing
  int nodes = 201;
};

struct EchoSignal {
  double free_decay = 0.0;  // |<sigma_x> + i <sigma_y>| at tau
  double echo = 0.0;        // same at 2 tau
};

// Ensemble of spins 1/2 with ideal instantaneous pi/2 and pi pulses about x.
EchoSignal hahn_echo_signal(double tau, const EchoOptions& opts);

struct BathCoupling {
  std::vector<Eigen::Vector3d> nuclear_positions;  // angstrom, relative to the molecule
  std::vector<Eigen::Vector3d> spin_positions;     // angstrom, one per central spin
  std::vector<double> g_central;
  double g_nuclear = 5.58569;  // proton
  Eigen::MatrixXd C;           // 1/ns, symmetric, one row per central spin

  // C_jj' = c0 sum_n D^zz_jn D^zz_j'n from the geometry (D in GHz).
  static BathCoupling from_geometry(std::vector<Eigen::Vector3d> spins, std::vector<double> g,
                                    std::vector<Eigen::Vector3d> nuclei, double g_nuclear, double c0);
};

// Dipolar tensor g_k g_N mu_B mu_N (3 r r^T / r^2 - 1) / r^3 in GHz, r in angstrom.
Eigen::Matrix3d dipolar_tensor(const Eigen::Vector3d& r, double g_k, double g_n);

// Pure-dephasing rate between eigenstates mu and nu (columns of eigvecs) from the
// fluctuating nuclear field acting on each s_j^z.
double bath_rate(const Operator& eigvecs, const SpinRegister& reg, int mu, int nu, const Eigen::MatrixXd& C);

// Rates between every pair of the lowest n states.
Eigen::MatrixXd bath_rate_matrix(const Operator& eigvecs, const SpinRegister& reg, int n, const Eigen::MatrixXd& C);

// Two spin-1/2 tetrahedra sharing site 0, Heisenberg couplings J on every edge
// (J < 0 ferromagnetic, J > 0 antiferromagnetic and frustrated) and a field along z.
Operator double_tetrahedron(double J, double B, double g = 2.0);
SpinRegister double_tetrahedron_register();

// Largest bath rate among pairs of the lowest n eigenstates.
double worst_bath_rate(const Operator& h, const SpinRegister& reg, int n, const Eigen::MatrixXd& C);

}  // namespace molspin
