#include "oracles.hpp"

#include <molspin/diagnostics.hpp>
#include <molspin/gates.hpp>
#include <molspin/open_system.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace molspin;

namespace {

SpinRegister qubits(int n) {
  SpinRegister reg;
  for (int k = 0; k < n; ++k) reg.add(SpinSite::electron(0.5, "q" + std::to_string(k)));
  return reg;
}

DensityMatrix plus_state() { return density_from_state((basis_state(2, 0) + basis_state(2, 1)) / std::sqrt(2.0)); }

std::vector<State> bell_states() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<State> out(4, State::Zero(4));
  out[0](0) = r, out[0](3) = r;   // Phi+
  out[1](0) = r, out[1](3) = -r;  // Phi-
  out[2](1) = r, out[2](2) = r;   // Psi+
  out[3](1) = r, out[3](2) = -r;  // Psi-
  return out;
}

DensityMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
  }
  const Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST(Lindblad, PureDephasingDecay) {
  const double T2 = 40.0;
  const auto o = spin_operators(0.5);
  const DensityMatrix rho0 = plus_state();
  for (double t : {0.0, 10.0, 40.0, 120.0}) {
    const DensityMatrix rho = lindblad_evolve(Operator::Zero(2, 2), {{o.Sz, 1.0 / T2}}, rho0, t);
    EXPECT_NEAR(rho(0, 1).real(), 0.5 * std::exp(-t / T2), 1e-6 * 0.5 * std::exp(-t / T2)) << t;
    EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
  }
}

TEST(Lindblad, RelaxationAndHalvedCoherenceRate) {
  const double T1 = 25.0;
  const auto o = spin_operators(0.5);
  const DensityMatrix rho0 = plus_state();
  for (double t : {5.0, 25.0, 60.0}) {
    const DensityMatrix rho = lindblad_evolve(Operator::Zero(2, 2), {{o.Sminus, 1.0 / (2.0 * T1)}}, rho0, t);
    EXPECT_NEAR(rho(0, 0).real(), 0.5 * std::exp(-t / T1), 1e-8) << t;
    EXPECT_NEAR(std::abs(rho(0, 1)), 0.5 * std::exp(-t / (2.0 * T1)), 1e-8) << t;
  }
}

TEST(Lindblad, NoRatesMatchesUnitary) {
  const Operator h = 0.3 * pauli_x() + 0.1 * pauli_z();
  const DensityMatrix rho0 = density_from_state(basis_state(2, 0));
  LindbladOptions opts;
  opts.dt = 2e-3;
  const DensityMatrix rho = lindblad_evolve(h, {{spin_operators(0.5).Sz, 0.0}}, rho0, 7.0, opts);
  const Operator u = matexp_unitary(h, 7.0);
  EXPECT_LT((rho - u * rho0 * u.adjoint()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lindblad, RejectsNegativeRate) {
  EXPECT_THROW(lindblad_evolve(Operator::Zero(2, 2), {{pauli_z(), -1.0}}, plus_state(), 1.0), std::invalid_argument);
}

TEST(Lindblad, TraceAndPositivityAlongTrajectory) {
  std::mt19937_64 rng(9);
  const SpinRegister reg = qubits(2);
  NoiseModel noise;
  noise.T1 = 30.0;
  noise.T2 = 20.0;
  const Operator h = 0.2 * embed(pauli_x(), 0, reg) + 0.05 * embed_pair(pauli_z(), 0, pauli_z(), 1, reg);
  const DensityMatrix rho0 = random_density(4, rng);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(5.0 * k);
  // Pure dephasing is unital, so purity can only fall.
  NoiseModel dephasing;
  dephasing.T2 = 20.0;
  double last_purity = 2.0;
  for (const auto& rho : lindblad_trajectory(h, dephasing.terms(reg), rho0, times)) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Operator>(rho).eigenvalues().minCoeff(), -1e-7);
    EXPECT_LE(purity(rho), last_purity + 1e-9);
    last_purity = purity(rho);
  }
  for (const auto& rho : lindblad_trajectory(h, noise.terms(reg), rho0, times)) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Operator>(rho).eigenvalues().minCoeff(), -1e-7);
  }
}

TEST(Lindblad, DrivenTrajectoryMatchesStatic) {
  const Operator h = 0.25 * pauli_y();
  const std::vector<LindbladTerm> terms{{spin_operators(0.5).Sz, 0.02}};
  const std::vector<double> times{0.0, 3.0, 9.0};
  const auto a = lindblad_trajectory(h, terms, plus_state(), times);
  const auto b = lindblad_trajectory_driven([&](double) { return h; }, terms, plus_state(), times, 0.01);
  for (std::size_t k = 0; k < times.size(); ++k) EXPECT_LT((a[k] - b[k]).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(NoiseModel, WarnsWhenT2ExceedsTwiceT1) {
  NoiseModel noise;
  noise.T1 = 10.0;
  noise.T2 = 30.0;
  WarningCapture capture;
  const auto terms = noise.terms(qubits(1));
  EXPECT_EQ(terms.size(), 2u);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(Kraus, DephasingChannel) {
  const KrausChannel ch = dephasing_channel(15.0, 30.0);
  EXPECT_LT(ch.completeness_error(), 1e-12);
  const DensityMatrix rho = kraus_apply(ch, plus_state());
  EXPECT_NEAR(rho(0, 1).real(), 0.5 * std::exp(-0.5), 1e-12);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
}

TEST(Kraus, RelaxationChannelFillsGround) {
  const DensityMatrix rho = kraus_apply(relaxation_channel(10.0, 20.0), density_from_state(basis_state(2, 0)));
  EXPECT_NEAR(rho(1, 1).real(), 1.0 - std::exp(-0.5), 1e-12);
  EXPECT_NEAR(rho(0, 0).real(), std::exp(-0.5), 1e-12);
}

TEST(Kraus, IdentityAndIncompleteChannels) {
  std::mt19937_64 rng(1);
  const DensityMatrix rho = random_density(3, rng);
  EXPECT_LT((kraus_apply({{identity(3)}}, rho) - rho).norm(), 1e-15);
  EXPECT_THROW(kraus_apply({{0.5 * identity(3)}}, rho), std::invalid_argument);
}

TEST(Kraus, AgreesWithLindblad) {
  const double T = 20.0;
  const auto o = spin_operators(0.5);
  std::mt19937_64 rng(13);
  const DensityMatrix rho0 = random_density(2, rng);
  for (double t = 0.0; t <= 5.0 * T; t += 10.0) {
    const auto dephased = lindblad_evolve(Operator::Zero(2, 2), {{o.Sz, 1.0 / T}}, rho0, t);
    EXPECT_LT((dephased - kraus_apply(dephasing_channel(t, T), rho0)).cwiseAbs().maxCoeff(), 1e-6) << t;
    const auto relaxed = lindblad_evolve(Operator::Zero(2, 2), {{o.Sminus, 1.0 / (2.0 * T)}}, rho0, t);
    EXPECT_LT((relaxed - kraus_apply(relaxation_channel(t, T), rho0)).cwiseAbs().maxCoeff(), 1e-6) << t;
  }
}

TEST(Kraus, EmbeddedChannelActsOnOneSite) {
  const SpinRegister reg = qubits(2);
  const KrausChannel ch = embed_channel(dephasing_channel(5.0, 5.0), 1, reg);
  EXPECT_LT(ch.completeness_error(), 1e-12);
  const DensityMatrix rho = kraus_apply(ch, density_from_state(bell_states()[0]));
  EXPECT_NEAR(rho(0, 3).real(), 0.5 * std::exp(-1.0), 1e-12);
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(21);
  const SpinRegister reg({SpinSite::electron(0.5, "a"), SpinSite::electron(1.0, "b")});
  const DensityMatrix a = random_density(2, rng), b = random_density(3, rng);
  EXPECT_LT((partial_trace(kron(a, b), reg, {0}) - a).norm(), 1e-14);
  EXPECT_LT((partial_trace(kron(a, b), reg, {1}) - b).norm(), 1e-14);
  EXPECT_THROW(partial_trace(kron(a, b), reg, {}), std::invalid_argument);
}

TEST(PartialTrace, BellStatesAreMaximallyMixed) {
  const SpinRegister reg = qubits(2);
  for (const auto& bell : bell_states()) {
    const DensityMatrix rho = density_from_state(bell);
    EXPECT_LT((partial_trace(rho, reg, {0}) - 0.5 * identity(2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((partial_trace(rho, reg, {1}) - 0.5 * identity(2)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PartialTrace, LocalObservableOnBellState) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    Operator m(2, 2);
    m << n(rng), cplx(n(rng), n(rng)), 0.0, n(rng);
    m(1, 0) = std::conj(m(0, 1));
    for (const auto& bell : bell_states()) {
      const double lhs = bell.dot(kron(m, identity(2)) * bell).real();
      EXPECT_NEAR(lhs, 0.5 * (m(0, 0) + m(1, 1)).real(), 1e-10);
    }
  }
}

TEST(ToyModel, ClosedFormCases) {
  const cplx a(0.6, 0.0), b(0.0, 0.8);
  EXPECT_LT((dephasing_toy_model(a, b, 0.0) - density_from_state(State(Eigen::Vector2cd(a, b)))).norm(), 1e-15);
  EXPECT_EQ(std::abs(dephasing_toy_model(a, b, 1.0)(0, 1)), 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(dephasing_toy_model(r, r, 0.75)(0, 1).real(), 0.25, 1e-15);
  EXPECT_THROW(dephasing_toy_model(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST(ToyModel, MatchesConditionalRotationOfEnvironment) {
  // System (x) environment; the environment is rotated by R_y(theta) when the
  // system is |1>, leaving overlap cos(theta/2) = sqrt(1 - p).
  const SpinRegister reg = qubits(2);
  const cplx alpha(0.6, 0.0), beta(0.0, 0.8);
  for (double p : {0.1, 0.5, 0.75, 0.99}) {
    const double theta = 2.0 * std::asin(std::sqrt(p));
    Operator cu = Operator::Zero(4, 4);
    cu.block(0, 0, 2, 2) = identity(2);
    cu.block(2, 2, 2, 2) = oracle::exp_minus_i(0.5 * theta * oracle::pauli('y'));
    const State psi = cu * kron(State(Eigen::Vector2cd(alpha, beta)), basis_state(2, 0));
    const DensityMatrix reduced = partial_trace(density_from_state(psi), reg, {0});
    EXPECT_LT((reduced - dephasing_toy_model(alpha, beta, p)).cwiseAbs().maxCoeff(), 1e-12) << p;
  }
}

TEST(Measurement, PlusStateAndMixture) {
  const SpinRegister reg = qubits(1);
  const auto m = measure_z(plus_state(), reg, 0);
  EXPECT_NEAR(m.probabilities[0], 0.5, 1e-15);
  EXPECT_NEAR(m.probabilities[1], 0.5, 1e-15);
  const auto mixed = measure_z(0.5 * identity(2), reg, 0);
  EXPECT_LT((mixed.post_states[0] - density_from_state(basis_state(2, 0))).norm(), 1e-15);
  EXPECT_LT((mixed.post_states[1] - density_from_state(basis_state(2, 1))).norm(), 1e-15);
}

TEST(Measurement, BellCollapse) {
  const SpinRegister reg = qubits(2);
  const auto m = measure_z(density_from_state(bell_states()[3]), reg, 0);
  EXPECT_NEAR(m.probabilities[0], 0.5, 1e-15);
  EXPECT_LT((m.post_states[0] - density_from_state(basis_state(4, 1))).norm(), 1e-14);
  EXPECT_LT((m.post_states[1] - density_from_state(basis_state(4, 2))).norm(), 1e-14);
  EXPECT_THROW(project(density_from_state(basis_state(4, 1)), reg, 0, 1), std::invalid_argument);
}

TEST(PauliExpectation, PlusAndGeneralState) {
  const SpinRegister reg = qubits(1);
  EXPECT_NEAR(expectation_pauli(plus_state(), reg, 0, 'x'), 1.0, 1e-12);
  EXPECT_NEAR(expectation_pauli(plus_state(), reg, 0, 'y'), 0.0, 1e-12);
  EXPECT_NEAR(expectation_pauli(plus_state(), reg, 0, 'z'), 0.0, 1e-12);
  const cplx a(0.3, 0.4), b = std::sqrt(1.0 - std::norm(a)) * std::polar(1.0, 0.7);
  const DensityMatrix rho = density_from_state(State(Eigen::Vector2cd(a, b)));
  EXPECT_NEAR(expectation_pauli(rho, reg, 0, 'x'), 2.0 * (a * std::conj(b)).real(), 1e-12);
}

TEST(PauliExpectation, PreRotationEqualsDirectTrace) {
  std::mt19937_64 rng(31);
  const SpinRegister reg = qubits(2);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density(4, rng);
    for (std::size_t site : {0u, 1u}) {
      for (char axis : {'x', 'y', 'z'}) {
        const Operator sigma = site == 0 ? oracle::kron(oracle::pauli(axis), oracle::eye(2))
                                         : oracle::kron(oracle::eye(2), oracle::pauli(axis));
        EXPECT_NEAR(expectation_pauli(rho, reg, site, axis), (rho * sigma).trace().real(), 1e-10);
      }
    }
  }
}

TEST(HahnEcho, NoInhomogeneity) {
  const EchoSignal s = hahn_echo_signal(10.0, {});
  EXPECT_NEAR(s.echo, 1.0, 1e-12);
  EXPECT_NEAR(s.free_decay, 1.0, 1e-12);
}

TEST(HahnEcho, GaussianSpreadRefocuses) {
  // Analytic Gaussian average: |<exp(i 2 pi f tau)>| = exp(-(2 pi sigma tau)^2 / 2).
  EchoOptions opts;
  opts.sigma_f = 0.01;
  for (double tau : {5.0, 10.0, 20.0}) {
    const EchoSignal s = hahn_echo_signal(tau, opts);
    EXPECT_NEAR(s.free_decay, std::exp(-0.5 * std::pow(2.0 * oracle::pi * 0.01 * tau, 2)), 1e-9) << tau;
    EXPECT_NEAR(s.echo, 1.0, 1e-9) << tau;
  }
}

TEST(HahnEcho, DephasingIsNotRefocused) {
  EchoOptions opts;
  opts.sigma_f = 0.01;
  opts.T2 = 50.0;
  opts.nodes = 41;
  const EchoSignal s = hahn_echo_signal(10.0, opts);
  EXPECT_NEAR(s.echo, std::exp(-20.0 / 50.0), 1e-6);
}

TEST(Dipolar, AxialFormAndScaling) {
  // mu0/4pi mu_B mu_N / h at 1 angstrom from the SI values, in GHz.
  const double c = 1e-7 * 9.2740100783e-24 * 5.0507837461e-27 / 1e-30 / 6.62607015e-34 * 1e-9;
  const Eigen::Matrix3d d = dipolar_tensor({0, 0, 2.0}, 2.0, 5.58569);
  const double scale = 2.0 * 5.58569 * c / 8.0;
  EXPECT_NEAR(d(0, 0), -scale, 1e-6 * scale);
  EXPECT_NEAR(d(1, 1), -scale, 1e-6 * scale);
  EXPECT_NEAR(d(2, 2), 2.0 * scale, 1e-6 * scale);
  const Eigen::Vector3d r(1.2, -0.7, 2.1);
  const Eigen::Matrix3d t = dipolar_tensor(r, 2.0, 5.58569);
  EXPECT_NEAR(t.trace(), 0.0, 1e-15);
  EXPECT_LT((dipolar_tensor(2.0 * r, 2.0, 5.58569) - t / 8.0).norm(), 1e-15);
  EXPECT_THROW(dipolar_tensor(Eigen::Vector3d::Zero(), 2.0, 5.58569), std::invalid_argument);
}

TEST(BathRate, SingleSpinAndSymmetry) {
  const SpinRegister reg = qubits(1);
  Eigen::MatrixXd C(1, 1);
  C << 0.37;
  const Operator v = identity(2);
  EXPECT_DOUBLE_EQ(bath_rate(v, reg, 0, 1, C), 0.37);
  EXPECT_EQ(bath_rate(v, reg, 1, 1, C), 0.0);
  const SpinRegister three = qubits(3);
  std::mt19937_64 rng(5);
  const auto es = eigendecompose(random_density(8, rng));
  Eigen::MatrixXd C3 = Eigen::MatrixXd::Constant(3, 3, 0.2);
  C3.diagonal().setConstant(0.5);
  const Eigen::MatrixXd g = bath_rate_matrix(es.vectors, three, 8, C3);
  EXPECT_LT((g - g.transpose()).norm(), 1e-15);
  EXPECT_EQ(g.diagonal().norm(), 0.0);
}

TEST(BathRate, GeometryBuildsSymmetricCoupling) {
  const auto b = BathCoupling::from_geometry({{0, 0, 0}, {3, 0, 0}}, {2.0, 2.0},
                                             {{0, 0, 4}, {1, 2, 3}, {-2, 1, 0.5}}, 5.58569, 1.0);
  EXPECT_LT((b.C - b.C.transpose()).norm(), 1e-15);
  const double dzz = dipolar_tensor({0, 0, 4}, 2.0, 5.58569)(2, 2);
  const double dzz2 = dipolar_tensor({1, 2, 3}, 2.0, 5.58569)(2, 2);
  const double dzz3 = dipolar_tensor({-2, 1, 0.5}, 2.0, 5.58569)(2, 2);
  EXPECT_NEAR(b.C(0, 0), dzz * dzz + dzz2 * dzz2 + dzz3 * dzz3, 1e-18);
}

TEST(BathRate, CompetingExchangeProtectsCoherence) {
  // Frozen from an independent diagonalisation of the seven-spin cluster at
  // 10 mT: the worst rate among the lowest eight ferromagnetic states is 64/7 C.
  const SpinRegister reg = double_tetrahedron_register();
  Eigen::MatrixXd C = Eigen::MatrixXd::Constant(7, 7, 0.5e-3);
  C.diagonal().setConstant(1e-3);
  const double ferro = worst_bath_rate(double_tetrahedron(-1.0, 0.01), reg, 8, C);
  const double competing = worst_bath_rate(double_tetrahedron(1.0, 0.01), reg, 8, C);
  EXPECT_NEAR(ferro, 9.142857142857e-3, 1e-9);
  EXPECT_LT(competing, ferro);
  EXPECT_LT(competing, 1e-3);
}
