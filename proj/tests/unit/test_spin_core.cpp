#include "oracles.hpp"

#include <molspin/spin_core.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace molspin;

namespace {

Operator random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(SpinOperators, SpinHalfIsHalfPauli) {
  const auto o = spin_operators(0.5);
  EXPECT_LT((o.Sx - 0.5 * oracle::pauli('x')).norm(), 1e-15);
  EXPECT_LT((o.Sy - 0.5 * oracle::pauli('y')).norm(), 1e-15);
  EXPECT_LT((o.Sz - 0.5 * oracle::pauli('z')).norm(), 1e-15);
}

TEST(SpinOperators, SpinOneSzDescending) {
  const auto o = spin_operators(1.0);
  Operator expected = Operator::Zero(3, 3);
  expected.diagonal() << 1.0, 0.0, -1.0;
  EXPECT_LT((o.Sz - expected).norm(), 1e-15);
}

TEST(SpinOperators, LargeSpinMatrixElement) {
  // s = 10, m = 0 sits at index 10; neighbours m = +-1 at 9 and 11.
  const auto o = spin_operators(10.0);
  EXPECT_NEAR(o.Sx(9, 10).real(), 0.5 * std::sqrt(110.0), 1e-12);
  EXPECT_NEAR(o.Sx(11, 10).real(), 0.5 * std::sqrt(110.0), 1e-12);
}

TEST(SpinOperators, RejectsNonHalfInteger) {
  EXPECT_THROW(spin_operators(0.3), std::invalid_argument);
  EXPECT_THROW(spin_operators(0.0), std::invalid_argument);
}

TEST(SpinOperators, MatchesLadderOracle) {
  for (double s : {0.5, 1.0, 1.5, 2.5, 3.5, 7.0}) {
    const auto o = spin_operators(s);
    const auto r = oracle::spin(s);
    EXPECT_LT((o.Sx - r.x).norm(), 1e-12) << s;
    EXPECT_LT((o.Sy - r.y).norm(), 1e-12) << s;
    EXPECT_LT((o.Splus - r.plus).norm(), 1e-12) << s;
    EXPECT_LT((o.Sminus - r.minus).norm(), 1e-12) << s;
  }
}

class SpinAlgebra : public ::testing::TestWithParam<double> {};

TEST_P(SpinAlgebra, CommutatorsAndCasimir) {
  const double s = GetParam();
  const auto o = spin_operators(s);
  const cplx i(0.0, 1.0);
  EXPECT_LT((commutator(o.Sx, o.Sy) - i * o.Sz).norm(), 1e-12);
  EXPECT_LT((commutator(o.Sy, o.Sz) - i * o.Sx).norm(), 1e-12);
  EXPECT_LT((commutator(o.Sz, o.Sx) - i * o.Sy).norm(), 1e-12);
  const Operator casimir = o.Sx * o.Sx + o.Sy * o.Sy + o.Sz * o.Sz;
  EXPECT_LT((casimir - s * (s + 1) * identity(o.Sz.rows())).norm(), 1e-12);
  EXPECT_LT((o.Splus - (o.Sx + i * o.Sy)).norm(), 1e-12);
  EXPECT_LT((o.Sminus - (o.Sx - i * o.Sy)).norm(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Spins, SpinAlgebra, ::testing::Values(0.5, 1.0, 1.5, 2.0, 2.5, 5.0, 10.0));

TEST(Embed, PauliOnFirstOfTwo) {
  const SpinRegister reg({SpinSite::electron(0.5, "a"), SpinSite::electron(0.5, "b")});
  EXPECT_LT((embed(pauli_z(), 0, reg) - oracle::kron(oracle::pauli('z'), oracle::eye(2))).norm(), 1e-15);
}

TEST(Embed, IdentityEmbedsToIdentity) {
  const SpinRegister reg({SpinSite::electron(0.5, "a"), SpinSite::electron(1.0, "b"), SpinSite::nucleus(1.5, "n")});
  for (std::size_t k = 0; k < reg.size(); ++k) {
    EXPECT_LT((embed(identity(reg.site_dim(k)), k, reg) - identity(reg.total_dim())).norm(), 1e-15);
  }
}

TEST(Embed, SpinOneLoweringByHand) {
  const SpinRegister reg({SpinSite::electron(0.5, "e"), SpinSite::electron(1.0, "s")});
  const Operator sx = embed(spin_operators(1.0).Sx, 1, reg);
  const State in = product_state(reg, {1, 0});  // |down> (x) |m = 1>
  State expected = State::Zero(6);
  expected(reg.flat_index({1, 1})) = 1.0 / std::sqrt(2.0);  // |down> (x) |m = 0>
  EXPECT_LT((sx * in - expected).norm(), 1e-15);
}

TEST(Embed, RejectsBadInput) {
  const SpinRegister reg({SpinSite::electron(0.5, "a"), SpinSite::electron(1.0, "b")});
  EXPECT_THROW(embed(pauli_x(), 1, reg), std::invalid_argument);
  EXPECT_THROW(embed(pauli_x(), 2, reg), std::out_of_range);
}

TEST(Embed, LinearAndDistinctSitesCommute) {
  std::mt19937_64 rng(7);
  const SpinRegister reg({SpinSite::electron(0.5, "a"), SpinSite::electron(1.0, "b"), SpinSite::electron(1.5, "c")});
  for (int trial = 0; trial < 5; ++trial) {
    const Operator a = random_hermitian(3, rng);
    const Operator b = random_hermitian(3, rng);
    const Operator c = random_hermitian(4, rng);
    EXPECT_LT((embed(a + 2.5 * b, 1, reg) - embed(a, 1, reg) - 2.5 * embed(b, 1, reg)).norm(), 1e-12);
    EXPECT_LT(commutator(embed(a, 1, reg), embed(c, 2, reg)).norm(), 1e-12);
  }
}

TEST(Register, FlatIndexRoundTrip) {
  const SpinRegister reg({SpinSite::electron(1.0, "a"), SpinSite::nucleus(1.5, "n"), SpinSite::boson_mode(2, "m")});
  EXPECT_EQ(reg.total_dim(), 36);
  for (int f = 0; f < reg.total_dim(); ++f) EXPECT_EQ(reg.flat_index(reg.levels_of(f)), f);
  EXPECT_EQ(reg.index_of("n"), 1u);
}

TEST(MatexpUnitary, RotationAboutY) {
  const double theta = 1.234, t = 3.0;
  const Operator h = 0.5 * pauli_y() * (theta / (2.0 * oracle::pi * t));
  const Operator expected = std::cos(theta / 2) * oracle::eye(2) - oracle::I * std::sin(theta / 2) * oracle::pauli('y');
  EXPECT_LT((matexp_unitary(h, t) - expected).norm(), 1e-12);
}

TEST(MatexpUnitary, FullTurnIsMinusIdentity) {
  for (char axis : {'x', 'y', 'z'}) {
    const Operator h = 0.5 * oracle::pauli(axis);  // a full turn at 1 GHz takes 1 ns
    EXPECT_LT((matexp_unitary(h, 1.0) + oracle::eye(2)).norm(), 1e-10) << axis;
  }
}

TEST(MatexpUnitary, ZeroIsIdentity) {
  EXPECT_LT((matexp_unitary(Operator::Zero(4, 4), 2.0) - identity(4)).norm(), 1e-15);
}

TEST(MatexpUnitary, RejectsNonHermitian) {
  Operator a = Operator::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(matexp_unitary(a, 1.0), std::invalid_argument);
}

TEST(MatexpUnitary, UnitaryAndComposes) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator h = random_hermitian(6, rng);
    const Operator u1 = matexp_unitary(h, 0.3), u2 = matexp_unitary(h, 0.45);
    EXPECT_LT((u1.adjoint() * u1 - identity(6)).norm(), 1e-10);
    EXPECT_LT((u1 * u2 - matexp_unitary(h, 0.75)).norm(), 1e-10);
    EXPECT_LT((u1 - oracle::evolve(h, 0.3)).norm(), 1e-10);
  }
}

TEST(Expm, AgreesWithSpectralPathAndTaylor) {
  std::mt19937_64 rng(3);
  const Operator h = random_hermitian(5, rng);
  const Operator gen = cplx(0.0, -2.0 * oracle::pi * 0.2) * h;
  EXPECT_LT((expm(gen) - matexp_unitary(h, 0.2)).norm(), 1e-10);
  // Non-hermitian generator: nilpotent, exp(N) = I + N.
  Operator n = Operator::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 0.0;
  EXPECT_LT((expm(n) - (identity(3) + n)).norm(), 1e-14);
}

TEST(Eigendecompose, PauliZ) {
  const auto es = eigendecompose(pauli_z());
  EXPECT_NEAR(es.values(0), -1.0, 1e-15);
  EXPECT_NEAR(es.values(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-15);  // |1>
  EXPECT_NEAR(std::abs(es.vectors(0, 1)), 1.0, 1e-15);  // |0>
}

TEST(Eigendecompose, SingletTriplet) {
  const double J = 0.7;
  const auto s = spin_operators(0.5);
  const Operator h = J * (kron(s.Sx, s.Sx) + kron(s.Sy, s.Sy) + kron(s.Sz, s.Sz));
  const auto es = eigendecompose(h);
  EXPECT_NEAR(es.values(0), -0.75 * J, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(es.values(k), 0.25 * J, 1e-14);
}

TEST(Eigendecompose, RandomHermitianResiduals) {
  std::mt19937_64 rng(5);
  const Operator h = random_hermitian(8, rng);
  const auto es = eigendecompose(h);
  for (int k = 1; k < 8; ++k) EXPECT_LE(es.values(k - 1), es.values(k));
  EXPECT_LT((es.vectors.adjoint() * es.vectors - identity(8)).norm(), 1e-12);
  for (int k = 0; k < 8; ++k) {
    EXPECT_LT((h * es.vectors.col(k) - es.values(k) * es.vectors.col(k)).norm(), 1e-10 * operator_norm(h));
  }
  EXPECT_THROW(eigendecompose(h + Operator::Identity(8, 8) * cplx(0, 1)), std::invalid_argument);
}

TEST(Fidelity, GlobalPhaseInsensitive) {
  const Operator u = oracle::exp_minus_i(0.4 * oracle::pauli('x'));
  const cplx phase = std::polar(1.0, 0.9);
  EXPECT_NEAR(gate_fidelity(u, phase * u), 1.0, 1e-14);
  EXPECT_LT(phase_aligned_distance(u, phase * u), 1e-14);
  EXPECT_NEAR(gate_fidelity(pauli_x(), pauli_z()), 0.0, 1e-14);
}
