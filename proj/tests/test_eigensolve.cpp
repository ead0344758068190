#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "cli/models.hpp"
#include "egaudin/eigensolve.hpp"
#include "egaudin/errors.hpp"
#include "golden.hpp"

using namespace egaudin;

namespace {

CMatrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST(Eigensolve, PauliX) {
  CMatrix a(2, 2);
  a << 0, 1, 1, 0;
  const Spectrum s = eigensolve(make_operator(a));
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], -1.0, 1e-15);
  EXPECT_NEAR(s.values[1], 1.0, 1e-15);
  EXPECT_TRUE(s.full);
}

TEST(Eigensolve, RejectsNonHermitian) {
  CMatrix a(2, 2);
  a << 0, 1, 2, 0;
  EXPECT_THROW(eigensolve(make_operator(a)), DomainError);
}

TEST(Eigensolve, VectorsHaveSmallResiduals) {
  const OperatorMatrix op = make_operator(random_hermitian(40, 1));
  EigensolveOptions o;
  o.want_vectors = true;
  const Spectrum s = eigensolve(op, o);
  ASSERT_TRUE(s.vectors);
  EXPECT_LT(s.max_residual, 1e-12);
}

TEST(Eigensolve, LanczosAgreesWithDenseSolver) {
  const CMatrix a = random_hermitian(1300, 7);
  Eigen::SelfAdjointEigenSolver<CMatrix> dense(a, Eigen::EigenvaluesOnly);
  EigensolveOptions o;
  o.lowest_count = 3;
  o.max_krylov = 1300;
  o.want_vectors = true;
  const Spectrum s = eigensolve(make_operator(a), o);
  EXPECT_FALSE(s.full);
  ASSERT_EQ(s.values.size(), 3u);
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.values[i], dense.eigenvalues()(i), 1e-9 * norm);
  EXPECT_LT(s.max_residual, 1e-10);
}

TEST(Eigensolve, LanczosReportsNonConvergence) {
  EigensolveOptions o;
  o.max_krylov = 5;
  EXPECT_THROW(eigensolve(make_operator(random_hermitian(1100, 3)), o), NumericalError);
}

TEST(Eigensolve, ThreeSpinGroundStateAndFullSpectrum) {
  const SpinSystem sys = cli::three_spin_system();
  const Spectrum s = eigensolve(build_hamiltonian(cli::three_spin_coefficients(), sys));
  ASSERT_EQ(s.values.size(), 24u);
  // The tabulated energies are twice the eigenvalues of H.
  EXPECT_NEAR(2 * s.values.front(), golden::kEvenEnergies.front(), 1e-5);
  std::vector<double> table(golden::kEvenEnergies.begin(), golden::kEvenEnergies.end());
  table.insert(table.end(), golden::kOddEnergies.begin(), golden::kOddEnergies.end());
  std::sort(table.begin(), table.end());
  for (std::size_t i = 0; i < 24; ++i) EXPECT_NEAR(2 * s.values[i], table[i], 1e-5) << i;
}
