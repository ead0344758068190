#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "cli/models.hpp"
#include "egaudin/errors.hpp"
#include "egaudin/spinops.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace egaudin;

namespace {

std::vector<double> spins_of(const SpinSystem& s) {
  std::vector<double> out;
  for (const auto& site : s.sites()) out.push_back(site.s);
  return out;
}

std::vector<double> z_of(const SpinSystem& s) {
  std::vector<double> out;
  for (const auto& site : s.sites()) out.push_back(site.z);
  return out;
}

double relative_commutator(const CMatrix& a, const CMatrix& b) {
  return commutator_max(a, b) / (max_abs(a) * max_abs(b));
}

}  // namespace

TEST(SpinMatrices, SpinHalf) {
  const SpinMatrices m = spin_matrices(0.5);
  CMatrix sz(2, 2);
  sz << 0.5, 0, 0, -0.5;
  EXPECT_LT(max_abs(m.Sz - sz), 1e-15);
  EXPECT_LT(max_abs(m.Splus - (m.Sx + Complex(0, 1) * m.Sy)), 1e-15);
  EXPECT_LT(max_abs(m.Sminus - (m.Sx - Complex(0, 1) * m.Sy)), 1e-15);
}

TEST(SpinMatrices, AlgebraAndCasimir) {
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const SpinMatrices m = spin_matrices(s);
    EXPECT_EQ(m.Sz.rows(), static_cast<Eigen::Index>(2 * s + 1));
    EXPECT_LT(max_abs(m.Sx * m.Sy - m.Sy * m.Sx - Complex(0, 1) * m.Sz), 1e-14) << s;
    const CMatrix casimir = m.Sx * m.Sx + m.Sy * m.Sy + m.Sz * m.Sz;
    EXPECT_LT(max_abs(casimir - s * (s + 1) * CMatrix::Identity(m.Sz.rows(), m.Sz.rows())), 1e-14);
  }
}

TEST(SpinMatrices, RejectsInvalidSpin) {
  EXPECT_THROW(spin_matrices(0.0), DomainError);
  EXPECT_THROW(spin_matrices(0.3), DomainError);
  EXPECT_THROW(spin_matrices(-1.0), DomainError);
}

TEST(Couplings, MatchIndependentOracle) {
  const EllipticContext ctx = make_context(0.5);
  for (double z : {0.05, 0.2, 0.4, 1.0, 1.6, 2.5}) {
    const Couplings c = couplings(z, ctx);
    const std::vector<double> want = oracle::couplings(z, 0.5);
    EXPECT_NEAR(c.x, want[0], 1e-12 * std::abs(want[0]));
    EXPECT_NEAR(c.y, want[1], 1e-12 * std::abs(want[1]) + 1e-14);
    EXPECT_NEAR(c.z, want[2], 1e-12 * std::abs(want[2]) + 1e-14);
  }
}

TEST(Couplings, OddOrderedAndReferenceValue) {
  const EllipticContext ctx = make_context(0.5);
  const Couplings p = couplings(0.3, ctx);
  const Couplings n = couplings(-0.3, ctx);
  EXPECT_NEAR(p.x, -n.x, 1e-14);
  EXPECT_NEAR(p.y, -n.y, 1e-14);
  EXPECT_NEAR(p.z, -n.z, 1e-14);
  const Couplings c = couplings(0.4, ctx);
  EXPECT_GT(c.x, c.y);
  EXPECT_GT(c.y, c.z);
  EXPECT_GT(c.z, 0.0);
  EXPECT_NEAR(couplings(0.2, ctx).x, 5.14088, 5e-6);
  EXPECT_NEAR(couplings(0.2, ctx).x / 4, 1.28522, 5e-6);
}

TEST(Couplings, SingularAtZerosOfSn) {
  const EllipticContext ctx = make_context(0.5);
  EXPECT_THROW(couplings(0.0, ctx), PoleError);
  EXPECT_THROW(couplings(2 * ctx.K(), ctx), PoleError);
}

TEST(SpinSystem, Validation) {
  const EllipticContext ctx = make_context(0.5);
  EXPECT_THROW(SpinSystem({{0.5, 0.1}, {0.5, 0.1}}, ctx), DomainError);
  EXPECT_THROW(SpinSystem({{0.7, 0.1}, {0.5, 0.2}}, ctx), DomainError);
  EXPECT_THROW(SpinSystem({{0.5, 0.1}, {1.0, 0.2}}, ctx).root_count(), DomainError);
  EXPECT_EQ(cli::three_spin_system().root_count(), 3);
  EXPECT_DOUBLE_EQ(cli::three_spin_system().dimension(), 24.0);
}

TEST(Integrals, MatchKroneckerOracle) {
  const SpinSystem sys = cli::three_spin_system();
  for (std::size_t i = 0; i < 3; ++i) {
    const CMatrix want = oracle::elliptic_integral(i, spins_of(sys), z_of(sys), 0.5);
    const OperatorMatrix got = build_integral(i, sys);
    EXPECT_TRUE(got.hermitian);
    EXPECT_LT(max_abs(got.entries - want), 1e-12 * max_abs(want)) << i;
    EXPECT_NEAR(std::abs(got.entries.trace()), 0.0, 1e-12);
  }
}

TEST(Integrals, ThreeSpinCommute) {
  const SpinSystem sys = cli::three_spin_system();
  const CMatrix r1 = build_integral(0, sys).entries;
  const CMatrix r2 = build_integral(1, sys).entries;
  const CMatrix r3 = build_integral(2, sys).entries;
  EXPECT_LT(commutator_max(r1, r2), 1e-10);
  EXPECT_LT(relative_commutator(r1, r3), 1e-9);
  EXPECT_LT(relative_commutator(r2, r3), 1e-9);
}

TEST(Integrals, RandomMixedSpinSystemsCommute) {
  std::mt19937_64 rng(2024);
  const EllipticContext ctx = make_context(0.5);
  std::uniform_real_distribution<double> zd(0.0, ctx.K());
  std::uniform_int_distribution<int> twice(1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<SpinSite> sites;
    while (sites.size() < 4) {
      const double z = zd(rng);
      bool ok = true;
      for (const auto& s : sites) ok = ok && std::abs(s.z - z) > 0.02;
      if (ok) sites.push_back({0.5 * twice(rng), z});
    }
    const SpinSystem sys(sites, ctx);
    std::vector<CMatrix> r;
    for (std::size_t i = 0; i < 4; ++i) r.push_back(build_integral(i, sys).entries);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) EXPECT_LT(relative_commutator(r[i], r[j]), 1e-9);
    }
  }
}

TEST(Integrals, ModulusSquaredConventionBreaksCommutation) {
  const SpinSystem sys = cli::three_spin_system(CouplingConvention::ModulusSquared);
  const CMatrix r1 = build_integral(0, sys).entries;
  const CMatrix r2 = build_integral(1, sys).entries;
  EXPECT_GT(relative_commutator(r1, r2), 1e-6);
}

TEST(Integrals, TrigonometricLimit) {
  const SpinSystem sys(cli::three_spin_sites(), make_context(1e-6));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(max_abs(build_integral(i, sys).entries - trigonometric_integral(i, sys).entries), 1e-5);
  }
}

TEST(Integrals, HyperbolicLimitIsTwiceTheReferenceForm) {
  const SpinSystem sys(cli::three_spin_sites(), make_context(1 - 1e-9));
  for (std::size_t i = 0; i < 3; ++i) {
    const CMatrix r = build_integral(i, sys).entries;
    const CMatrix h = hyperbolic_integral(i, sys).entries;
    EXPECT_LT(max_abs(r - 2.0 * h), 1e-4);
    EXPECT_GT(max_abs(r - h), 0.1);
  }
}

TEST(Hamiltonian, ThreeSpinCouplingsMatchReferenceTable) {
  const SpinSystem sys = cli::three_spin_system();
  const auto coeffs = cli::three_spin_coefficients();
  std::vector<double> got;
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    const Couplings c = pair_coupling(coeffs, i, j, sys);
    got.insert(got.end(), {c.x, c.y, c.z});
  }
  for (std::size_t n = 0; n < 9; ++n) {
    const double want = golden::kCouplings[n];
    EXPECT_NEAR(got[n], want, 0.5e-5 * std::pow(10.0, std::floor(std::log10(want)) + 1)) << n;
  }
}

TEST(Hamiltonian, LinearCombinationAndZero) {
  const SpinSystem sys = cli::three_spin_system();
  const auto coeffs = cli::three_spin_coefficients();
  const CMatrix h = build_hamiltonian(coeffs, sys).entries;
  const CMatrix want = -0.5 * build_integral(0, sys).entries - 0.25 * build_integral(1, sys).entries;
  EXPECT_LT(max_abs(h - want), 1e-13);
  const std::vector<Coefficient> zero{{0, 0.0}, {2, 0.0}};
  EXPECT_LT(max_abs(build_hamiltonian(zero, sys).entries), 1e-300);
}

TEST(Hamiltonian, CentralSpinCouplingsAreFirstIntegral) {
  const EllipticContext ctx = make_context(0.5);
  const SpinSystem sys({{0.5, 0.0}, {0.5, 0.2}, {0.5, 0.4}, {0.5, 0.6}}, ctx);
  const std::vector<Coefficient> h{{0, -1.0}};
  for (std::size_t j = 1; j < 4; ++j) {
    const Couplings c = pair_coupling(h, 0, j, sys);
    const Couplings direct = couplings(sys.sites()[j].z, ctx);
    EXPECT_NEAR(c.x, direct.x, 1e-13);
    EXPECT_NEAR(c.y, direct.y, 1e-13);
    EXPECT_NEAR(c.z, direct.z, 1e-13);
  }
}

TEST(Parity, ThreeSpinBlocks) {
  const SpinSystem sys = cli::three_spin_system();
  const OperatorMatrix p = parity_operator(sys);
  EXPECT_LT(max_abs(p.entries * p.entries - CMatrix::Identity(24, 24)), 1e-15);
  const ParityBlocks b = parity_split(build_hamiltonian(cli::three_spin_coefficients(), sys), sys);
  EXPECT_EQ(b.even_basis.size(), 12u);
  EXPECT_EQ(b.odd_basis.size(), 12u);
  EXPECT_EQ(b.even_block.dim(), 12);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(commutator_max(build_integral(i, sys).entries, p.entries), 1e-10);
  }
}

TEST(Parity, BruteForceTwoSpins) {
  const SpinSystem sys({{0.5, 0.1}, {0.5, 0.3}}, make_context(0.5));
  // exp(i pi (Sz + s)) on each site, multiplied out with Kronecker products.
  const auto s = oracle::spin(0.5);
  Eigen::ComplexEigenSolver<CMatrix> es(s[2]);
  CMatrix local = CMatrix::Zero(2, 2);
  for (int n = 0; n < 2; ++n) {
    const Complex phase = std::exp(Complex(0, M_PI) * (es.eigenvalues()(n) + 0.5));
    local += phase * es.eigenvectors().col(n) * es.eigenvectors().col(n).adjoint();
  }
  const CMatrix full = oracle::kron(local, local);
  const CMatrix p = parity_operator(sys).entries;
  // Same operator up to a global sign chosen so the stretched state is even.
  const Complex sign = full(0, 0) / p(0, 0);
  EXPECT_LT(max_abs(full - sign * p), 1e-12);
  EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-15);
  const ParityBlocks b = parity_split(build_integral(0, sys), sys);
  EXPECT_EQ(b.even_basis.size(), 2u);
  EXPECT_EQ(b.odd_basis.size(), 2u);
}

TEST(Parity, RejectsNonCommutingOperator) {
  const SpinSystem sys({{0.5, 0.1}, {0.5, 0.3}}, make_context(0.5));
  CMatrix sx = oracle::lift(oracle::spin(0.5)[0], 0, {0.5, 0.5});
  EXPECT_THROW(parity_split(make_operator(sx), sys), DomainError);
}

TEST(OperatorMatrix, HermitianFlag) {
  CMatrix a(2, 2);
  a << 1, Complex(0, 1), Complex(0, -1), 2;
  EXPECT_TRUE(make_operator(a).hermitian);
  a(0, 1) = 3;
  EXPECT_FALSE(make_operator(a).hermitian);
}

TEST(OperatorMatrix, DimensionCap) {
  std::vector<SpinSite> sites;
  for (int i = 0; i < 13; ++i) sites.push_back({0.5, 0.1 * (i + 1)});
  const SpinSystem sys(sites, make_context(0.5));
  EXPECT_THROW(build_integral(0, sys), DomainError);
}
