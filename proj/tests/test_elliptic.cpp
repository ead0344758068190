#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "egaudin/elliptic.hpp"
#include "egaudin/errors.hpp"
#include "oracles.hpp"

using namespace egaudin;

namespace {

const EllipticContext& half() {
  static const EllipticContext ctx = make_context(0.5);
  return ctx;
}

Complex random_point(std::mt19937_64& rng, const EllipticContext& ctx) {
  std::uniform_real_distribution<double> re(0.1, 2 * ctx.K() - 0.1);
  std::uniform_real_distribution<double> im(-0.5 * ctx.Kprime(), 0.5 * ctx.Kprime());
  return {re(rng), im(rng)};
}

}  // namespace

TEST(Context, CompleteIntegralMatchesQuadrature) {
  for (double k : {1e-3, 0.1, 0.5, 0.8, 0.99}) {
    const EllipticContext ctx = make_context(k);
    EXPECT_NEAR(ctx.K(), oracle::complete_k_quadrature(k), 1e-13 * ctx.K()) << k;
    EXPECT_NEAR(ctx.Kprime(), oracle::complementary_k_quadrature(k), 1e-13 * ctx.Kprime()) << k;
    EXPECT_NEAR(ctx.q(), std::exp(-std::numbers::pi * ctx.Kprime() / ctx.K()), 1e-15);
  }
}

TEST(Context, ReferenceConstantsAtHalf) {
  EXPECT_NEAR(half().K(), 1.68575, 5e-6);
  EXPECT_NEAR(2 * half().K(), 3.3715, 5e-5);
  EXPECT_NEAR(half().Kprime() / 2, 1.07826, 5e-6);
}

TEST(Context, SmallModulusApproachesHalfPi) {
  EXPECT_NEAR(make_context(1e-8).K(), std::numbers::pi / 2, 1e-12);
}

TEST(Context, ShiftConstantEqualsMinusPiOverK) {
  for (double k : {0.1, 0.5, 0.9}) {
    const EllipticContext ctx = make_context(k);
    EXPECT_NEAR(ctx.C(), -std::numbers::pi / ctx.K(), 1e-10) << k;
  }
}

TEST(Context, RejectsModulusOutsideUnitInterval) {
  EXPECT_THROW(make_context(0.0), DomainError);
  EXPECT_THROW(make_context(1.0), DomainError);
  EXPECT_THROW(make_context(-0.3), DomainError);
  EXPECT_THROW(make_context(std::nan("")), DomainError);
}

TEST(Jacobi, TrivialValues) {
  const JacobiValues origin = jacobi_elliptic(0.0, half());
  EXPECT_NEAR(std::abs(origin.sn), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(origin.cn - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(origin.dn - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(jacobi_elliptic(half().K(), half()).sn - 1.0), 0.0, 1e-13);
}

TEST(Jacobi, SeriesOracleAtPointTwo) {
  const double expected = oracle::sn_series(0.2, 0.5);
  EXPECT_NEAR(expected, 0.198345391, 1e-9);
  EXPECT_NEAR(jacobi_elliptic(0.2, half()).sn.real(), expected, 1e-9);
}

TEST(Jacobi, MatchesIndependentComplexOracle) {
  std::mt19937_64 rng(11);
  for (double k : {0.2, 0.5, 0.9}) {
    const EllipticContext ctx = make_context(k);
    for (int n = 0; n < 300; ++n) {
      const Complex u = random_point(rng, ctx);
      const JacobiValues got = jacobi_elliptic(u, ctx);
      const oracle::Jacobi want = oracle::jacobi_complex(u, k);
      const double scale = std::max(1.0, std::abs(want.sn));
      EXPECT_LT(std::abs(got.sn - want.sn), 1e-12 * scale) << u;
      EXPECT_LT(std::abs(got.cn - want.cn), 1e-12 * scale) << u;
      EXPECT_LT(std::abs(got.dn - want.dn), 1e-12 * scale) << u;
    }
  }
}

TEST(Jacobi, PythagoreanIdentitiesOnRandomPoints) {
  std::mt19937_64 rng(3);
  const double k = half().k();
  for (int n = 0; n < 1000; ++n) {
    const JacobiValues j = jacobi_elliptic(random_point(rng, half()), half());
    EXPECT_LT(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0), 1e-10);
    EXPECT_LT(std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0), 1e-10);
  }
}

TEST(Jacobi, LimitsTowardTrigonometricAndHyperbolic) {
  const EllipticContext small = make_context(1e-6);
  const EllipticContext large = make_context(1 - 1e-9);
  for (double u = 0.05; u < 1.5; u += 0.05) {
    EXPECT_LT(std::abs(jacobi_elliptic(u, small).sn - std::sin(u)), 1e-5) << u;
    EXPECT_LT(std::abs(jacobi_elliptic(u, large).sn - std::tanh(u)), 1e-4) << u;
  }
}

TEST(Jacobi, RefusesPoles) {
  const Complex pole{0.0, half().Kprime()};
  try {
    jacobi_elliptic(pole + Complex{1e-10, 0.0}, half());
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_LT(std::abs(e.location() - pole), 1e-12);
  }
  EXPECT_NO_THROW(jacobi_elliptic(pole + Complex{1e-6, 0.0}, half()));
}

TEST(Phi, DifferenceIsLogDerivativeOfSn) {
  const Complex u{0.3, 0.1};
  const PhiValues p = phi(u, half());
  const oracle::Jacobi j = oracle::jacobi_complex(u, 0.5);
  EXPECT_LT(std::abs(p.phi1 - p.phi4 - j.cn * j.dn / j.sn), 1e-10);
}

TEST(Phi, BothLogDerivativesAreOdd) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    const Complex u = random_point(rng, half());
    const PhiValues a = phi(u, half());
    const PhiValues b = phi(-u, half());
    EXPECT_LT(std::abs(a.phi1 + b.phi1), 1e-10 * std::max(1.0, std::abs(a.phi1)));
    EXPECT_LT(std::abs(a.phi4 + b.phi4), 1e-10 * std::max(1.0, std::abs(a.phi4)));
  }
}

TEST(Phi, SmallModulusLimit) {
  const EllipticContext ctx = make_context(1e-6);
  for (double u : {0.2, 0.7, 1.3}) {
    const PhiValues p = phi(u, ctx);
    EXPECT_NEAR(p.phi1.real(), 1.0 / std::tan(u), 1e-6);
    EXPECT_NEAR(std::abs(p.phi4), 0.0, 1e-6);
  }
}

TEST(Phi, RealPeriodAndQuasiPeriodShift) {
  std::mt19937_64 rng(7);
  const Complex period{2 * half().K(), 0.0};
  const Complex quasi{0.0, half().Kprime()};
  double first_shift = std::nan("");
  for (int n = 0; n < 1000; ++n) {
    const Complex u = random_point(rng, half());
    const Complex base = phi_sum(u, half());
    const double scale = std::max(1.0, std::abs(base));
    EXPECT_LT(std::abs(phi_sum(u + period, half()) - base), 1e-10 * scale);
    const Complex shift = phi_sum(u + quasi, half()) - base;
    if (std::isnan(first_shift)) first_shift = shift.imag();
    EXPECT_NEAR(shift.imag(), first_shift, 1e-10 * scale);
    EXPECT_NEAR(shift.real(), 0.0, 1e-10 * scale);
  }
  EXPECT_NEAR(first_shift, half().C(), 1e-10);
}

TEST(Phi, DerivativeMatchesCentralDifference) {
  const Complex u{0.4, 0.2};
  const double h = 1e-5;
  const Complex fd = (phi_sum(u + h, half()) - phi_sum(u - h, half())) / (2 * h);
  EXPECT_LT(std::abs(phi_sum_derivative(u, half()) - fd), 1e-6);
  const PhiValues d = phi_derivative(u, half());
  const PhiValues plus = phi(u + h, half());
  const PhiValues minus = phi(u - h, half());
  EXPECT_LT(std::abs(d.phi1 - (plus.phi1 - minus.phi1) / (2 * h)), 1e-6);
  EXPECT_LT(std::abs(d.phi4 - (plus.phi4 - minus.phi4) / (2 * h)), 1e-6);
}

TEST(Phi, DerivativeIsEvenAndConsistent) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 100; ++n) {
    const Complex u = random_point(rng, half());
    const Complex d = phi_sum_derivative(u, half());
    EXPECT_LT(std::abs(d - phi_sum_derivative(-u, half())), 1e-9 * std::max(1.0, std::abs(d)));
    const PhiSum both = phi_sum_with_derivative(u, half());
    EXPECT_LT(std::abs(both.value - phi_sum(u, half())), 1e-13 * std::max(1.0, std::abs(both.value)));
    EXPECT_LT(std::abs(both.derivative - d), 1e-13 * std::max(1.0, std::abs(d)));
  }
}

TEST(Phi, SimplePoleWithUnitResidue) {
  for (double angle : {0.0, 0.7, 2.0, 4.0}) {
    const Complex dir = std::polar(1.0, angle);
    for (double r : {1e-3, 1e-4, 1e-5}) {
      const Complex u = r * dir;
      EXPECT_NEAR(std::abs(u * phi(u, half()).phi1 - 1.0), 0.0, 10 * r);
    }
  }
}

TEST(Phi, FoldedArgumentsFarFromRectangle) {
  const Complex u{0.7, 0.3};
  const Complex base = phi_sum(u, half());
  for (int m = -3; m <= 3; ++m) {
    const Complex shifted = u + Complex{0.0, m * half().Kprime()};
    const Complex expected = base + Complex{0.0, m * half().C()};
    EXPECT_LT(std::abs(phi_sum(shifted, half()) - expected), 1e-10) << m;
  }
}

TEST(Phi, RefusesZerosOfTheta) {
  EXPECT_THROW(phi(Complex{1e-10, 0.0}, half()), PoleError);
  EXPECT_THROW(phi(Complex{2 * half().K(), half().Kprime()}, half()), PoleError);
}
