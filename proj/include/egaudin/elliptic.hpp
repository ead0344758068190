#ifndef EGAUDIN_ELLIPTIC_HPP
#define EGAUDIN_ELLIPTIC_HPP

// Complete elliptic integrals, Jacobi elliptic functions of complex argument
// and the logarithmic derivatives of the Jacobi theta functions
//
//   phi1(u) = H'(u) / H(u),     H(u) = theta1(v | q)
//   phi4(u) = Theta'(u) / Theta(u), Theta(u) = theta4(v | q)
//
// with v = pi u / (2K) and derivatives taken with respect to u. All functions
// are evaluated from truncated q-series of the theta functions.

#include <complex>
#include <stdexcept>
#include <string>

#include "egaudin/errors.hpp"

namespace egaudin {

using Complex = std::complex<double>;

/// Radius around a pole inside which evaluation is refused.
inline constexpr double kPoleGuard = 1e-8;

/// Immutable set of constants derived from the elliptic modulus k.
///
/// Besides K, K' and the nome q the context holds the measured quasi-period
/// shift C, defined through phi(u + iK') = phi(u) + iC for phi = phi1 + phi4.
/// C is found numerically when the context is created; for every modulus
/// tried it agrees with -pi/K to rounding.
class EllipticContext {
 public:
  double k() const { return k_; }
  double K() const { return K_; }
  double Kprime() const { return Kprime_; }
  double q() const { return q_; }
  double C() const { return C_; }

  // theta_j(0 | q), used by the Jacobi function ratios.
  double theta2_null() const { return theta2_null_; }
  double theta3_null() const { return theta3_null_; }
  double theta4_null() const { return theta4_null_; }

  /// pi / (2K): the factor converting u into the theta variable v.
  double v_scale() const { return v_scale_; }

  friend EllipticContext make_context(double k);

 private:
  EllipticContext() = default;

  double k_ = 0.0;
  double K_ = 0.0;
  double Kprime_ = 0.0;
  double q_ = 0.0;
  double C_ = 0.0;
  double theta2_null_ = 0.0;
  double theta3_null_ = 0.0;
  double theta4_null_ = 0.0;
  double v_scale_ = 0.0;
};

/// Builds the context for modulus k; throws DomainError unless 0 < k < 1.
EllipticContext make_context(double k);

/// Complete elliptic integral of the first kind K(k) via the arithmetic-geometric mean.
double complete_elliptic_k(double k);

struct JacobiValues {
  Complex sn;
  Complex cn;
  Complex dn;
};

/// sn, cn and dn at modulus ctx.k(). Throws PoleError within kPoleGuard of a pole.
JacobiValues jacobi_elliptic(Complex u, const EllipticContext& ctx);

struct PhiValues {
  Complex phi1;
  Complex phi4;
};

/// phi1 and phi4 at u. Throws PoleError within kPoleGuard of a zero of H or Theta.
PhiValues phi(Complex u, const EllipticContext& ctx);

/// u-derivatives of phi1 and phi4, from the differentiated series.
PhiValues phi_derivative(Complex u, const EllipticContext& ctx);

/// phi = phi1 + phi4.
Complex phi_sum(Complex u, const EllipticContext& ctx);

/// phi' = phi1' + phi4'.
Complex phi_sum_derivative(Complex u, const EllipticContext& ctx);

struct PhiSum {
  Complex value;
  Complex derivative;
};

/// phi and phi' from a single series pass.
PhiSum phi_sum_with_derivative(Complex u, const EllipticContext& ctx);

}  // namespace egaudin

#endif  // EGAUDIN_ELLIPTIC_HPP
