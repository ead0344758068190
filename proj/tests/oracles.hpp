#ifndef EGAUDIN_TESTS_ORACLES_HPP
#define EGAUDIN_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's theta-series code.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline double complete_k_quadrature(double k) {
  auto f = [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, M_PI / 2, 15, 1e-15);
}

// K(k') written as an integral in k itself, so k' = sqrt(1 - k^2) is never
// formed (that loses digits for small k, where K' is most sensitive).
inline double complementary_k_quadrature(double k) {
  // With s = pi/2 - t the integrand is 1 / sqrt(sin^2 s + k^2 cos^2 s), a peak
  // of width ~k at s = 0; split geometrically so each panel is smooth.
  auto f = [k](double s) {
    const double c = std::cos(s);
    const double n = std::sin(s);
    return 1.0 / std::sqrt(n * n + k * k * c * c);
  };
  double total = 0.0;
  double lo = 0.0;
  for (double hi = k; lo < M_PI / 2; hi *= 4) {
    const double b = std::min(hi, M_PI / 2);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, b, 15, 1e-15);
    lo = b;
  }
  return total;
}

struct Jacobi {
  Complex sn, cn, dn;
};

inline Jacobi jacobi_real(double u, double k) {
  double cn = 0.0;
  double dn = 0.0;
  const double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
  return {sn, cn, dn};
}

// Complex argument through the addition formulas and Jacobi's imaginary
// transformation (real parts at modulus k, imaginary parts at k').
inline Jacobi jacobi_complex(Complex u, double k) {
  const double kp = std::sqrt(1.0 - k * k);
  const Jacobi a = jacobi_real(u.real(), k);
  const Jacobi b = jacobi_real(u.imag(), kp);
  const double s = a.sn.real(), c = a.cn.real(), d = a.dn.real();
  const double s1 = b.sn.real(), c1 = b.cn.real(), d1 = b.dn.real();
  const double den = c1 * c1 + k * k * s * s * s1 * s1;
  return {Complex{s * d1, c * d * s1 * c1} / den, Complex{c * c1, -s * d * s1 * d1} / den,
          Complex{d * c1 * d1, -k * k * s * c * s1} / den};
}

// Maclaurin series of sn to u^7.
inline double sn_series(double u, double k) {
  const double m = k * k;
  const double u2 = u * u;
  return u - (1 + m) * u * u2 / 6 + (1 + 14 * m + m * m) * u * u2 * u2 / 120 -
         (1 + 135 * m + 135 * m * m + m * m * m) * u * u2 * u2 * u2 / 5040;
}

inline std::vector<double> couplings(double z, double k) {
  const Jacobi j = jacobi_real(z, k);
  const double sn = j.sn.real();
  return {(1 + k * sn * sn) / sn, (1 - k * sn * sn) / sn, j.cn.real() * j.dn.real() / sn};
}

inline std::vector<CMatrix> spin(double s) {
  const int d = static_cast<int>(std::lround(2 * s + 1));
  CMatrix sp = CMatrix::Zero(d, d);
  CMatrix sz = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = s - i;
    sz(i, i) = m;
    if (i > 0) sp(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const CMatrix sm = sp.adjoint();
  return {(sp + sm) / 2.0, (sp - sm) / Complex(0, 2), sz};
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CMatrix lift(const CMatrix& op, std::size_t site, const std::vector<double>& spins) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t j = 0; j < spins.size(); ++j) {
    const auto d = static_cast<Eigen::Index>(std::lround(2 * spins[j] + 1));
    out = kron(out, j == site ? op : CMatrix::Identity(d, d));
  }
  return out;
}

// R_i = sum_{j != i} sum_a J^a(z_i - z_j) S_i^a S_j^a built from Kronecker products.
template <class CouplingFn>
CMatrix integral(std::size_t i, const std::vector<double>& spins, const std::vector<double>& z,
                 CouplingFn coupling) {
  std::vector<std::vector<CMatrix>> s;
  for (double x : spins) s.push_back(spin(x));
  const Eigen::Index dim = lift(s[0][0], 0, spins).rows();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < spins.size(); ++j) {
    if (j == i) continue;
    const std::vector<double> J = coupling(z[i] - z[j]);
    for (int a = 0; a < 3; ++a) out += J[a] * lift(s[i][a], i, spins) * lift(s[j][a], j, spins);
  }
  return out;
}

inline CMatrix elliptic_integral(std::size_t i, const std::vector<double>& spins,
                                 const std::vector<double>& z, double k) {
  return integral(i, spins, z, [k](double dz) { return couplings(dz, k); });
}

template <class F>
double quad(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

}  // namespace oracle

#endif  // EGAUDIN_TESTS_ORACLES_HPP
