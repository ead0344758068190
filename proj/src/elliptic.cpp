#include "egaudin/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace egaudin {

namespace {

constexpr double kSeriesTol = 1e-17;
constexpr int kMaxTerms = 96;
constexpr Complex kI{0.0, 1.0};

// Beyond this distance from the real axis (in units of K') phi is folded by
// the imaginary quasi-period before the series is summed.
constexpr double kFoldThreshold = 1.5;

double agm(double a, double b) {
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double mean = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = mean;
  }
  return 0.5 * (a + b);
}

bool converged(Complex term, Complex partial) {
  return std::abs(term) <= kSeriesTol * std::abs(partial);
}

// theta1, theta4 and their first two v-derivatives.
struct ThetaDerivs {
  Complex t1, d1, dd1;
  Complex t4, d4, dd4;
};

ThetaDerivs theta_with_derivatives(Complex v, double q) {
  const double log_q = std::log(q);
  ThetaDerivs out{};

  // theta1(v) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)v)
  for (int n = 0; n < kMaxTerms; ++n) {
    const double order = 2.0 * n + 1.0;
    const double half = n + 0.5;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex up = std::exp(log_q * half * half + kI * order * v);
    const Complex down = std::exp(log_q * half * half - kI * order * v);
    const Complex s = sign * (up - down) / kI;  // 2 c sin
    const Complex c = sign * (up + down);       // 2 c cos
    const Complex t = s;
    const Complex d = order * c;
    const Complex dd = -order * order * s;
    out.t1 += t;
    out.d1 += d;
    out.dd1 += dd;
    if (n > 0 && converged(t, out.t1) && converged(d, out.d1) && converged(dd, out.dd1)) {
      break;
    }
  }

  // theta4(v) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2nv)
  out.t4 = 1.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    const double order = 2.0 * n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex up = std::exp(log_q * n * n + kI * order * v);
    const Complex down = std::exp(log_q * n * n - kI * order * v);
    const Complex c = sign * (up + down);
    const Complex s = sign * (up - down) / kI;
    const Complex t = c;
    const Complex d = -order * s;
    const Complex dd = -order * order * c;
    out.t4 += t;
    out.d4 += d;
    out.dd4 += dd;
    if (converged(t, out.t4) && converged(d, out.d4) && converged(dd, out.dd4)) {
      break;
    }
  }
  return out;
}

// theta1..theta4 at v, values only.
std::array<Complex, 4> theta_values(Complex v, double q) {
  const double log_q = std::log(q);
  Complex t1{}, t2{}, t3{1.0}, t4{1.0};
  for (int n = 0; n < kMaxTerms; ++n) {
    const double order = 2.0 * n + 1.0;
    const double half = n + 0.5;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex up = std::exp(log_q * half * half + kI * order * v);
    const Complex down = std::exp(log_q * half * half - kI * order * v);
    const Complex a = sign * (up - down) / kI;
    const Complex b = up + down;
    t1 += a;
    t2 += b;
    if (n > 0 && converged(a, t1) && converged(b, t2)) break;
  }
  for (int n = 1; n < kMaxTerms; ++n) {
    const Complex c = std::exp(log_q * n * n + kI * (2.0 * n) * v) +
                      std::exp(log_q * n * n - kI * (2.0 * n) * v);
    const Complex c4 = (n % 2 == 0) ? c : -c;
    t3 += c;
    t4 += c4;
    if (converged(c, t3) && converged(c4, t4)) break;
  }
  return {t1, t2, t3, t4};
}

struct PhiRaw {
  PhiValues value;
  PhiValues derivative;
};

// Direct series evaluation, no folding.
PhiRaw phi_series(Complex u, double q, double v_scale) {
  const ThetaDerivs th = theta_with_derivatives(v_scale * u, q);
  const Complex l1 = th.d1 / th.t1;
  const Complex l4 = th.d4 / th.t4;
  PhiRaw out;
  out.value = {v_scale * l1, v_scale * l4};
  const double s2 = v_scale * v_scale;
  out.derivative = {s2 * (th.dd1 / th.t1 - l1 * l1), s2 * (th.dd4 / th.t4 - l4 * l4)};
  return out;
}

std::string format_point(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

// Throws when u lies within the guard radius of a lattice point
// 2mK + i n K' whose n has the requested parity (any parity if odd_only is false).
void guard_lattice(Complex u, const EllipticContext& ctx, bool odd_only, const char* what) {
  const double period = 2.0 * ctx.K();
  const double m = std::round(u.real() / period);
  double n;
  if (odd_only) {
    n = 2.0 * std::round((u.imag() / ctx.Kprime() - 1.0) / 2.0) + 1.0;
  } else {
    n = std::round(u.imag() / ctx.Kprime());
  }
  const Complex point{m * period, n * ctx.Kprime()};
  if (std::abs(u - point) < kPoleGuard) {
    throw PoleError(std::string(what) + ": argument " + format_point(u) +
                        " within pole guard of lattice point " + format_point(point),
                    point);
  }
}

struct Folded {
  Complex w;
  long shifts = 0;  // u = w + 2mK + i*shifts*K'
};

Folded fold_for_phi(Complex u, const EllipticContext& ctx) {
  const double period = 2.0 * ctx.K();
  Complex w = u - std::round(u.real() / period) * period;
  long shifts = 0;
  if (std::abs(w.imag()) > kFoldThreshold * ctx.Kprime()) {
    shifts = std::lround(w.imag() / ctx.Kprime());
    w -= Complex{0.0, static_cast<double>(shifts) * ctx.Kprime()};
  }
  return {w, shifts};
}

void check_finite(Complex u, const char* what) {
  if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

}  // namespace

double complete_elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("complete_elliptic_k: modulus must lie in [0, 1)");
  }
  const double kc = std::sqrt((1.0 - k) * (1.0 + k));
  return std::numbers::pi / (2.0 * agm(1.0, kc));
}

EllipticContext make_context(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    std::ostringstream os;
    os << "make_context: modulus k = " << k << " outside (0, 1)";
    throw DomainError(os.str());
  }
  EllipticContext ctx;
  ctx.k_ = k;
  const double kc = std::sqrt((1.0 - k) * (1.0 + k));
  ctx.K_ = std::numbers::pi / (2.0 * agm(1.0, kc));
  ctx.Kprime_ = std::numbers::pi / (2.0 * agm(1.0, k));
  ctx.q_ = std::exp(-std::numbers::pi * ctx.Kprime_ / ctx.K_);
  ctx.v_scale_ = std::numbers::pi / (2.0 * ctx.K_);
  const double two_k_over_pi = 2.0 * ctx.K_ / std::numbers::pi;
  ctx.theta2_null_ = std::sqrt(two_k_over_pi * k);
  ctx.theta3_null_ = std::sqrt(two_k_over_pi);
  ctx.theta4_null_ = std::sqrt(two_k_over_pi * kc);

  // Quasi-period shift, measured at a reference point and checked at two more.
  const std::array<Complex, 3> probes = {Complex{0.37 * ctx.K_, 0.11 * ctx.Kprime_},
                                         Complex{1.21 * ctx.K_, -0.23 * ctx.Kprime_},
                                         Complex{0.73 * ctx.K_, 0.05 * ctx.Kprime_}};
  const Complex shift{0.0, ctx.Kprime_};
  std::array<double, 3> measured{};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const PhiValues base = phi_series(probes[i], ctx.q_, ctx.v_scale_).value;
    const PhiValues moved = phi_series(probes[i] + shift, ctx.q_, ctx.v_scale_).value;
    const Complex diff = (moved.phi1 + moved.phi4) - (base.phi1 + base.phi4);
    measured[i] = diff.imag();
  }
  ctx.C_ = measured[0];
  const double scale = std::max(1.0, std::abs(ctx.C_));
  for (std::size_t i = 1; i < measured.size(); ++i) {
    if (std::abs(measured[i] - ctx.C_) > 1e-9 * scale) {
      std::ostringstream os;
      os.precision(16);
      os << "make_context: quasi-period shift not constant (" << ctx.C_ << " vs " << measured[i]
         << ")";
      throw NumericalError(os.str());
    }
  }
  return ctx;
}

JacobiValues jacobi_elliptic(Complex u, const EllipticContext& ctx) {
  check_finite(u, "jacobi_elliptic");
  guard_lattice(u, ctx, /*odd_only=*/true, "jacobi_elliptic");
  const double period = 2.0 * ctx.K();
  const double m = std::round(u.real() / period);
  const Complex w = u - m * period;
  const double sign = (static_cast<long>(m) % 2 == 0) ? 1.0 : -1.0;

  const auto th = theta_values(ctx.v_scale() * w, ctx.q());
  // sn = theta3(0)/theta2(0) * theta1/theta4, and similarly for cn, dn.
  JacobiValues out;
  out.sn = sign * (ctx.theta3_null() / ctx.theta2_null()) * th[0] / th[3];
  out.cn = sign * (ctx.theta4_null() / ctx.theta2_null()) * th[1] / th[3];
  out.dn = (ctx.theta4_null() / ctx.theta3_null()) * th[2] / th[3];
  return out;
}

PhiValues phi(Complex u, const EllipticContext& ctx) {
  check_finite(u, "phi");
  guard_lattice(u, ctx, /*odd_only=*/false, "phi");
  const Folded f = fold_for_phi(u, ctx);
  PhiValues v = phi_series(f.w, ctx.q(), ctx.v_scale()).value;
  if (f.shifts != 0) {
    // phi1(w + iK') = phi4(w) + iC/2 and phi4(w + iK') = phi1(w) + iC/2.
    if (f.shifts % 2 != 0) std::swap(v.phi1, v.phi4);
    const Complex add{0.0, 0.5 * ctx.C() * static_cast<double>(f.shifts)};
    v.phi1 += add;
    v.phi4 += add;
  }
  return v;
}

PhiValues phi_derivative(Complex u, const EllipticContext& ctx) {
  check_finite(u, "phi_derivative");
  guard_lattice(u, ctx, /*odd_only=*/false, "phi_derivative");
  const Folded f = fold_for_phi(u, ctx);
  PhiValues d = phi_series(f.w, ctx.q(), ctx.v_scale()).derivative;
  if (f.shifts % 2 != 0) std::swap(d.phi1, d.phi4);
  return d;
}

Complex phi_sum(Complex u, const EllipticContext& ctx) {
  const PhiValues v = phi(u, ctx);
  return v.phi1 + v.phi4;
}

Complex phi_sum_derivative(Complex u, const EllipticContext& ctx) {
  const PhiValues d = phi_derivative(u, ctx);
  return d.phi1 + d.phi4;
}

PhiSum phi_sum_with_derivative(Complex u, const EllipticContext& ctx) {
  check_finite(u, "phi_sum_with_derivative");
  guard_lattice(u, ctx, /*odd_only=*/false, "phi_sum_with_derivative");
  const Folded f = fold_for_phi(u, ctx);
  const PhiRaw raw = phi_series(f.w, ctx.q(), ctx.v_scale());
  const Complex add{0.0, ctx.C() * static_cast<double>(f.shifts)};
  return {raw.value.phi1 + raw.value.phi4 + add, raw.derivative.phi1 + raw.derivative.phi4};
}

}  // namespace egaudin
