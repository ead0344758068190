#include "egaudin/acsm.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace egaudin {

namespace {

void require_even(int n, const char* what) {
  if (n < 4 || n % 2 != 0) {
    std::ostringstream os;
    os << what << ": N = " << n << " must be even and at least 4 for all-1/2 Bethe states";
    throw DomainError(os.str());
  }
}

AcsmParams with_n(double a, double b, double k, int n) { return AcsmParams{n, a, b, k}; }

bool conjugation_closed(const std::vector<Complex>& roots, double tol) {
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    if (std::abs(roots[i].imag()) < tol) {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(std::conj(roots[i]) - roots[j]) < tol) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Puts the smallest-Re root first and orders the rest by Im.
void order_ground_state_roots(std::vector<Complex>& roots) {
  if (roots.empty()) return;
  auto first = std::min_element(roots.begin(), roots.end(),
                                [](Complex x, Complex y) { return x.real() < y.real(); });
  std::iter_swap(roots.begin(), first);
  std::sort(roots.begin() + 1, roots.end(),
            [](Complex x, Complex y) { return x.imag() < y.imag(); });
}

ContinuationPoint make_point(const AcsmParams& params, BetheSolution solution,
                             const EllipticContext& ctx) {
  ContinuationPoint p;
  p.N = params.N;
  order_ground_state_roots(solution.rootset.roots);
  const auto& roots = solution.rootset.roots;
  p.lambda1 = roots.front().real();
  p.min_re = std::numeric_limits<double>::infinity();
  p.max_re = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < roots.size(); ++i) {
    p.min_re = std::min(p.min_re, roots[i].real());
    p.max_re = std::max(p.max_re, roots[i].real());
  }
  p.energy_per_spin = -solution.r.front().real() / params.N;
  p.fit = arc_fit_or_vertical(std::span<const Complex>(roots).subspan(1), ctx);
  p.classical_energy = classical_energy(params);
  p.solution = std::move(solution);
  return p;
}

}  // namespace

void validate(const AcsmParams& params) {
  if (params.N < 3) throw DomainError("acsm: N must be at least 3");
  if (!(params.k > 0.0 && params.k < 1.0)) throw DomainError("acsm: k must lie in (0, 1)");
  const double K = complete_elliptic_k(params.k);
  if (!(params.a > 0.0 && params.a < params.b && params.b <= K * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "acsm: need 0 < a < b <= K = " << K << " (got a = " << params.a
       << ", b = " << params.b << ")";
    throw DomainError(os.str());
  }
}

std::vector<double> acsm_grid(const AcsmParams& params) {
  validate(params);
  std::vector<double> z(static_cast<std::size_t>(params.N));
  z[0] = 0.0;
  for (int i = 2; i <= params.N; ++i) {
    z[static_cast<std::size_t>(i - 1)] =
        params.a + static_cast<double>(i - 2) / (params.N - 2) * (params.b - params.a);
  }
  return z;
}

AcsmModel build_acsm(const AcsmParams& params, bool with_hamiltonian) {
  const std::vector<double> z = acsm_grid(params);
  std::vector<SpinSite> sites;
  sites.reserve(z.size());
  for (double zi : z) sites.push_back({0.5, zi});
  AcsmModel model{SpinSystem(std::move(sites), make_context(params.k)), std::nullopt};
  if (with_hamiltonian) {
    const Coefficient minus_r1{0, -1.0};
    model.hamiltonian = build_hamiltonian(std::span(&minus_r1, 1), model.system);
  }
  return model;
}

OperatorMatrix acsm_ground_block(const AcsmModel& model) {
  if (!model.hamiltonian) throw DomainError("acsm_ground_block: model built without Hamiltonian");
  const int parity = sector_parity(Sector{0}, model.system.root_count());
  ParityBlocks blocks = parity_split(*model.hamiltonian, model.system);
  return parity > 0 ? std::move(blocks.even_block) : std::move(blocks.odd_block);
}

double classical_energy(const AcsmParams& params) {
  const std::vector<double> z = acsm_grid(params);
  const EllipticContext ctx = make_context(params.k);
  double sum = 0.0;
  for (std::size_t j = 1; j < z.size(); ++j) sum += couplings(z[j], ctx).x;
  return -sum / (4.0 * params.N);
}

double classical_configuration_energy(const AcsmParams& params,
                                      std::span<const SpinAngles> angles) {
  const std::vector<double> z = acsm_grid(params);
  if (angles.size() != z.size()) {
    throw DomainError("classical_configuration_energy: one angle pair per site is required");
  }
  const EllipticContext ctx = make_context(params.k);
  const SpinAngles c = angles[0];
  double e = 0.0;
  for (std::size_t j = 1; j < z.size(); ++j) {
    const Couplings J = couplings(z[j], ctx);
    const SpinAngles s = angles[j];
    e += std::sin(c.theta) * std::sin(s.theta) *
             (J.x * std::cos(c.phi) * std::cos(s.phi) + J.y * std::sin(c.phi) * std::sin(s.phi)) +
         J.z * std::cos(c.theta) * std::cos(s.theta);
  }
  return 0.25 * e;
}

std::vector<SpinAngles> antiparallel_configuration(int n, Axis axis) {
  constexpr double pi = std::numbers::pi;
  SpinAngles central;
  SpinAngles bath;
  switch (axis) {
    case Axis::X:
      central = {pi / 2, pi};
      bath = {pi / 2, 0.0};
      break;
    case Axis::Y:
      central = {pi / 2, 3 * pi / 2};
      bath = {pi / 2, pi / 2};
      break;
    case Axis::Z:
      central = {pi, 0.0};
      bath = {0.0, 0.0};
      break;
  }
  std::vector<SpinAngles> out(static_cast<std::size_t>(n), bath);
  out.front() = central;
  return out;
}

RealJacobi jacobi_real(double u, const EllipticContext& ctx) {
  const JacobiValues j = jacobi_elliptic(Complex{u, 0.0}, ctx);
  return {j.sn.real(), j.cn.real(), j.dn.real()};
}

double coupling_integral(double a, double b, const EllipticContext& ctx) {
  const RealJacobi ja = jacobi_real(a, ctx);
  const RealJacobi jb = jacobi_real(b, ctx);
  const double k = ctx.k();
  const double num = jb.sn * (ja.cn + ja.dn) * (jb.dn - k * jb.cn);
  const double den = ja.sn * (jb.cn + jb.dn) * (ja.dn - k * ja.cn);
  return std::log(num / den);
}

double classical_limit(const AcsmParams& params) {
  validate(params);
  const EllipticContext ctx = make_context(params.k);
  return coupling_integral(params.a, params.b, ctx) / (4.0 * (params.a - params.b));
}

bool has_ground_state_pattern(const RootSet& rootset, const AcsmParams& params,
                              double tolerance) {
  if (rootset.sector.l() != 0 || rootset.roots.empty()) return false;
  int left = 0;
  for (const Complex& r : rootset.roots) {
    if (r.real() < params.a) {
      if (std::abs(r.imag()) > tolerance || r.real() <= 0.0) return false;
      ++left;
    } else if (r.real() <= params.b) {
      return false;
    }
  }
  return left == 1 && conjugation_closed(rootset.roots, tolerance);
}

BetheSolution ground_state_seed(const AcsmParams& params, const SeedOptions& options) {
  require_even(params.N, "ground_state_seed");
  if (params.N > 16) throw DomainError("ground_state_seed: N must not exceed 16");
  const AcsmModel model = build_acsm(params);
  const SpinSystem& system = model.system;
  const EllipticContext& ctx = system.ctx();
  const int m = system.root_count();
  const double half = 0.5 * ctx.Kprime();
  const double two_k = 2.0 * ctx.K();

  std::mt19937_64 rng(options.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  std::optional<BetheSolution> best;
  for (int attempt = 0; attempt < options.budget; ++attempt) {
    std::vector<Complex> roots(static_cast<std::size_t>(m));
    roots[0] = {uniform(0.02, 0.98) * params.a, 0.0};
    const double x = uniform(params.b + 0.05 * (two_k - params.b), two_k - 0.05);
    std::vector<double> y(static_cast<std::size_t>(m - 1));
    for (auto& v : y) v = uniform(-0.95 * half, 0.95 * half);
    std::sort(y.begin(), y.end());
    std::vector<double> sym(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) sym[i] = 0.5 * (y[i] - y[y.size() - 1 - i]);
    for (std::size_t i = 0; i < sym.size(); ++i) roots[i + 1] = {x, sym[i]};

    BetheSolution sol;
    try {
      sol = newton_solve(RootSet{Sector{0}, roots}, system, options.newton);
    } catch (const PoleError&) {
      continue;
    }
    if (!sol.converged || !has_ground_state_pattern(sol.rootset, params)) continue;
    if (std::abs(sol.r.front().imag()) > 1e-8) continue;
    if (!best || sol.r.front().real() > best->r.front().real()) best = std::move(sol);
  }
  if (!best) {
    std::ostringstream os;
    os << "ground_state_seed: no ground-state pattern found for N = " << params.N << " in "
       << options.budget << " attempts";
    throw NumericalError(os.str());
  }
  order_ground_state_roots(best->rootset.roots);
  return std::move(*best);
}

double arc_curve(const ArcFit& fit, double y, const EllipticContext& ctx) {
  if (fit.vertical) return fit.alpha;
  return fit.alpha + fit.beta * jacobi_real(fit.c1 * y, ctx).dn * jacobi_real(fit.c2 * y, ctx).cn;
}

ArcFit arc_fit(std::span<const Complex> arc, const EllipticContext& ctx) {
  const auto n = static_cast<Eigen::Index>(arc.size());
  if (n < 4) throw NumericalError("arc_fit: at least 4 arc roots are required");
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = arc[static_cast<std::size_t>(i)].real();
    y(i) = arc[static_cast<std::size_t>(i)].imag();
  }
  const double k2 = ctx.k() * ctx.k();

  ArcFit fit;
  fit.spread = x.maxCoeff() - x.minCoeff();

  auto residuals = [&](const Eigen::Vector4d& q, Eigen::MatrixXd* jac) {
    Eigen::VectorXd r(n);
    if (jac) jac->resize(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      const RealJacobi u1 = jacobi_real(q(2) * y(i), ctx);
      const RealJacobi u2 = jacobi_real(q(3) * y(i), ctx);
      r(i) = q(0) + q(1) * u1.dn * u2.cn - x(i);
      if (jac) {
        (*jac)(i, 0) = 1.0;
        (*jac)(i, 1) = u1.dn * u2.cn;
        (*jac)(i, 2) = q(1) * (-k2 * u1.sn * u1.cn * y(i)) * u2.cn;
        (*jac)(i, 3) = q(1) * u1.dn * (-u2.sn * u2.dn * y(i));
      }
    }
    return r;
  };

  const double scale = std::max(1.0, std::abs(x.mean()));
  auto gauss_newton = [&](Eigen::Vector4d p, int& iterations) {
    Eigen::MatrixXd jac;
    Eigen::VectorXd r = residuals(p, &jac);
    double sse = r.squaredNorm();
    iterations = 0;
    for (; iterations < 200 && sse > 0.0; ++iterations) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
      qr.setThreshold(1e-12);
      const Eigen::Vector4d step = qr.solve(-r);
      if (!step.allFinite()) break;
      double t = 1.0;
      bool improved = false;
      Eigen::Vector4d trial;
      Eigen::VectorXd trial_r;
      while (t > 1e-6) {
        trial = p + t * step;
        trial_r = residuals(trial, nullptr);
        if (trial_r.allFinite() && trial_r.squaredNorm() < sse) {
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (!improved) break;
      const double gain = sse - trial_r.squaredNorm();
      p = trial;
      r = residuals(p, &jac);
      sse = r.squaredNorm();
      if (gain <= 1e-30 * scale * scale * n || (t * step).norm() < 1e-15 * p.norm()) break;
    }
    return std::pair{p, sse};
  };

  // The prescribed start (alpha = mean, beta = spread, c1 = c2 = 1) comes
  // first; the grid of other curvature pairs guards against shallow local minima.
  std::vector<std::pair<double, double>> starts{{1.0, 1.0}};
  for (double c1 : {0.5, 1.6, 3.0}) {
    for (double c2 : {0.15, 0.5, 2.0}) starts.emplace_back(c1, c2);
  }
  Eigen::Vector4d p = Eigen::Vector4d::Constant(std::numeric_limits<double>::quiet_NaN());
  double sse = std::numeric_limits<double>::infinity();
  int it = 0;
  for (const auto& [c1, c2] : starts) {
    int iterations = 0;
    const auto [q, s] = gauss_newton(Eigen::Vector4d{x.mean(), fit.spread, c1, c2}, iterations);
    if (q.allFinite() && std::isfinite(s) && s < sse * (1.0 - 1e-9)) {
      p = q;
      sse = s;
      it = iterations;
    }
    if (sse == 0.0) break;
  }
  if (!p.allFinite() || !std::isfinite(sse)) {
    throw NumericalError("arc_fit: Gauss-Newton diverged");
  }
  fit.alpha = p(0);
  fit.beta = p(1);
  fit.c1 = p(2);
  fit.c2 = p(3);
  fit.rms = std::sqrt(sse / static_cast<double>(n));
  fit.iterations = it;
  return fit;
}

ArcFit arc_fit(const BetheSolution& solution, const EllipticContext& ctx) {
  std::vector<Complex> roots = solution.rootset.roots;
  order_ground_state_roots(roots);
  return arc_fit(std::span<const Complex>(roots).subspan(1), ctx);
}

ArcFit arc_fit_or_vertical(std::span<const Complex> arc, const EllipticContext& ctx) {
  try {
    return arc_fit(arc, ctx);
  } catch (const NumericalError&) {
    ArcFit fit;
    fit.vertical = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (const Complex& c : arc) {
      sum += c.real();
      lo = std::min(lo, c.real());
      hi = std::max(hi, c.real());
    }
    fit.alpha = arc.empty() ? 0.0 : sum / static_cast<double>(arc.size());
    fit.beta = 0.0;
    fit.spread = arc.empty() ? 0.0 : hi - lo;
    double sse = 0.0;
    for (const Complex& c : arc) sse += (c.real() - fit.alpha) * (c.real() - fit.alpha);
    fit.rms = arc.empty() ? 0.0 : std::sqrt(sse / static_cast<double>(arc.size()));
    return fit;
  }
}

std::vector<Complex> continuation_guess(const ContinuationPoint& last, int n_next,
                                        const EllipticContext& ctx) {
  const std::size_t m_next = static_cast<std::size_t>(n_next / 2);
  std::vector<Complex> guess(m_next);
  guess[0] = {last.lambda1 * last.N / n_next, 0.0};

  std::vector<double> ys;
  const auto& roots = last.solution.rootset.roots;
  for (std::size_t i = 1; i < roots.size(); ++i) ys.push_back(roots[i].imag());
  std::sort(ys.begin(), ys.end());
  const std::size_t old_count = ys.size();
  const std::size_t new_count = m_next - 1;

  // Rank interpolation: quantile (i + 1/2)/count of the old Im values, linear
  // extrapolation past the end quantiles.
  auto quantile = [&](double qpos) {
    if (old_count == 1) return ys.front();
    const double pos = qpos * static_cast<double>(old_count) - 0.5;
    const auto lo = static_cast<std::size_t>(
        std::clamp(std::floor(pos), 0.0, static_cast<double>(old_count - 2)));
    const double frac = pos - static_cast<double>(lo);
    return ys[lo] + frac * (ys[lo + 1] - ys[lo]);
  };
  const double bound = 0.5 * ctx.Kprime() * (1.0 - 1e-6);
  std::vector<double> y(new_count);
  for (std::size_t j = 0; j < new_count; ++j) {
    y[j] = std::clamp(quantile((j + 0.5) / static_cast<double>(new_count)), -bound, bound);
  }
  for (std::size_t j = 0; j < new_count; ++j) {
    const double sym = 0.5 * (y[j] - y[new_count - 1 - j]);
    guess[j + 1] = {arc_curve(last.fit, sym, ctx), sym};
  }
  return guess;
}

ContinuationTrace start_continuation(const AcsmParams& params, const SeedOptions& seed,
                                     const ContinuationOptions& options) {
  (void)options;
  ContinuationTrace trace{params.a, params.b, params.k, {}};
  BetheSolution gs = ground_state_seed(params, seed);
  const EllipticContext ctx = make_context(params.k);
  trace.points.push_back(make_point(params, std::move(gs), ctx));
  return trace;
}

namespace {

bool try_step(ContinuationTrace& trace, int n_next, const ContinuationOptions& options,
              int depth) {
  const ContinuationPoint& last = trace.points.back();
  const AcsmParams params = with_n(trace.a, trace.b, trace.k, n_next);
  const AcsmModel model = build_acsm(params);
  const EllipticContext& ctx = model.system.ctx();
  const std::vector<Complex> guess = continuation_guess(last, n_next, ctx);

  bool ok = false;
  BetheSolution sol;
  try {
    sol = newton_solve(RootSet{Sector{0}, guess}, model.system, options.newton);
    ok = sol.converged && has_ground_state_pattern(sol.rootset, params);
  } catch (const PoleError&) {
    ok = false;
  }
  if (ok) {
    trace.points.push_back(make_point(params, std::move(sol), ctx));
    return true;
  }
  if (depth >= options.max_bisection_depth) return false;
  int mid = (last.N + n_next) / 2;
  if (mid % 2 != 0) --mid;
  if (mid <= last.N || mid >= n_next) return false;
  return try_step(trace, mid, options, depth + 1) && try_step(trace, n_next, options, depth + 1);
}

}  // namespace

void continuation_step(ContinuationTrace& trace, int n_next, const ContinuationOptions& options) {
  if (trace.points.empty()) throw DomainError("continuation_step: empty trace");
  const int last_n = trace.points.back().N;
  if (n_next == last_n) return;
  if (n_next < last_n) throw DomainError("continuation_step: N must increase");
  require_even(n_next, "continuation_step");
  if (!try_step(trace, n_next, options, 0)) {
    std::ostringstream os;
    os << "continuation_step: Newton failed towards N = " << n_next
       << " (last good N = " << trace.points.back().N << ")";
    throw NumericalError(os.str());
  }
}

ContinuationTrace run_continuation(double a, double b, double k, std::span<const int> schedule,
                                   const SeedOptions& seed, const ContinuationOptions& options) {
  if (schedule.empty()) throw DomainError("run_continuation: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw DomainError("run_continuation: schedule must be strictly increasing");
    }
  }
  ContinuationTrace trace = start_continuation(with_n(a, b, k, schedule.front()), seed, options);
  for (std::size_t i = 1; i < schedule.size(); ++i) continuation_step(trace, schedule[i], options);
  return trace;
}

std::vector<int> default_schedule() { return {12, 20, 40, 80, 100, 200, 300}; }

ExtrapolationResult extrapolate(std::span<const double> n, std::span<const double> values,
                                int degree) {
  if (degree < 0) throw DomainError("extrapolate: negative degree");
  if (n.size() != values.size()) throw DomainError("extrapolate: size mismatch");
  const std::size_t needed = std::max<std::size_t>(4, static_cast<std::size_t>(degree) + 1);
  if (n.size() < needed) {
    std::ostringstream os;
    os << "extrapolate: " << n.size() << " points, at least " << needed << " required";
    throw DomainError(os.str());
  }
  const auto rows = static_cast<Eigen::Index>(n.size());
  Eigen::MatrixXd v(rows, degree + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = 1.0 / n[static_cast<std::size_t>(i)];
    double pw = 1.0;
    for (int d = 0; d <= degree; ++d) {
      v(i, d) = pw;
      pw *= x;
    }
    y(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
  ExtrapolationResult out;
  out.limit = c(0);
  out.coefficients.assign(c.data(), c.data() + c.size());
  const Eigen::VectorXd res = v * c - y;
  out.residuals.assign(res.data(), res.data() + res.size());
  return out;
}

TraceExtrapolation extrapolate(const ContinuationTrace& trace, int degree) {
  std::vector<double> n, e, l, lo, hi, cl;
  for (const auto& p : trace.points) {
    n.push_back(p.N);
    e.push_back(p.energy_per_spin);
    l.push_back(p.lambda1 * p.N);
    lo.push_back(p.min_re);
    hi.push_back(p.max_re);
    cl.push_back(p.classical_energy);
  }
  return {extrapolate(n, e, degree), extrapolate(n, l, degree), extrapolate(n, lo, degree),
          extrapolate(n, hi, degree), extrapolate(n, cl, degree)};
}

}  // namespace egaudin
