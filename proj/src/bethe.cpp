#include "egaudin/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace egaudin {

namespace {

struct Evaluation {
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jac;
};

std::string pair_message(const char* what, std::size_t a, const char* other_kind, std::size_t b,
                         const std::string& detail) {
  std::ostringstream os;
  os << what << ": root " << a << " and " << other_kind << " " << b
     << " violate the pole guard (" << detail << ")";
  return os.str();
}

Complex sector_constant(Sector sector, const EllipticContext& ctx) {
  return Complex{0.0, std::numbers::pi * sector.l() / (2.0 * ctx.K())};
}

// Residual (and optionally the Jacobian) in one pass over all pairs.
Evaluation evaluate(const RootSet& rootset, const SpinSystem& system, bool want_jacobian,
                    const char* what) {
  const auto& roots = rootset.roots;
  const auto& sites = system.sites();
  const EllipticContext& ctx = system.ctx();
  const auto m = static_cast<Eigen::Index>(roots.size());
  Evaluation out;
  out.f = Eigen::VectorXcd::Constant(m, sector_constant(rootset.sector, ctx));
  if (want_jacobian) out.jac = Eigen::MatrixXcd::Zero(m, m);

  for (Eigen::Index a = 0; a < m; ++a) {
    const Complex la = roots[static_cast<std::size_t>(a)];
    for (std::size_t j = 0; j < sites.size(); ++j) {
      const Complex d = la - sites[j].z;
      if (std::abs(d) < kPoleGuard) {
        throw PoleError(pair_message(what, static_cast<std::size_t>(a), "site", j, "coincide"),
                        Complex{sites[j].z, 0.0});
      }
      PhiSum p;
      try {
        p = phi_sum_with_derivative(d, ctx);
      } catch (const PoleError& e) {
        throw PoleError(pair_message(what, static_cast<std::size_t>(a), "site", j, e.what()),
                        e.location());
      }
      out.f(a) += sites[j].s * p.value;
      if (want_jacobian) out.jac(a, a) += sites[j].s * p.derivative;
    }
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const Complex d = la - roots[static_cast<std::size_t>(b)];
      if (std::abs(d) < kPoleGuard) {
        throw PoleError(pair_message(what, static_cast<std::size_t>(a), "root",
                                     static_cast<std::size_t>(b), "coincide"),
                        la);
      }
      PhiSum p;
      try {
        p = phi_sum_with_derivative(d, ctx);
      } catch (const PoleError& e) {
        throw PoleError(pair_message(what, static_cast<std::size_t>(a), "root",
                                     static_cast<std::size_t>(b), e.what()),
                        e.location());
      }
      // phi is odd and phi' even.
      out.f(a) -= p.value;
      out.f(b) += p.value;
      if (want_jacobian) {
        out.jac(a, a) -= p.derivative;
        out.jac(b, b) -= p.derivative;
        out.jac(a, b) += p.derivative;
        out.jac(b, a) += p.derivative;
      }
    }
  }
  return out;
}

double wrap_real(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

void fold_real_parts(std::vector<Complex>& roots, const EllipticContext& ctx) {
  for (auto& r : roots) r = Complex{wrap_real(r.real(), 2.0 * ctx.K()), r.imag()};
}

double max_norm(const Eigen::VectorXcd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool all_finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

// Canonical form used for deduplication: Re mod 2K, boundary roots mapped to +K'/2.
std::vector<Complex> canonical(const std::vector<Complex>& roots, const EllipticContext& ctx,
                               double tol, bool conjugate) {
  std::vector<Complex> out;
  out.reserve(roots.size());
  const double half = 0.5 * ctx.Kprime();
  for (Complex r : roots) {
    double im = conjugate ? -r.imag() : r.imag();
    if (std::abs(std::abs(im) - half) < tol) im = half;
    out.emplace_back(wrap_real(r.real(), 2.0 * ctx.K()), im);
  }
  return out;
}

double periodic_distance(Complex a, Complex b, double period) {
  double dre = std::abs(a.real() - b.real());
  dre = std::min(dre, period - dre);
  return std::hypot(dre, a.imag() - b.imag());
}

// Smallest achievable max-distance over assignments between equal-size multisets.
double assignment_distance(const std::vector<Complex>& a, const std::vector<Complex>& b,
                           double period) {
  const std::size_t m = a.size();
  if (m != b.size()) return std::numeric_limits<double>::infinity();
  if (m <= 8) {
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < m && worst < best; ++i) {
        worst = std::max(worst, periodic_distance(a[i], b[perm[i]], period));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Larger sets: greedy nearest matching.
  std::vector<bool> used(m, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double d = periodic_distance(a[i], b[j], period);
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

Sector::Sector(int l) : l_(l) {
  if (l != 0 && l != 1) throw DomainError("Sector: l must be 0 or 1");
}

int sector_parity(Sector sector, int root_count) {
  return ((root_count + sector.l()) % 2 == 0) ? 1 : -1;
}

Eigen::VectorXcd residual(const RootSet& rootset, const SpinSystem& system) {
  return evaluate(rootset, system, false, "residual").f;
}

Eigen::MatrixXcd jacobian(const RootSet& rootset, const SpinSystem& system) {
  return evaluate(rootset, system, true, "jacobian").jac;
}

FoldResult fold_fundamental(const RootSet& rootset, const EllipticContext& ctx) {
  FoldResult out{rootset, {}};
  const double half = 0.5 * ctx.Kprime();
  const double limit = half * (1.0 + kBoundarySlack);
  for (std::size_t i = 0; i < out.rootset.roots.size(); ++i) {
    Complex& r = out.rootset.roots[i];
    double im = r.imag();
    if (std::abs(im) > limit) {
      // Bring Im into [-K'/2, K'/2) by whole quasi-periods.
      const double shifts = std::floor((im + half) / ctx.Kprime());
      im -= shifts * ctx.Kprime();
      out.imaginary_folds.push_back(i);
    }
    r = Complex{wrap_real(r.real(), 2.0 * ctx.K()), im};
  }
  return out;
}

bool inside_fundamental(const RootSet& rootset, const EllipticContext& ctx) {
  const double limit = 0.5 * ctx.Kprime() * (1.0 + kBoundarySlack);
  for (Complex r : rootset.roots) {
    if (r.real() < 0.0 || r.real() >= 2.0 * ctx.K() || std::abs(r.imag()) > limit) return false;
  }
  return true;
}

std::vector<Complex> eigenvalues_complex(const RootSet& rootset, const SpinSystem& system) {
  const auto& sites = system.sites();
  const EllipticContext& ctx = system.ctx();
  const Complex shift = sector_constant(rootset.sector, ctx);
  std::vector<Complex> out(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    Complex acc = shift;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (j != i) acc += sites[j].s * phi_sum(sites[i].z - sites[j].z, ctx);
    }
    for (std::size_t a = 0; a < rootset.roots.size(); ++a) {
      try {
        acc -= phi_sum(sites[i].z - rootset.roots[a], ctx);
      } catch (const PoleError& e) {
        throw PoleError(pair_message("eigenvalues", a, "site", i, e.what()), e.location());
      }
    }
    out[i] = sites[i].s * acc;
  }
  return out;
}

std::vector<double> eigenvalues(const RootSet& rootset, const SpinSystem& system) {
  const std::vector<Complex> rc = eigenvalues_complex(rootset, system);
  std::vector<double> out;
  out.reserve(rc.size());
  for (std::size_t i = 0; i < rc.size(); ++i) {
    if (std::abs(rc[i].imag()) >= 1e-8) {
      std::ostringstream os;
      os << "eigenvalues: r_" << i << " has imaginary part " << rc[i].imag();
      throw NumericalError(os.str());
    }
    out.push_back(rc[i].real());
  }
  return out;
}

double solution_energy(std::span<const Coefficient> coeffs, const BetheSolution& solution) {
  Complex e{};
  for (const auto& c : coeffs) {
    if (c.site >= solution.r.size()) throw DomainError("solution_energy: site index out of range");
    e += c.value * solution.r[c.site];
  }
  return e.real();
}

BetheSolution newton_solve(const RootSet& initial, const SpinSystem& system,
                           const NewtonOptions& options) {
  const EllipticContext& ctx = system.ctx();
  if (static_cast<int>(initial.roots.size()) != system.root_count()) {
    throw DomainError("newton_solve: root count does not match M = sum s_i");
  }
  BetheSolution sol;
  sol.rootset = fold_fundamental(initial, ctx).rootset;

  Evaluation ev = evaluate(sol.rootset, system, true, "newton_solve");
  double fmax = max_norm(ev.f);
  double f2 = ev.f.norm();
  sol.residual_history.push_back(fmax);
  const double min_step = std::ldexp(1.0, -options.min_damping_exponent);

  for (int it = 0;; ++it) {
    if (fmax < options.tolerance) {
      if (inside_fundamental(sol.rootset, ctx)) {
        sol.converged = true;
        break;
      }
      if (sol.imaginary_folds >= options.max_fold_restarts) break;
      // Imaginary folds change the equations; re-solve from the folded point.
      sol.rootset = fold_fundamental(sol.rootset, ctx).rootset;
      ++sol.imaginary_folds;
      ev = evaluate(sol.rootset, system, true, "newton_solve");
      fmax = max_norm(ev.f);
      f2 = ev.f.norm();
      sol.residual_history.push_back(fmax);
      continue;
    }
    if (it >= options.max_iterations) break;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ev.jac);
    const Eigen::VectorXcd step = lu.solve(-ev.f);
    if (!all_finite(step)) break;

    double t = 1.0;
    bool accepted = false;
    bool hit_pole = false;
    RootSet trial = sol.rootset;
    Evaluation trial_ev;
    while (t >= min_step) {
      for (std::size_t a = 0; a < trial.roots.size(); ++a) {
        trial.roots[a] = sol.rootset.roots[a] + t * step(static_cast<Eigen::Index>(a));
      }
      fold_real_parts(trial.roots, ctx);
      try {
        trial_ev = evaluate(trial, system, true, "newton_solve");
        if (all_finite(trial_ev.f) && trial_ev.f.norm() < f2) {
          accepted = true;
          break;
        }
      } catch (const PoleError&) {
        hit_pole = true;
      }
      t *= 0.5;
    }
    sol.iterations = it + 1;
    if (!accepted) {
      if (hit_pole) {
        throw PoleError("newton_solve: pole collision, no damped step avoids a pole guard",
                        sol.rootset.roots.empty() ? Complex{} : sol.rootset.roots.front());
      }
      break;
    }
    sol.rootset = std::move(trial);
    ev = std::move(trial_ev);
    fmax = max_norm(ev.f);
    f2 = ev.f.norm();
    sol.residual_history.push_back(fmax);
  }
  sol.residual_norm = fmax;
  if (sol.converged) sol.r = eigenvalues_complex(sol.rootset, system);
  return sol;
}

bool same_solution(const RootSet& a, const RootSet& b, const EllipticContext& ctx,
                   double tolerance) {
  if (a.sector != b.sector || a.roots.size() != b.roots.size()) return false;
  const double period = 2.0 * ctx.K();
  const auto ca = canonical(a.roots, ctx, tolerance, false);
  if (assignment_distance(ca, canonical(b.roots, ctx, tolerance, false), period) < tolerance) {
    return true;
  }
  if (a.sector.l() == 0) {
    return assignment_distance(ca, canonical(b.roots, ctx, tolerance, true), period) < tolerance;
  }
  return false;
}

namespace {

// Starting points for the multi-start search. Families cycle with the attempt number.
class SeedGenerator {
 public:
  SeedGenerator(const SpinSystem& system, Sector sector, std::uint64_t seed)
      : system_(system), sector_(sector), rng_(seed) {
    zmin_ = zmax_ = system.sites().front().z;
    for (const auto& s : system.sites()) {
      zmin_ = std::min(zmin_, s.z);
      zmax_ = std::max(zmax_, s.z);
    }
  }

  std::vector<Complex> next(int attempt) {
    for (int tries = 0; tries < 64; ++tries) {
      std::vector<Complex> seed = draw(attempt % kFamilies);
      if (respects_guards(seed)) return seed;
    }
    return draw(0);
  }

 private:
  static constexpr int kFamilies = 7;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double any_real() { return uniform(0.0, 2.0 * system_.ctx().K()); }
  double any_imag() {
    const double h = 0.5 * system_.ctx().Kprime();
    return uniform(-h, h);
  }
  double boundary(bool allow_negative) {
    const double h = 0.5 * system_.ctx().Kprime();
    if (!allow_negative) return h;
    return uniform(0.0, 1.0) < 0.5 ? h : -h;
  }

  // Fills with conjugate pairs, leaving a real root when an odd count remains.
  void fill_pairs(std::vector<Complex>& roots, std::size_t from) {
    std::size_t i = from;
    while (i + 1 < roots.size()) {
      const double x = any_real();
      const double y = any_imag();
      roots[i++] = {x, y};
      roots[i++] = {x, -y};
    }
    if (i < roots.size()) roots[i] = {any_real(), 0.0};
  }

  std::vector<Complex> draw(int family) {
    const std::size_t m = static_cast<std::size_t>(system_.root_count());
    std::vector<Complex> roots(m);
    const bool odd = sector_.l() == 1;
    switch (family) {
      case 0:  // anywhere in the rectangle
        for (auto& r : roots) r = {any_real(), any_imag()};
        break;
      case 1:  // conjugate pairs
        fill_pairs(roots, 0);
        break;
      case 2:  // one boundary root, the rest real
        for (auto& r : roots) r = {any_real(), 0.0};
        if (m > 0) roots[0] = {any_real(), boundary(!odd)};
        break;
      case 3:  // one boundary root, the rest in pairs
        if (m > 0) roots[0] = {any_real(), boundary(!odd)};
        fill_pairs(roots, 1);
        break;
      case 4:  // all real
        for (auto& r : roots) r = {any_real(), 0.0};
        break;
      case 5: {  // clustered around the inhomogeneities
        const double spread = std::max(0.1, zmax_ - zmin_);
        for (auto& r : roots) {
          r = {uniform(zmin_ - 0.25 * spread, zmax_ + 0.25 * spread), uniform(-0.2, 0.2)};
        }
        if (odd && m > 0) roots[0] = {any_real(), boundary(false)};
        break;
      }
      default: {  // a +-K'/2 pair with independent real parts
        for (auto& r : roots) r = {any_real(), 0.0};
        std::size_t i = 0;
        if (odd && m > 0) roots[i++] = {any_real(), boundary(false)};
        if (i + 1 < m) {
          const double h = 0.5 * system_.ctx().Kprime();
          roots[i++] = {any_real(), h};
          roots[i++] = {any_real(), -h};
        }
        break;
      }
    }
    return roots;
  }

  bool respects_guards(const std::vector<Complex>& roots) const {
    constexpr double kSeedGap = 1e-4;
    for (std::size_t a = 0; a < roots.size(); ++a) {
      for (const auto& s : system_.sites()) {
        if (std::abs(roots[a] - s.z) < kSeedGap) return false;
      }
      for (std::size_t b = a + 1; b < roots.size(); ++b) {
        if (std::abs(roots[a] - roots[b]) < kSeedGap) return false;
      }
    }
    return true;
  }

  const SpinSystem& system_;
  Sector sector_;
  std::mt19937_64 rng_;
  double zmin_ = 0.0;
  double zmax_ = 0.0;
};

bool same_eigenvalues(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-8 * (1.0 + std::abs(a[i]))) return false;
  }
  return true;
}

}  // namespace

Enumeration enumerate_solutions(const SpinSystem& system, Sector sector,
                                const EnumerationOptions& options) {
  const EllipticContext& ctx = system.ctx();
  const int m = system.root_count();
  const int parity = sector_parity(sector, m);
  Enumeration out;
  for (int p : parity_signs(system)) {
    if (p == parity) ++out.expected;
  }

  SeedGenerator seeds(system, sector, options.seed);
  for (int attempt = 0; attempt < options.budget && out.solutions.size() < out.expected;
       ++attempt) {
    ++out.attempts;
    RootSet start{sector, seeds.next(attempt)};
    BetheSolution sol;
    try {
      sol = newton_solve(start, system, options.newton);
    } catch (const PoleError&) {
      continue;
    }
    if (!sol.converged) continue;
    bool physical = true;
    for (const Complex& r : sol.r) physical = physical && std::abs(r.imag()) < 1e-8;
    if (!physical) continue;
    bool duplicate = false;
    for (const auto& known : out.solutions) {
      if (same_solution(known.rootset, sol.rootset, ctx, options.dedup_tolerance) ||
          same_eigenvalues(known.r, sol.r)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.solutions.push_back(std::move(sol));
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const BetheSolution& a, const BetheSolution& b) {
              return a.r.front().real() < b.r.front().real();
            });
  out.complete = out.solutions.size() == out.expected;
  if (!out.complete) {
    std::ostringstream os;
    os << "enumerate_solutions: found " << out.solutions.size() << " of " << out.expected
       << " solutions in sector l = " << sector.l() << " after " << out.attempts << " attempts";
    out.warning = os.str();
  }
  return out;
}

}  // namespace egaudin
