#include "cli/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "cli/models.hpp"
#include "egaudin/acsm.hpp"
#include "egaudin/bethe.hpp"
#include "egaudin/eigensolve.hpp"

namespace egaudin::cli {

namespace {

std::string describe(double value) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << value;
  return os.str();
}

CheckResult finish(std::string name, double metric, double tolerance, std::string detail) {
  CheckResult r;
  r.name = std::move(name);
  r.metric = metric;
  r.tolerance = tolerance;
  r.passed = std::isfinite(metric) && metric <= tolerance;
  r.detail = std::move(detail);
  return r;
}

std::vector<double> sorted_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

double max_spectral_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

nlohmann::ordered_json VerifyReport::to_json() const {
  nlohmann::ordered_json out;
  out["passed"] = all_passed();
  const CheckResult* fail = first_failure();
  out["first_failure"] = fail ? nlohmann::ordered_json(fail->name) : nlohmann::ordered_json();
  out["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    out["checks"].push_back({{"name", c.name},
                             {"passed", c.passed},
                             {"metric", c.metric},
                             {"tolerance", c.tolerance},
                             {"detail", c.detail}});
  }
  return out;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"identities",    "commutators",  "limits",
                                              "bethe-ed",      "root-patterns", "degeneration",
                                              "acsm-ed"};
  return names;
}

const std::vector<std::string>& default_check_names() {
  static const std::vector<std::string> names(check_names().begin(), check_names().end() - 1);
  return names;
}

CheckResult check_identities(const VerifyOptions& options) {
  const EllipticContext ctx = make_context(0.5);
  const double k = ctx.k();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> re(0.1, 2.0 * ctx.K() - 0.1);
  std::uniform_real_distribution<double> im(-0.45 * ctx.Kprime(), 0.45 * ctx.Kprime());
  const Complex period{2.0 * ctx.K(), 0.0};
  const Complex quasi{0.0, ctx.Kprime()};

  double worst[5] = {0, 0, 0, 0, 0};
  for (int n = 0; n < options.random_points; ++n) {
    const Complex u{re(rng), im(rng)};
    const JacobiValues j = jacobi_elliptic(u, ctx);
    const PhiValues p = phi(u, ctx);
    const Complex sum = p.phi1 + p.phi4;
    const double scale = std::max(1.0, std::abs(sum));
    worst[0] = std::max(worst[0], std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
    worst[1] = std::max(worst[1], std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0));
    const Complex ratio = j.cn * j.dn / j.sn;
    worst[2] = std::max(worst[2],
                        std::abs(p.phi1 - p.phi4 - ratio) / std::max(1.0, std::abs(ratio)));
    worst[3] = std::max(worst[3], std::abs(phi_sum(u + period, ctx) - sum) / scale);
    const Complex shift = phi_sum(u + quasi, ctx) - sum;
    worst[4] = std::max(worst[4], (std::abs(shift.imag() - ctx.C()) + std::abs(shift.real())) / scale);
  }
  const double metric = *std::max_element(std::begin(worst), std::end(worst));
  std::ostringstream os;
  os << options.random_points << " points; sn^2+cn^2 " << describe(worst[0]) << ", dn^2+k^2sn^2 "
     << describe(worst[1]) << ", phi1-phi4 " << describe(worst[2]) << ", 2K period "
     << describe(worst[3]) << ", iK' shift vs C " << describe(worst[4]);
  return finish("identities", metric, 1e-10, os.str());
}

CheckResult check_commutators(const VerifyOptions& options) {
  double worst = 0.0;
  auto relative = [](const OperatorMatrix& a, const OperatorMatrix& b) {
    return commutator_max(a.entries, b.entries) /
           std::max(1e-300, max_abs(a.entries) * max_abs(b.entries));
  };
  auto scan = [&](const SpinSystem& system) {
    std::vector<OperatorMatrix> r;
    for (std::size_t i = 0; i < system.size(); ++i) r.push_back(build_integral(i, system));
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = i + 1; j < r.size(); ++j) worst = std::max(worst, relative(r[i], r[j]));
    }
  };
  scan(three_spin_system(options.convention));
  const double three_spin = worst;

  std::mt19937_64 rng(options.seed + 1);
  const EllipticContext ctx = make_context(0.5);
  std::uniform_real_distribution<double> zdist(0.0, ctx.K());
  std::uniform_int_distribution<int> twice_s(1, 2);
  for (int n = 0; n < options.random_systems; ++n) {
    std::vector<double> z;
    while (z.size() < 4) {
      const double c = zdist(rng);
      if (std::all_of(z.begin(), z.end(), [c](double o) { return std::abs(o - c) > 0.05; })) {
        z.push_back(c);
      }
    }
    std::vector<SpinSite> sites;
    for (double zi : z) sites.push_back({0.5 * twice_s(rng), zi});
    scan(SpinSystem(sites, ctx, options.convention));
  }
  std::ostringstream os;
  os << "relative max |[R_i, R_j]|: three-spin " << describe(three_spin) << ", worst over "
     << options.random_systems << " random 4-site systems " << describe(worst);
  if (options.convention == CouplingConvention::ModulusSquared) {
    os << " (k^2 coupling convention injected)";
  }
  return finish("commutators", worst, 1e-9, os.str());
}

CheckResult check_limits(const VerifyOptions& options) {
  const std::vector<SpinSite> sites = three_spin_sites();
  const SpinSystem small(sites, make_context(1e-6), options.convention);
  const SpinSystem large(sites, make_context(1.0 - 1e-9), options.convention);
  double trig = 0.0;
  double hyp = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    trig = std::max(trig, max_abs(build_integral(i, small).entries -
                                  trigonometric_integral(i, small).entries));
    hyp = std::max(hyp, max_abs(build_integral(i, large).entries -
                                2.0 * hyperbolic_integral(i, large).entries));
  }
  std::ostringstream os;
  os << "entrywise: k = 1e-6 vs trigonometric " << describe(trig)
     << ", k = 1 - 1e-9 vs 2 x hyperbolic (eta = 2z) " << describe(hyp);
  return finish("limits", std::max(trig, hyp), 1e-4, os.str());
}

CheckResult check_bethe_ed(const VerifyOptions& options) {
  const SpinSystem system = three_spin_system(options.convention);
  const std::vector<Coefficient> coeffs = three_spin_coefficients();
  const ParityBlocks blocks = parity_split(build_hamiltonian(coeffs, system), system);
  double worst = 0.0;
  std::ostringstream os;
  for (int l = 0; l < 2; ++l) {
    EnumerationOptions eo;
    eo.seed = options.seed;
    const Enumeration en = enumerate_solutions(system, Sector{l}, eo);
    const bool even = sector_parity(Sector{l}, system.root_count()) > 0;
    const std::vector<double> ed =
        sorted_eigenvalues((even ? blocks.even_block : blocks.odd_block).entries);
    std::vector<double> bethe;
    for (const auto& s : en.solutions) bethe.push_back(solution_energy(coeffs, s));
    const double gap = max_spectral_gap(bethe, ed);
    worst = std::max(worst, gap);
    os << "l = " << l << ": " << en.solutions.size() << "/" << ed.size() << " solutions, max |E - ED| "
       << describe(gap) << "; ";
  }
  return finish("bethe-ed", worst, 1e-8, os.str());
}

CheckResult check_root_patterns(const VerifyOptions& options) {
  const SpinSystem system = three_spin_system(options.convention);
  const EllipticContext& ctx = system.ctx();
  const double half = 0.5 * ctx.Kprime();
  const double tol = 1e-7;
  int violations = 0;
  std::ostringstream os;
  for (int l = 0; l < 2; ++l) {
    EnumerationOptions eo;
    eo.seed = options.seed;
    const Enumeration en = enumerate_solutions(system, Sector{l}, eo);
    if (!en.complete) ++violations;
    for (const auto& s : en.solutions) {
      const auto& roots = s.rootset.roots;
      const auto upper = std::count_if(roots.begin(), roots.end(), [&](Complex r) {
        return std::abs(r.imag() - half) < tol;
      });
      const auto lower = std::count_if(roots.begin(), roots.end(), [&](Complex r) {
        return std::abs(r.imag() + half) < tol;
      });
      // Boundary roots come in +-K'/2 pairs, plus one extra root at +K'/2 for l = 1.
      if (upper - lower != l) ++violations;
      // Away from the boundary lines every root needs its conjugate partner.
      std::vector<Complex> interior;
      for (Complex r : roots) {
        if (std::abs(std::abs(r.imag()) - half) > tol) interior.push_back(r);
      }
      for (Complex r : interior) {
        const bool paired = std::any_of(interior.begin(), interior.end(), [&](Complex o) {
          return std::abs(o - std::conj(r)) < 1e-6;
        });
        if (!paired) ++violations;
      }
    }
    os << "l = " << l << ": " << en.solutions.size() << " solutions; ";
  }
  os << violations << " pattern violations";
  return finish("root-patterns", violations, 0.0, os.str());
}

double degeneration_error(double eps, double k, double z, double z_third, double s_third) {
  const EllipticContext ctx = make_context(k);
  const SpinSystem split({{0.5, z}, {0.5, z + eps}, {s_third, z_third}}, ctx);
  const SpinSystem merged({{1.0, z}, {s_third, z_third}}, ctx);
  const CMatrix r_split = build_integral(2, split).entries;
  const CMatrix r_merged = build_integral(1, merged).entries;

  // Isometry from (spin 1) x third onto the triplet of the two spin-1/2 sites.
  const auto d3 = static_cast<Eigen::Index>(std::lround(2 * s_third + 1));
  CMatrix iso = CMatrix::Zero(4 * d3, 3 * d3);
  const double h = 1.0 / std::sqrt(2.0);
  for (Eigen::Index c = 0; c < d3; ++c) {
    iso(0 * d3 + c, 0 * d3 + c) = 1.0;  // up up      -> m = +1
    iso(1 * d3 + c, 1 * d3 + c) = h;    // up down    -> m = 0
    iso(2 * d3 + c, 1 * d3 + c) = h;    // down up
    iso(3 * d3 + c, 2 * d3 + c) = 1.0;  // down down  -> m = -1
  }
  const CMatrix compressed = iso.adjoint() * r_split * iso;
  return max_spectral_gap(sorted_eigenvalues(compressed), sorted_eigenvalues(r_merged));
}

CheckResult check_degeneration(const VerifyOptions&) {
  const double e3 = degeneration_error(1e-3);
  const double e4 = degeneration_error(1e-4);
  const double ratio = e3 / e4;
  std::ostringstream os;
  os << "spectral error " << describe(e3) << " at eps = 1e-3, " << describe(e4)
     << " at eps = 1e-4, ratio " << ratio << " (expected about 10)";
  // Metric is the distance of the ratio from the first-order value 10.
  return finish("degeneration", std::abs(ratio - 10.0), 1.0, os.str());
}

CheckResult check_acsm_ed(const VerifyOptions& options) {
  const AcsmParams params{12, 0.2, 0.6, 0.5};
  SeedOptions so;
  so.seed = options.seed;
  const BetheSolution gs = ground_state_seed(params, so);
  const double bethe = -gs.r.front().real();
  AcsmModel model = build_acsm(params, true);
  const OperatorMatrix block = acsm_ground_block(model);
  model.hamiltonian.reset();
  EigensolveOptions eo;
  eo.seed = options.seed;
  const Spectrum spec = eigensolve(block, eo);
  const double gap = std::abs(bethe - spec.values.front());
  std::ostringstream os;
  os.precision(12);
  os << "N = 12: Bethe " << bethe << ", ED " << spec.values.front() << " (block dim "
     << block.dim() << ")";
  return finish("acsm-ed", gap, 1e-8, os.str());
}

VerifyReport run_verification(const VerifyOptions& options) {
  std::vector<std::string> selected = options.only.empty() ? default_check_names() : options.only;
  for (const auto& name : selected) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw DomainError("unknown check '" + name + "'");
    }
  }
  VerifyReport report;
  for (const auto& name : check_names()) {
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      if (name == "identities") r = check_identities(options);
      else if (name == "commutators") r = check_commutators(options);
      else if (name == "limits") r = check_limits(options);
      else if (name == "bethe-ed") r = check_bethe_ed(options);
      else if (name == "root-patterns") r = check_root_patterns(options);
      else if (name == "degeneration") r = check_degeneration(options);
      else r = check_acsm_ed(options);
    } catch (const std::exception& e) {
      r = CheckResult{name, false, std::numeric_limits<double>::infinity(), 0.0,
                      std::string("exception: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace egaudin::cli
