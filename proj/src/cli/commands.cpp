#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <set>

#include "cli/format.hpp"
#include "cli/models.hpp"
#include "cli/verify.hpp"
#include "egaudin/acsm.hpp"
#include "egaudin/bethe.hpp"
#include "egaudin/eigensolve.hpp"

namespace egaudin::cli {

namespace {

using json = nlohmann::json;

// JSON config files: top-level keys set global options, nested objects named
// after a subcommand set that subcommand's options.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        std::vector<std::string> next = parents;
        next.push_back(key);
        flatten(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static json dump(const CLI::App* app, bool default_also) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      std::vector<std::string> values = opt->reduced_results();
      if (values.empty() && default_also && !opt->get_default_str().empty()) {
        values.push_back(opt->get_default_str());
      }
      if (values.empty()) continue;
      const std::string& name = opt->get_lnames().front();
      if (values.size() == 1 && opt->get_items_expected_max() <= 1) {
        out[name] = values.front();
      } else {
        out[name] = values;
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json child = dump(sub, default_also);
      if (!child.empty()) out[sub->get_name()] = child;
    }
    return out;
  }
};

struct GlobalOptions {
  std::uint64_t seed = 1976;
  int digits = 6;
  std::optional<std::string> out;
};

std::string num(double v, const GlobalOptions& g) { return format_number(v, g.digits); }

// ---------------------------------------------------------------- special

struct SpecialOptions {
  double k = 0.5;
  bool constants = false;
  std::vector<std::string> eval;
};

int cmd_special(const SpecialOptions& o, const GlobalOptions& g, std::ostream& out) {
  const EllipticContext ctx = make_context(o.k);
  std::vector<Complex> points;
  for (const auto& text : o.eval) points.push_back(parse_complex(text));

  OutputSink sink(out, g.out);
  std::ostream& os = sink.stream();
  if (o.constants || points.empty()) {
    CsvTable t({"k", "K", "Kprime", "q", "C"});
    t.add_row({num(ctx.k(), g), num(ctx.K(), g), num(ctx.Kprime(), g), num(ctx.q(), g),
               num(ctx.C(), g)});
    t.write(os);
  }
  if (!points.empty()) {
    if (o.constants) os << '\n';
    CsvTable t({"u_re", "u_im", "sn_re", "sn_im", "cn_re", "cn_im", "dn_re", "dn_im", "phi1_re",
                "phi1_im", "phi4_re", "phi4_im"});
    for (const Complex u : points) {
      std::vector<std::string> row{num(u.real(), g), num(u.imag(), g)};
      auto push = [&](std::optional<Complex> v) {
        row.push_back(v ? num(v->real(), g) : "pole");
        row.push_back(v ? num(v->imag(), g) : "pole");
      };
      std::optional<JacobiValues> j;
      try {
        j = jacobi_elliptic(u, ctx);
      } catch (const PoleError&) {
      }
      push(j ? std::optional(j->sn) : std::nullopt);
      push(j ? std::optional(j->cn) : std::nullopt);
      push(j ? std::optional(j->dn) : std::nullopt);
      std::optional<PhiValues> p;
      try {
        p = phi(u, ctx);
      } catch (const PoleError&) {
      }
      push(p ? std::optional(p->phi1) : std::nullopt);
      push(p ? std::optional(p->phi4) : std::nullopt);
      t.add_row(std::move(row));
    }
    t.write(os);
  }
  return kSuccess;
}

// ------------------------------------------------------------- three-spin

struct ThreeSpinOptions {
  double k = kThreeSpinK;
  std::vector<double> z{0.0, 0.2, 0.4};
  std::vector<double> spins{0.5, 1.0, 1.5};
  std::vector<double> coeffs{-0.5, -0.25};
  int sector = -1;  // -1 = both
  int budget = 20000;
  double tolerance = 1e-11;
};

int cmd_three_spin(const ThreeSpinOptions& o, const GlobalOptions& g, std::ostream& out,
                   std::ostream& err) {
  if (o.z.size() != o.spins.size()) throw DomainError("--z and --spins need the same length");
  if (o.coeffs.size() > o.z.size()) throw DomainError("more --coeffs than sites");
  std::vector<SpinSite> sites;
  for (std::size_t i = 0; i < o.z.size(); ++i) sites.push_back({o.spins[i], o.z[i]});
  const SpinSystem system(sites, make_context(o.k));
  std::vector<Coefficient> coeffs;
  for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs.push_back({i, o.coeffs[i]});

  OutputSink sink(out, g.out);
  std::ostream& os = sink.stream();

  // (a) couplings of H, one column per pair and axis.
  std::vector<std::string> header;
  std::vector<std::string> row;
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      const Couplings c = pair_coupling(coeffs, i, j, system);
      const std::string pair = std::to_string(i + 1) + std::to_string(j + 1);
      for (const char* axis : {"x", "y", "z"}) header.push_back("H" + pair + axis);
      row.insert(row.end(), {num(c.x, g), num(c.y, g), num(c.z, g)});
    }
  }
  CsvTable couplings_table(header);
  couplings_table.add_row(row);
  couplings_table.write(os);

  // (b, c) Bethe solutions per sector against the ED spectrum of the matching block.
  const OperatorMatrix h = build_hamiltonian(coeffs, system);
  const ParityBlocks blocks = parity_split(h, system);
  const int m = system.root_count();
  bool complete = true;
  for (int l = 0; l < 2; ++l) {
    if (o.sector >= 0 && o.sector != l) continue;
    EnumerationOptions eo;
    eo.budget = o.budget;
    eo.seed = g.seed;
    eo.newton.tolerance = o.tolerance;
    const Enumeration en = enumerate_solutions(system, Sector{l}, eo);
    const bool even = sector_parity(Sector{l}, m) > 0;
    const Spectrum ed = eigensolve(even ? blocks.even_block : blocks.odd_block);

    std::vector<std::pair<double, const BetheSolution*>> rows;
    for (const auto& s : en.solutions) rows.emplace_back(solution_energy(coeffs, s), &s);
    std::sort(rows.begin(), rows.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<std::string> hdr{"l", "E", "two_E", "ED", "delta"};
    for (int a = 1; a <= m; ++a) {
      hdr.push_back("lambda" + std::to_string(a) + "_re");
      hdr.push_back("lambda" + std::to_string(a) + "_im");
    }
    CsvTable t(hdr);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double e = rows[r].first;
      const bool has_ed = r < ed.values.size() && rows.size() == ed.values.size();
      std::vector<std::string> cells{std::to_string(l), num(e, g), num(2.0 * e, g),
                                     has_ed ? num(ed.values[r], g) : "",
                                     has_ed ? format_number(e - ed.values[r], 3) : ""};
      std::vector<Complex> roots = rows[r].second->rootset.roots;
      std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
      });
      for (Complex c : roots) {
        // Imaginary parts at rounding level are printed as exact zeros.
        const double im = std::abs(c.imag()) < 1e-12 * std::max(1.0, std::abs(c)) ? 0.0 : c.imag();
        cells.push_back(num(c.real(), g));
        cells.push_back(num(im, g));
      }
      t.add_row(std::move(cells));
    }
    os << '\n';
    t.write(os);
    if (!en.complete) {
      complete = false;
      err << "warning: sector l = " << l << ": " << en.warning << '\n';
    }
  }
  return complete ? kSuccess : kNumericalFailure;
}

// ------------------------------------------------------------------- acsm

struct AcsmOptions {
  double a = 0.2;
  double b = 0.6;
  double k = 0.5;
  std::vector<int> schedule = default_schedule();
  int degree = 3;
  int seed_budget = 96;
  std::optional<std::string> roots_out;
};

nlohmann::ordered_json root_dump(const ContinuationPoint& p) {
  nlohmann::ordered_json roots = nlohmann::ordered_json::array();
  for (Complex c : p.solution.rootset.roots) roots.push_back({{"re", c.real()}, {"im", c.imag()}});
  return {{"N", p.N},
          {"l", p.solution.rootset.sector.l()},
          {"roots", roots},
          {"energy", p.energy_per_spin * p.N},
          {"residual", p.solution.residual_norm}};
}

int cmd_acsm(const AcsmOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  if (o.schedule.empty()) throw DomainError("--schedule must not be empty");
  for (std::size_t i = 0; i < o.schedule.size(); ++i) {
    const int n = o.schedule[i];
    if (n < 4 || n % 2 != 0) throw DomainError("--schedule: every N must be even and at least 4");
    if (i > 0 && n <= o.schedule[i - 1]) throw DomainError("--schedule must be strictly increasing");
  }
  if (o.schedule.front() > 16) throw DomainError("--schedule: the first N must not exceed 16");
  validate(AcsmParams{o.schedule.front(), o.a, o.b, o.k});
  SeedOptions so;
  so.seed = g.seed;
  so.budget = o.seed_budget;

  ContinuationTrace trace;
  std::string failure;
  try {
    trace = start_continuation(AcsmParams{o.schedule.front(), o.a, o.b, o.k}, so);
    for (std::size_t i = 1; i < o.schedule.size(); ++i) continuation_step(trace, o.schedule[i]);
  } catch (const NumericalError& e) {
    failure = e.what();
  } catch (const PoleError& e) {
    failure = e.what();
  }

  OutputSink sink(out, g.out);
  std::ostream& os = sink.stream();
  CsvTable t({"N", "lambda1_N", "min_re", "max_re", "E_per_N", "classical_E_per_N", "arc_rms"});
  for (const auto& p : trace.points) {
    t.add_row({std::to_string(p.N), num(p.lambda1 * p.N, g), num(p.min_re, g), num(p.max_re, g),
               num(p.energy_per_spin, g), num(p.classical_energy, g), format_number(p.fit.rms, 3)});
  }
  const double limit = classical_limit(AcsmParams{o.schedule.front(), o.a, o.b, o.k});
  const std::size_t needed = std::max<std::size_t>(4, static_cast<std::size_t>(o.degree) + 1);
  if (failure.empty() && trace.points.size() >= needed) {
    const TraceExtrapolation ex = extrapolate(trace, o.degree);
    t.add_row({"inf", num(ex.lambda1_scaled.limit, g), num(ex.min_re.limit, g),
               num(ex.max_re.limit, g), num(ex.energy_per_spin.limit, g), num(limit, g), ""});
  } else if (failure.empty()) {
    err << "notice: " << trace.points.size() << " trace point(s); extrapolation needs at least "
        << needed << ", no infinite-N row emitted (closed-form classical limit "
        << format_number(limit, g.digits) << ")\n";
  }
  t.write(os);

  if (o.roots_out) {
    nlohmann::ordered_json dump = nlohmann::ordered_json::array();
    for (const auto& p : trace.points) dump.push_back(root_dump(p));
    OutputSink roots(out, o.roots_out);
    roots.stream() << dump.dump(2) << '\n';
  }
  if (!failure.empty()) {
    err << "error: " << failure << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

// ----------------------------------------------------------------- verify

struct VerifyCliOptions {
  std::vector<std::string> only;
  int points = 1000;
  int systems = 20;
  bool wrong_convention = false;
};

int cmd_verify(const VerifyCliOptions& o, const GlobalOptions& g, std::ostream& out,
               std::ostream& err) {
  VerifyOptions vo;
  vo.only = o.only;
  vo.seed = g.seed;
  vo.random_points = o.points;
  vo.random_systems = o.systems;
  if (o.wrong_convention) vo.convention = CouplingConvention::ModulusSquared;
  const VerifyReport report = run_verification(vo);
  OutputSink sink(out, g.out);
  sink.stream() << report.to_json().dump(2) << '\n';
  for (const auto& c : report.checks) {
    err << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  if (const CheckResult* f = report.first_failure()) {
    err << "verification failed: first failing check '" << f->name << "'\n";
    return kVerificationFailure;
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic Gaudin model toolkit", "egaudin"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every multi-start search")->capture_default_str();
  app.add_option("--digits", g.digits, "Significant digits in tables")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("--out", g.out,
                 "Output file (relative paths resolve against EGAUDIN_OUTPUT_DIR)");

  SpecialOptions special;
  auto* sp = app.add_subcommand("special", "Jacobi functions, phi and elliptic constants");
  sp->add_option("--k", special.k, "Elliptic modulus")->capture_default_str();
  sp->add_flag("--constants", special.constants, "Print K, K', q and C");
  sp->add_option("--eval", special.eval, "Complex points such as 0.2+0.1i");

  ThreeSpinOptions three;
  auto* ts = app.add_subcommand("three-spin", "Couplings, Bethe solutions and ED of a small system");
  ts->add_option("--k", three.k, "Elliptic modulus")->capture_default_str();
  ts->add_option("--z", three.z, "Site parameters")->capture_default_str();
  ts->add_option("--spins", three.spins, "Site spins")->capture_default_str();
  ts->add_option("--coeffs", three.coeffs, "Hamiltonian coefficients c_i of sum c_i R_i")
      ->capture_default_str();
  ts->add_option("--sector", three.sector, "Parity sector l (0 or 1); both when omitted")
      ->check(CLI::IsMember({0, 1}));
  ts->add_option("--budget", three.budget, "Multi-start attempts per sector")->capture_default_str();
  ts->add_option("--tolerance", three.tolerance, "Newton residual tolerance")
      ->capture_default_str();

  AcsmOptions acsm;
  auto* ac = app.add_subcommand("acsm", "Central spin model ground-state continuation");
  ac->add_option("--a", acsm.a, "Lower edge of the bath grid")->capture_default_str();
  ac->add_option("--b", acsm.b, "Upper edge of the bath grid")->capture_default_str();
  ac->add_option("--k", acsm.k, "Elliptic modulus")->capture_default_str();
  ac->add_option("--schedule", acsm.schedule, "Increasing even sizes N")->capture_default_str();
  ac->add_option("--degree", acsm.degree, "Polynomial degree in 1/N for extrapolation")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  ac->add_option("--seed-budget", acsm.seed_budget, "Multi-start attempts for the first N")
      ->capture_default_str();
  ac->add_option("--roots-out", acsm.roots_out, "JSON dump of the roots at every N");

  VerifyCliOptions verify;
  auto* vf = app.add_subcommand("verify", "Run the invariant suites and print a JSON report");
  vf->add_option("--only", verify.only, "Subset of checks")
      ->check(CLI::IsMember(check_names()));
  vf->add_option("--points", verify.points, "Random points for the identity check")
      ->capture_default_str();
  vf->add_option("--systems", verify.systems, "Random 4-site systems for the commutator check")
      ->capture_default_str();
  vf->add_flag("--inject-wrong-convention", verify.wrong_convention,
               "Test hook: build couplings with k^2 in place of k")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (sp->parsed()) return cmd_special(special, g, out);
    if (ts->parsed()) return cmd_three_spin(three, g, out, err);
    if (ac->parsed()) return cmd_acsm(acsm, g, out, err);
    return cmd_verify(verify, g, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PoleError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace egaudin::cli
