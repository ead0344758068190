#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "cli/verify.hpp"
#include "egaudin/acsm.hpp"
#include "egaudin/bethe.hpp"
#include "egaudin/elliptic.hpp"
#include "egaudin/errors.hpp"
#include "egaudin/spinops.hpp"

namespace py = pybind11;
using namespace egaudin;

namespace {

CouplingConvention parse_convention(const std::string& name) {
  if (name == "modulus") return CouplingConvention::Modulus;
  if (name == "modulus-squared") return CouplingConvention::ModulusSquared;
  throw DomainError("unknown coupling convention '" + name + "' (modulus or modulus-squared)");
}

SpinSystem make_system(const std::vector<std::pair<double, double>>& sites, double k,
                       const std::string& convention) {
  std::vector<SpinSite> s;
  for (const auto& [spin, z] : sites) s.push_back({spin, z});
  return SpinSystem(std::move(s), make_context(k), parse_convention(convention));
}

std::vector<Coefficient> make_coefficients(const std::vector<std::pair<std::size_t, double>>& c) {
  std::vector<Coefficient> out;
  for (const auto& [site, value] : c) out.push_back({site, value});
  return out;
}

py::dict solution_dict(const BetheSolution& s) {
  py::dict d;
  d["l"] = s.rootset.sector.l();
  d["roots"] = s.rootset.roots;
  d["r"] = s.r;
  d["residual"] = s.residual_norm;
  d["converged"] = s.converged;
  d["iterations"] = s.iterations;
  return d;
}

py::dict point_dict(const ContinuationPoint& p) {
  py::dict d;
  d["N"] = p.N;
  d["lambda1_N"] = p.lambda1 * p.N;
  d["min_re"] = p.min_re;
  d["max_re"] = p.max_re;
  d["energy_per_spin"] = p.energy_per_spin;
  d["classical_energy"] = p.classical_energy;
  d["arc_rms"] = p.fit.rms;
  d["arc_spread"] = p.fit.spread;
  d["solution"] = solution_dict(p.solution);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elliptic Gaudin model: special functions, conserved charges and Bethe roots";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<EllipticContext>(m, "EllipticContext")
      .def_property_readonly("k", &EllipticContext::k)
      .def_property_readonly("K", &EllipticContext::K)
      .def_property_readonly("Kprime", &EllipticContext::Kprime)
      .def_property_readonly("q", &EllipticContext::q)
      .def_property_readonly("C", &EllipticContext::C)
      .def("__repr__", [](const EllipticContext& c) {
        return "EllipticContext(k=" + std::to_string(c.k()) + ")";
      });

  m.def("make_context", &make_context, py::arg("k"));

  m.def(
      "jacobi",
      [](Complex u, const EllipticContext& ctx) {
        const JacobiValues v = jacobi_elliptic(u, ctx);
        return py::make_tuple(v.sn, v.cn, v.dn);
      },
      py::arg("u"), py::arg("ctx"), "(sn, cn, dn) at complex u.");

  m.def(
      "phi",
      [](Complex u, const EllipticContext& ctx) {
        const PhiValues v = egaudin::phi(u, ctx);
        return py::make_tuple(v.phi1, v.phi4);
      },
      py::arg("u"), py::arg("ctx"), "(phi1, phi4) at complex u.");

  m.def(
      "couplings",
      [](double z, double k, const std::string& convention) {
        const Couplings c = egaudin::couplings(z, make_context(k), parse_convention(convention));
        return py::make_tuple(c.x, c.y, c.z);
      },
      py::arg("z"), py::arg("k"), py::arg("convention") = "modulus");

  m.def(
      "integral",
      [](const std::vector<std::pair<double, double>>& sites, std::size_t i, double k,
         const std::string& convention) {
        return build_integral(i, make_system(sites, k, convention)).entries;
      },
      py::arg("sites"), py::arg("i"), py::arg("k"), py::arg("convention") = "modulus",
      "Dense R_i for sites given as (spin, z) pairs.");

  m.def(
      "hamiltonian",
      [](const std::vector<std::pair<double, double>>& sites,
         const std::vector<std::pair<std::size_t, double>>& coeffs, double k) {
        const auto c = make_coefficients(coeffs);
        return build_hamiltonian(c, make_system(sites, k, "modulus")).entries;
      },
      py::arg("sites"), py::arg("coeffs"), py::arg("k"),
      "Dense H = sum c_i R_i with coeffs given as (site, value) pairs.");

  m.def(
      "enumerate_solutions",
      [](const std::vector<std::pair<double, double>>& sites, int l, double k,
         const std::vector<std::pair<std::size_t, double>>& coeffs, int budget,
         std::uint64_t seed) {
        const SpinSystem sys = make_system(sites, k, "modulus");
        EnumerationOptions opt;
        opt.budget = budget;
        opt.seed = seed;
        const Enumeration en = enumerate_solutions(sys, Sector{l}, opt);
        const auto c = make_coefficients(coeffs);
        py::list sols;
        for (const auto& s : en.solutions) {
          py::dict d = solution_dict(s);
          if (!c.empty()) d["energy"] = solution_energy(c, s);
          sols.append(d);
        }
        py::dict out;
        out["solutions"] = sols;
        out["expected"] = en.expected;
        out["complete"] = en.complete;
        out["warning"] = en.warning;
        return out;
      },
      py::arg("sites"), py::arg("l"), py::arg("k"),
      py::arg("coeffs") = std::vector<std::pair<std::size_t, double>>{},
      py::arg("budget") = 20000, py::arg("seed") = 1976);

  m.def(
      "acsm_continuation",
      [](std::vector<int> schedule, double a, double b, double k) {
        if (schedule.empty()) schedule = default_schedule();
        const ContinuationTrace trace = run_continuation(a, b, k, schedule);
        py::list points;
        for (const auto& p : trace.points) points.append(point_dict(p));
        py::dict out;
        out["points"] = points;
        if (trace.points.size() >= 4) {
          const TraceExtrapolation ex = extrapolate(trace);
          py::dict inf;
          inf["lambda1_N"] = ex.lambda1_scaled.limit;
          inf["min_re"] = ex.min_re.limit;
          inf["max_re"] = ex.max_re.limit;
          inf["energy_per_spin"] = ex.energy_per_spin.limit;
          out["extrapolated"] = inf;
        }
        return out;
      },
      py::arg("schedule") = std::vector<int>{}, py::arg("a") = 0.2, py::arg("b") = 0.6,
      py::arg("k") = 0.5, "Ground-state continuation over the schedule (default when empty).");

  m.def(
      "classical_limit",
      [](double a, double b, double k) { return classical_limit(AcsmParams{12, a, b, k}); },
      py::arg("a") = 0.2, py::arg("b") = 0.6, py::arg("k") = 0.5);

  m.def(
      "verify",
      [](const std::vector<std::string>& only, int points, int systems, std::uint64_t seed) {
        cli::VerifyOptions opt;
        opt.only = only;
        opt.random_points = points;
        opt.random_systems = systems;
        opt.seed = seed;
        const std::string text = cli::run_verification(opt).to_json().dump();
        return py::module_::import("json").attr("loads")(text);
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("points") = 1000,
      py::arg("systems") = 20, py::arg("seed") = 1976,
      "Runs the self-checks and returns the report as a dict.");
}
