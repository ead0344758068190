#ifndef EGAUDIN_ACSM_HPP
#define EGAUDIN_ACSM_HPP

// Anisotropic central spin model H = -R_1: a central spin 1/2 at z_1 = 0
// coupled to N - 1 bath spins 1/2 on the uniform grid
//   z_i = a + (i - 2)/(N - 2) (b - a),  i = 2..N.
// Ground states are followed from small N to large N by fitting the arc of
// complex Bethe roots and rescaling the real root next to the central spin.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "egaudin/bethe.hpp"

namespace egaudin {

struct AcsmParams {
  int N = 12;
  double a = 0.2;
  double b = 0.6;
  double k = 0.5;
};

/// Throws DomainError unless N >= 3, 0 < a < b <= K(k) and 0 < k < 1.
void validate(const AcsmParams& params);

/// z_1 = 0 followed by the bath grid.
std::vector<double> acsm_grid(const AcsmParams& params);

struct AcsmModel {
  SpinSystem system;
  std::optional<OperatorMatrix> hamiltonian;  // -R_1, when requested
};

/// Builds the spin system and, when with_hamiltonian is set, the dense -R_1.
AcsmModel build_acsm(const AcsmParams& params, bool with_hamiltonian = false);

/// -R_1 restricted to the parity block holding the l = 0 Bethe states.
OperatorMatrix acsm_ground_block(const AcsmModel& model);

/// Minimal classical energy per spin, -(1/4N) sum_j Jx(z_j).
double classical_energy(const AcsmParams& params);

struct SpinAngles {
  double theta = 0.0;
  double phi = 0.0;
};

/// Classical energy of a vector-spin configuration (one entry per site, central spin first).
double classical_configuration_energy(const AcsmParams& params, std::span<const SpinAngles> angles);

enum class Axis { X, Y, Z };

/// Antiparallel configuration along one axis: central spin against the bath.
std::vector<SpinAngles> antiparallel_configuration(int n, Axis axis);

/// Closed-form N -> infinity classical energy density for the uniform bath on [a, b].
double classical_limit(const AcsmParams& params);

/// Closed-form integral of (1 + k sn^2)/sn over [a, b]:
///   log[ sn(b)(cn(a)+dn(a))(dn(b)-k cn(b)) / (sn(a)(cn(b)+dn(b))(dn(a)-k cn(a))) ].
double coupling_integral(double a, double b, const EllipticContext& ctx);

/// Real-valued Jacobi sn, cn, dn at real argument.
struct RealJacobi {
  double sn, cn, dn;
};
RealJacobi jacobi_real(double u, const EllipticContext& ctx);

struct SeedOptions {
  int budget = 96;
  std::uint64_t seed = 1976;
  NewtonOptions newton;
};

/// True when the roots show the ground-state pattern: root 0 real in (0, a),
/// every other root with Re > b, closed under conjugation.
bool has_ground_state_pattern(const RootSet& rootset, const AcsmParams& params,
                              double tolerance = 1e-7);

/// Lowest-energy l = 0 solution with the ground-state pattern, for N <= 16.
/// Roots are returned as [lambda_1, arc roots by ascending Im].
BetheSolution ground_state_seed(const AcsmParams& params, const SeedOptions& options = {});

/// x = alpha + beta dn(c1 y) cn(c2 y), with y = Im(lambda) the independent variable.
struct ArcFit {
  double alpha = 0.0;
  double beta = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double rms = 0.0;       // root mean square of x - model
  double spread = 0.0;    // max Re - min Re over the arc
  bool vertical = false;  // fell back to x = mean
  int iterations = 0;

  /// rms below 1e-5 of the spread.
  bool accepted() const { return rms <= 1e-5 * spread; }
};

double arc_curve(const ArcFit& fit, double y, const EllipticContext& ctx);

/// Gauss-Newton fit to the arc roots (every root but the first). Throws
/// NumericalError when fewer than 4 arc roots are given or the fit diverges.
ArcFit arc_fit(std::span<const Complex> arc, const EllipticContext& ctx);

/// Same, taking the arc from a ground-state solution.
ArcFit arc_fit(const BetheSolution& solution, const EllipticContext& ctx);

/// arc_fit with the vertical-line fallback x = mean(Re) on failure.
ArcFit arc_fit_or_vertical(std::span<const Complex> arc, const EllipticContext& ctx);

struct ContinuationPoint {
  int N = 0;
  BetheSolution solution;
  ArcFit fit;
  double energy_per_spin = 0.0;  // -r_1 / N
  double lambda1 = 0.0;
  double min_re = 0.0;           // arc roots only
  double max_re = 0.0;
  double classical_energy = 0.0;
};

struct ContinuationTrace {
  double a = 0.2;
  double b = 0.6;
  double k = 0.5;
  std::vector<ContinuationPoint> points;
};

struct ContinuationOptions {
  NewtonOptions newton;
  int max_bisection_depth = 3;
};

/// Seeds a trace at params.N with ground_state_seed.
ContinuationTrace start_continuation(const AcsmParams& params, const SeedOptions& seed = {},
                                     const ContinuationOptions& options = {});

/// Extends the trace to n_next (no-op when n_next equals the last N). Failed
/// Newton solves are retried through intermediate sizes up to
/// options.max_bisection_depth levels before throwing NumericalError.
void continuation_step(ContinuationTrace& trace, int n_next,
                       const ContinuationOptions& options = {});

/// Initial guess for size n_next built from the last point of the trace.
std::vector<Complex> continuation_guess(const ContinuationPoint& last, int n_next,
                                        const EllipticContext& ctx);

/// Seeds at schedule.front() and continues through the rest.
ContinuationTrace run_continuation(double a, double b, double k, std::span<const int> schedule,
                                   const SeedOptions& seed = {},
                                   const ContinuationOptions& options = {});

/// Default schedule N = 12, 20, 40, 80, 100, 200, 300.
std::vector<int> default_schedule();

struct ExtrapolationResult {
  double limit = 0.0;
  std::vector<double> coefficients;  // ascending powers of 1/N
  std::vector<double> residuals;
};

/// Least-squares polynomial of the given degree in 1/N; limit = constant term.
/// Throws DomainError with fewer than degree + 1 (and fewer than 4) points.
ExtrapolationResult extrapolate(std::span<const double> n, std::span<const double> values,
                                int degree = 3);

struct TraceExtrapolation {
  ExtrapolationResult energy_per_spin;
  ExtrapolationResult lambda1_scaled;  // lambda_1 N
  ExtrapolationResult min_re;
  ExtrapolationResult max_re;
  ExtrapolationResult classical_energy;
};

TraceExtrapolation extrapolate(const ContinuationTrace& trace, int degree = 3);

}  // namespace egaudin

#endif  // EGAUDIN_ACSM_HPP
