#ifndef EGAUDIN_BETHE_HPP
#define EGAUDIN_BETHE_HPP

// Bethe equations of the elliptic Gaudin model for arbitrary spins
//
//   F_a = sum_j s_j phi(l_a - z_j) - sum_{b != a} phi(l_a - l_b) + i pi l / (2K) = 0
//   r_i = s_i [ sum_{j != i} s_j phi(z_i - z_j) - sum_a phi(z_i - l_a) + i pi l / (2K) ]
//
// with phi = phi1 + phi4, M = sum_i s_i roots and parity sector l in {0, 1}.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egaudin/spinops.hpp"

namespace egaudin {

/// Parity sector label l in {0, 1}.
class Sector {
 public:
  explicit Sector(int l);
  int l() const { return l_; }
  bool operator==(const Sector&) const = default;

 private:
  int l_;
};

/// Parity eigenvalue of the states described by sector l: (-1)^(M + l), with
/// the stretched state at parity +1.
int sector_parity(Sector sector, int root_count);

struct RootSet {
  Sector sector{0};
  std::vector<Complex> roots;
};

struct BetheSolution {
  RootSet rootset;
  double residual_norm = 0.0;     // max_a |F_a|
  std::vector<Complex> r;         // eigenvalues of the integrals, filled when converged
  bool converged = false;
  int iterations = 0;
  int imaginary_folds = 0;        // restarts caused by imaginary folding
  std::vector<double> residual_history;
};

/// Relative slack on |Im| = K'/2 under which a root still counts as inside the rectangle.
inline constexpr double kBoundarySlack = 1e-9;

/// Bethe residual vector. Throws PoleError naming the (a, j) or (a, b) pair
/// that violates the pole guard.
Eigen::VectorXcd residual(const RootSet& rootset, const SpinSystem& system);

/// Analytic Jacobian dF_a / d l_b.
Eigen::MatrixXcd jacobian(const RootSet& rootset, const SpinSystem& system);

struct NewtonOptions {
  double tolerance = 1e-11;
  int max_iterations = 200;
  int min_damping_exponent = 20;  // step factor floor 2^-20
  int max_fold_restarts = 3;
};

/// Damped Newton with step halving on ||F||_2. Real parts are reduced mod 2K
/// after every accepted step; a converged point with a root beyond |Im| = K'/2
/// is folded by the imaginary quasi-period and re-solved from there. Returns
/// converged = false on the iteration cap or a stalled line search. Throws
/// PoleError when the start point violates a guard or every damped step hits one.
BetheSolution newton_solve(const RootSet& initial, const SpinSystem& system,
                           const NewtonOptions& options = {});

struct FoldResult {
  RootSet rootset;
  std::vector<std::size_t> imaginary_folds;  // indices shifted by a multiple of iK'
};

/// Reduces Re into [0, 2K) and brings |Im| <= K'/2 by shifts of iK'. The
/// boundary |Im| = K'/2 is inclusive.
FoldResult fold_fundamental(const RootSet& rootset, const EllipticContext& ctx);

/// True when every root lies in [0, 2K) x [-K'/2, K'/2] (with kBoundarySlack).
bool inside_fundamental(const RootSet& rootset, const EllipticContext& ctx);

/// r_i of every site, complex.
std::vector<Complex> eigenvalues_complex(const RootSet& rootset, const SpinSystem& system);

/// r_i with imaginary parts below 1e-8 dropped; throws NumericalError otherwise.
std::vector<double> eigenvalues(const RootSet& rootset, const SpinSystem& system);

/// sum_i c_i r_i (real part).
double solution_energy(std::span<const Coefficient> coeffs, const BetheSolution& solution);

struct EnumerationOptions {
  int budget = 20000;
  std::uint64_t seed = 1976;
  NewtonOptions newton;
  double dedup_tolerance = 1e-6;
};

struct Enumeration {
  std::vector<BetheSolution> solutions;  // ascending in Re r of the first site
  std::size_t expected = 0;              // dimension of the matching parity block
  int attempts = 0;
  bool complete = false;
  std::string warning;                   // set when fewer than expected were found
};

/// Multi-start search for every solution in one sector of a small system.
Enumeration enumerate_solutions(const SpinSystem& system, Sector sector,
                                const EnumerationOptions& options = {});

/// True when two converged solutions describe the same state (root multisets
/// equal up to the real period, the +-K'/2 boundary identification, and for
/// l = 0 complex conjugation).
bool same_solution(const RootSet& a, const RootSet& b, const EllipticContext& ctx,
                   double tolerance);

}  // namespace egaudin

#endif  // EGAUDIN_BETHE_HPP
