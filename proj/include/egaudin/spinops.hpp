#ifndef EGAUDIN_SPINOPS_HPP
#define EGAUDIN_SPINOPS_HPP

// Spin operators on the product basis and the commuting integrals of motion
//
//   R_i = sum_{j != i} Jx(z_i - z_j) Sx_i Sx_j + Jy(..) Sy_i Sy_j + Jz(..) Sz_i Sz_j
//
// Basis ordering: site 0 is the most significant digit (Kronecker order) and
// the local index of site i is s_i - m_i, so index 0 is the stretched state
// m_i = s_i.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "egaudin/elliptic.hpp"

namespace egaudin {

using CMatrix = Eigen::MatrixXcd;

/// Largest product-basis dimension for which dense matrices are built.
inline constexpr std::size_t kMaxDimension = 4096;

/// Dense matrix of an operator in the product spin basis.
struct OperatorMatrix {
  CMatrix entries;
  bool hermitian = false;

  Eigen::Index dim() const { return entries.rows(); }
};

/// max |A - A^dagger| over entries.
double hermiticity_defect(const CMatrix& m);

/// Wraps a matrix and sets the hermitian flag when the defect is below 1e-12
/// relative to the largest entry.
OperatorMatrix make_operator(CMatrix m);

struct SpinMatrices {
  CMatrix Sx, Sy, Sz, Splus, Sminus;
};

/// Spin-s representation in the basis m = s, s-1, ..., -s. Requires 2s a positive integer.
SpinMatrices spin_matrices(double s);

/// Which modulus factor enters the x/y couplings. `Modulus` is the convention
/// (1 +- k sn^2)/sn under which the integrals commute; `ModulusSquared` uses k^2
/// instead and exists as a negative control.
enum class CouplingConvention { Modulus, ModulusSquared };

struct Couplings {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Jx = (1 + k sn^2)/sn, Jy = (1 - k sn^2)/sn, Jz = cn dn / sn at argument z.
/// Throws PoleError when sn(z) vanishes or is singular.
Couplings couplings(double z, const EllipticContext& ctx,
                    CouplingConvention convention = CouplingConvention::Modulus);

struct SpinSite {
  double s = 0.5;
  double z = 0.0;
};

/// N sites with spins and inhomogeneities sharing one elliptic modulus.
class SpinSystem {
 public:
  /// Throws DomainError for invalid spins, fewer than two sites or repeated z.
  SpinSystem(std::vector<SpinSite> sites, EllipticContext ctx,
             CouplingConvention convention = CouplingConvention::Modulus);

  const std::vector<SpinSite>& sites() const { return sites_; }
  const EllipticContext& ctx() const { return ctx_; }
  CouplingConvention convention() const { return convention_; }
  std::size_t size() const { return sites_.size(); }

  /// Twice the sum of spins.
  int twice_total_spin() const { return twice_total_; }

  /// M = sum s_i; throws DomainError when the sum is not an integer.
  int root_count() const;

  /// prod (2 s_i + 1); saturates for systems that are too large to enumerate.
  double dimension() const { return dimension_; }

  /// 2 s_i + 1 for every site.
  std::vector<int> local_dimensions() const;

 private:
  std::vector<SpinSite> sites_;
  EllipticContext ctx_;
  CouplingConvention convention_;
  int twice_total_ = 0;
  double dimension_ = 1.0;
};

/// R_i in the product basis. Throws DomainError when the dimension exceeds kMaxDimension.
OperatorMatrix build_integral(std::size_t i, const SpinSystem& system);

struct Coefficient {
  std::size_t site = 0;
  double value = 0.0;
};

/// H = sum c_i R_i.
OperatorMatrix build_hamiltonian(std::span<const Coefficient> coeffs, const SpinSystem& system);

/// Coefficient of S^a_i S^a_j (i < j) in H = sum c_i R_i, for a in {x, y, z}.
Couplings pair_coupling(std::span<const Coefficient> coeffs, std::size_t i, std::size_t j,
                        const SpinSystem& system);

/// Parity eigenvalue (+1 / -1) of every product basis state, prod (-1)^(s_i - m_i).
std::vector<int> parity_signs(const SpinSystem& system);

/// Diagonal parity operator.
OperatorMatrix parity_operator(const SpinSystem& system);

struct ParityBlocks {
  std::vector<Eigen::Index> even_basis;
  std::vector<Eigen::Index> odd_basis;
  OperatorMatrix even_block;
  OperatorMatrix odd_block;
};

/// Splits an operator commuting with the parity into its two blocks. Throws
/// DomainError (quoting ||[op, P]||_max) when the commutator exceeds 1e-10.
ParityBlocks parity_split(const OperatorMatrix& op, const SpinSystem& system);

/// Trigonometric integral sum_j [ (1/sin) (Sx Sx + Sy Sy) + cot Sz Sz ], the k -> 0 form.
OperatorMatrix trigonometric_integral(std::size_t i, const SpinSystem& system);

/// Hyperbolic Gaudin integral with eta_j = 2 z_j, written with its anisotropy
/// axis along x:  sum_j [ coth(eta_i - eta_j) Sx Sx + (Sy Sy + Sz Sz) / sinh(eta_i - eta_j) ].
/// As k -> 1 the elliptic R_i tends to twice this operator, since
/// (1 + tanh^2 z) / tanh z = 2 coth 2z and sech^2 z / tanh z = 2 / sinh 2z.
OperatorMatrix hyperbolic_integral(std::size_t i, const SpinSystem& system);

/// max |[A, B]| over entries.
double commutator_max(const CMatrix& a, const CMatrix& b);

/// max |A| over entries.
double max_abs(const CMatrix& a);

}  // namespace egaudin

#endif  // EGAUDIN_SPINOPS_HPP
