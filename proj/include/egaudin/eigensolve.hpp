#ifndef EGAUDIN_EIGENSOLVE_HPP
#define EGAUDIN_EIGENSOLVE_HPP

#include <optional>
#include <vector>

#include "egaudin/spinops.hpp"

namespace egaudin {

/// Dimension up to which the full spectrum is computed densely.
inline constexpr Eigen::Index kDenseEigenLimit = 1024;

struct EigensolveOptions {
  bool want_vectors = false;
  // Number of lowest eigenvalues requested from the Lanczos path (dim > kDenseEigenLimit).
  int lowest_count = 1;
  int max_krylov = 400;
  // Residual target relative to the matrix norm.
  double tolerance = 1e-10;
  unsigned long long seed = 0x5eed;
};

struct Spectrum {
  std::vector<double> values;        // ascending
  std::optional<CMatrix> vectors;    // columns match values
  bool full = false;                 // every eigenvalue present
  double max_residual = 0.0;         // ||A v - e v|| / ||A|| over returned pairs
};

/// Hermitian eigensolver: full dense spectrum for dim <= 1024, lowest
/// eigenvalues by Lanczos with full reorthogonalization up to kMaxDimension.
/// Exactly degenerate levels are reported once on the Lanczos path.
Spectrum eigensolve(const OperatorMatrix& op, const EigensolveOptions& options = {});

}  // namespace egaudin

#endif  // EGAUDIN_EIGENSOLVE_HPP
