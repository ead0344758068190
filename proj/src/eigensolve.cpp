#include "egaudin/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace egaudin {

namespace {

double inf_norm(const CMatrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

Spectrum dense_spectrum(const OperatorMatrix& op, const EigensolveOptions& options) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(
      op.entries, options.want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolve: dense Hermitian solver failed");
  }
  Spectrum out;
  out.full = true;
  const Eigen::VectorXd& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  if (options.want_vectors) {
    out.vectors = solver.eigenvectors();
    const double norm = std::max(inf_norm(op.entries), 1e-300);
    const CMatrix r = op.entries * *out.vectors - *out.vectors * ev.asDiagonal();
    out.max_residual = r.colwise().norm().maxCoeff() / norm;
  }
  return out;
}

Spectrum lanczos_lowest(const OperatorMatrix& op, const EigensolveOptions& options) {
  const Eigen::Index n = op.dim();
  const CMatrix& a = op.entries;
  const double norm = std::max(inf_norm(a), 1e-300);
  const int want = std::max(1, options.lowest_count);
  const Eigen::Index max_m = std::min<Eigen::Index>(options.max_krylov, n);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex{gauss(rng), gauss(rng)};
  v.normalize();

  CMatrix basis(n, max_m);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = v;
  double last_residual = 0.0;

  for (Eigen::Index j = 0; j < max_m; ++j) {
    Eigen::VectorXcd w = a * basis.col(j);
    alpha.push_back((basis.col(j).adjoint() * w)(0).real());
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd overlap = basis.leftCols(j + 1).adjoint() * w;
      w -= basis.leftCols(j + 1) * overlap;
    }
    const double b = w.norm();
    const auto m = static_cast<Eigen::Index>(alpha.size());
    const bool exhausted = b < 1e-13 * norm || m == max_m;
    const bool check = exhausted || (m >= want && (m % 8 == 0));
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
      for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::Index count = std::min<Eigen::Index>(want, m);
      double worst = 0.0;
      for (Eigen::Index k = 0; k < count; ++k) {
        worst = std::max(worst, std::abs(b * tri.eigenvectors()(m - 1, k)) / norm);
      }
      last_residual = worst;
      if (worst < options.tolerance || b < 1e-13 * norm) {
        Spectrum out;
        out.full = (b < 1e-13 * norm) && m == n;
        out.values.assign(tri.eigenvalues().data(), tri.eigenvalues().data() + count);
        out.max_residual = worst;
        if (options.want_vectors) {
          out.vectors = basis.leftCols(m) * tri.eigenvectors().leftCols(count).cast<Complex>();
        }
        return out;
      }
      if (m == max_m) break;
    }
    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }
  std::ostringstream os;
  os << "eigensolve: Lanczos did not converge in " << max_m
     << " steps (relative residual " << last_residual << ")";
  throw NumericalError(os.str());
}

}  // namespace

Spectrum eigensolve(const OperatorMatrix& op, const EigensolveOptions& options) {
  if (!op.hermitian) throw DomainError("eigensolve: operator is not flagged Hermitian");
  if (op.dim() == 0) return Spectrum{{}, std::nullopt, true, 0.0};
  if (op.dim() > static_cast<Eigen::Index>(kMaxDimension)) {
    throw DomainError("eigensolve: dimension exceeds the dense memory budget");
  }
  if (op.dim() <= kDenseEigenLimit) return dense_spectrum(op, options);
  return lanczos_lowest(op, options);
}

}  // namespace egaudin
