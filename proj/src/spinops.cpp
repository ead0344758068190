#include "egaudin/spinops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace egaudin {

namespace {

bool is_valid_spin(double s) {
  const double twice = 2.0 * s;
  return s > 0.0 && std::abs(twice - std::round(twice)) < 1e-12 && twice <= 64.0;
}

int twice_spin(double s) { return static_cast<int>(std::lround(2.0 * s)); }

void check_dimension(const SpinSystem& system, const char* what) {
  if (system.dimension() > static_cast<double>(kMaxDimension)) {
    std::ostringstream os;
    os << what << ": product-basis dimension " << system.dimension() << " exceeds "
       << kMaxDimension;
    throw DomainError(os.str());
  }
}

// Product basis bookkeeping: strides and the local index s - m of every site.
struct Basis {
  std::vector<int> dims;
  std::vector<Eigen::Index> strides;
  Eigen::Index size = 1;

  explicit Basis(const SpinSystem& system) : dims(system.local_dimensions()) {
    strides.assign(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 0;) {
      strides[i] = size;
      size *= dims[i];
    }
  }

  int digit(Eigen::Index state, std::size_t site) const {
    return static_cast<int>((state / strides[site]) % dims[site]);
  }
};

// <m+1| S+ |m> with m = s - idx, i.e. the amplitude moving idx -> idx - 1.
double raise_amplitude(double s, int idx) {
  const double m = s - idx;
  return std::sqrt(std::max(0.0, s * (s + 1.0) - m * (m + 1.0)));
}

double lower_amplitude(double s, int idx) {
  const double m = s - idx;
  return std::sqrt(std::max(0.0, s * (s + 1.0) - m * (m - 1.0)));
}

// out += scale * [ Jx Sx_i Sx_j + Jy Sy_i Sy_j + Jz Sz_i Sz_j ], written through
//   (Jx - Jy)/4 (S+S+ + S-S-) + (Jx + Jy)/4 (S+S- + S-S+) + Jz Sz Sz.
void add_pair(CMatrix& out, const Basis& basis, const SpinSystem& system, std::size_t i,
              std::size_t j, const Couplings& c, double scale) {
  const double si = system.sites()[i].s;
  const double sj = system.sites()[j].s;
  const double anti = 0.25 * (c.x - c.y) * scale;
  const double same = 0.25 * (c.x + c.y) * scale;
  const double zz = c.z * scale;
  const int di = basis.dims[i];
  const int dj = basis.dims[j];
  const Eigen::Index stride_i = basis.strides[i];
  const Eigen::Index stride_j = basis.strides[j];
  for (Eigen::Index col = 0; col < basis.size; ++col) {
    const int a = basis.digit(col, i);
    const int b = basis.digit(col, j);
    out(col, col) += zz * (si - a) * (sj - b);
    const bool up_i = a > 0;
    const bool up_j = b > 0;
    const bool dn_i = a + 1 < di;
    const bool dn_j = b + 1 < dj;
    if (up_i && up_j && anti != 0.0) {
      out(col - stride_i - stride_j, col) += anti * raise_amplitude(si, a) * raise_amplitude(sj, b);
    }
    if (dn_i && dn_j && anti != 0.0) {
      out(col + stride_i + stride_j, col) += anti * lower_amplitude(si, a) * lower_amplitude(sj, b);
    }
    if (up_i && dn_j) {
      out(col - stride_i + stride_j, col) += same * raise_amplitude(si, a) * lower_amplitude(sj, b);
    }
    if (dn_i && up_j) {
      out(col + stride_i - stride_j, col) += same * lower_amplitude(si, a) * raise_amplitude(sj, b);
    }
  }
}

template <typename CouplingFn>
OperatorMatrix build_from_couplings(std::size_t i, const SpinSystem& system, CouplingFn&& fn,
                                    const char* what) {
  if (i >= system.size()) throw DomainError(std::string(what) + ": site index out of range");
  check_dimension(system, what);
  const Basis basis(system);
  CMatrix out = CMatrix::Zero(basis.size, basis.size);
  for (std::size_t j = 0; j < system.size(); ++j) {
    if (j == i) continue;
    add_pair(out, basis, system, i, j, fn(system.sites()[i].z - system.sites()[j].z), 1.0);
  }
  return make_operator(std::move(out));
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double commutator_max(const CMatrix& a, const CMatrix& b) {
  const CMatrix c = a * b - b * a;
  return max_abs(c);
}

OperatorMatrix make_operator(CMatrix m) {
  OperatorMatrix op;
  const double scale = std::max(1.0, max_abs(m));
  op.hermitian = hermiticity_defect(m) < 1e-12 * scale;
  op.entries = std::move(m);
  return op;
}

SpinMatrices spin_matrices(double s) {
  if (!is_valid_spin(s)) {
    std::ostringstream os;
    os << "spin_matrices: s = " << s << " is not a positive half-integer";
    throw DomainError(os.str());
  }
  const int d = twice_spin(s) + 1;
  SpinMatrices out;
  out.Sz = CMatrix::Zero(d, d);
  out.Splus = CMatrix::Zero(d, d);
  for (int idx = 0; idx < d; ++idx) {
    out.Sz(idx, idx) = s - idx;
    if (idx > 0) out.Splus(idx - 1, idx) = raise_amplitude(s, idx);
  }
  out.Sminus = out.Splus.adjoint();
  out.Sx = 0.5 * (out.Splus + out.Sminus);
  out.Sy = Complex{0.0, -0.5} * (out.Splus - out.Sminus);
  return out;
}

Couplings couplings(double z, const EllipticContext& ctx, CouplingConvention convention) {
  const JacobiValues j = jacobi_elliptic(Complex{z, 0.0}, ctx);
  const double sn = j.sn.real();
  if (std::abs(sn) < kPoleGuard) {
    std::ostringstream os;
    os << "couplings: sn(" << z << ") vanishes";
    throw PoleError(os.str(), Complex{z, 0.0});
  }
  const double factor = convention == CouplingConvention::Modulus ? ctx.k() : ctx.k() * ctx.k();
  const double sn2 = sn * sn;
  return {(1.0 + factor * sn2) / sn, (1.0 - factor * sn2) / sn, j.cn.real() * j.dn.real() / sn};
}

SpinSystem::SpinSystem(std::vector<SpinSite> sites, EllipticContext ctx,
                       CouplingConvention convention)
    : sites_(std::move(sites)), ctx_(ctx), convention_(convention) {
  if (sites_.size() < 2) throw DomainError("SpinSystem: at least two sites are required");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (!is_valid_spin(sites_[i].s)) {
      std::ostringstream os;
      os << "SpinSystem: site " << i << " has invalid spin " << sites_[i].s;
      throw DomainError(os.str());
    }
    if (!std::isfinite(sites_[i].z)) throw DomainError("SpinSystem: non-finite z");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(sites_[i].z - sites_[j].z) < kPoleGuard) {
        std::ostringstream os;
        os << "SpinSystem: sites " << j << " and " << i << " share z = " << sites_[i].z;
        throw DomainError(os.str());
      }
    }
    twice_total_ += twice_spin(sites_[i].s);
    dimension_ *= twice_spin(sites_[i].s) + 1;
  }
}

int SpinSystem::root_count() const {
  if (twice_total_ % 2 != 0) {
    throw DomainError("SpinSystem: total spin is not an integer, no Bethe root count");
  }
  return twice_total_ / 2;
}

std::vector<int> SpinSystem::local_dimensions() const {
  std::vector<int> out;
  out.reserve(sites_.size());
  for (const auto& site : sites_) out.push_back(twice_spin(site.s) + 1);
  return out;
}

OperatorMatrix build_integral(std::size_t i, const SpinSystem& system) {
  return build_from_couplings(
      i, system,
      [&](double dz) { return couplings(dz, system.ctx(), system.convention()); },
      "build_integral");
}

OperatorMatrix build_hamiltonian(std::span<const Coefficient> coeffs, const SpinSystem& system) {
  check_dimension(system, "build_hamiltonian");
  const Basis basis(system);
  CMatrix out = CMatrix::Zero(basis.size, basis.size);
  for (const auto& c : coeffs) {
    if (c.site >= system.size()) throw DomainError("build_hamiltonian: site index out of range");
    if (!std::isfinite(c.value)) throw DomainError("build_hamiltonian: non-finite coefficient");
    if (c.value == 0.0) continue;
    for (std::size_t j = 0; j < system.size(); ++j) {
      if (j == c.site) continue;
      const double dz = system.sites()[c.site].z - system.sites()[j].z;
      add_pair(out, basis, system, c.site, j,
               couplings(dz, system.ctx(), system.convention()), c.value);
    }
  }
  return make_operator(std::move(out));
}

Couplings pair_coupling(std::span<const Coefficient> coeffs, std::size_t i, std::size_t j,
                        const SpinSystem& system) {
  if (i >= system.size() || j >= system.size() || i == j) {
    throw DomainError("pair_coupling: invalid site pair");
  }
  Couplings total;
  for (const auto& c : coeffs) {
    std::size_t other;
    if (c.site == i) {
      other = j;
    } else if (c.site == j) {
      other = i;
    } else {
      continue;
    }
    const Couplings part = couplings(system.sites()[c.site].z - system.sites()[other].z,
                                     system.ctx(), system.convention());
    total.x += c.value * part.x;
    total.y += c.value * part.y;
    total.z += c.value * part.z;
  }
  return total;
}

std::vector<int> parity_signs(const SpinSystem& system) {
  check_dimension(system, "parity_signs");
  const Basis basis(system);
  std::vector<int> out(static_cast<std::size_t>(basis.size));
  for (Eigen::Index state = 0; state < basis.size; ++state) {
    int flips = 0;
    for (std::size_t site = 0; site < system.size(); ++site) flips += basis.digit(state, site);
    out[static_cast<std::size_t>(state)] = (flips % 2 == 0) ? 1 : -1;
  }
  return out;
}

OperatorMatrix parity_operator(const SpinSystem& system) {
  const std::vector<int> signs = parity_signs(system);
  CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(signs.size()),
                            static_cast<Eigen::Index>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = signs[i];
  }
  return make_operator(std::move(p));
}

ParityBlocks parity_split(const OperatorMatrix& op, const SpinSystem& system) {
  const std::vector<int> signs = parity_signs(system);
  if (op.dim() != static_cast<Eigen::Index>(signs.size())) {
    throw DomainError("parity_split: operator dimension does not match the system");
  }
  ParityBlocks blocks;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    (signs[i] > 0 ? blocks.even_basis : blocks.odd_basis).push_back(static_cast<Eigen::Index>(i));
  }
  // [op, P]_{ab} = op_{ab} (p_b - p_a): nonzero only across sectors.
  double mixing = 0.0;
  for (Eigen::Index a : blocks.even_basis) {
    for (Eigen::Index b : blocks.odd_basis) {
      mixing = std::max({mixing, std::abs(op.entries(a, b)), std::abs(op.entries(b, a))});
    }
  }
  const double commutator = 2.0 * mixing;
  if (commutator > 1e-10) {
    std::ostringstream os;
    os << "parity_split: operator does not commute with parity, ||[op, P]||_max = "
       << commutator;
    throw DomainError(os.str());
  }
  auto extract = [&](const std::vector<Eigen::Index>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    CMatrix block(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) block(r, c) = op.entries(idx[r], idx[c]);
    }
    return make_operator(std::move(block));
  };
  blocks.even_block = extract(blocks.even_basis);
  blocks.odd_block = extract(blocks.odd_basis);
  return blocks;
}

OperatorMatrix trigonometric_integral(std::size_t i, const SpinSystem& system) {
  return build_from_couplings(
      i, system,
      [](double dz) {
        const double s = std::sin(dz);
        return Couplings{1.0 / s, 1.0 / s, std::cos(dz) / s};
      },
      "trigonometric_integral");
}

OperatorMatrix hyperbolic_integral(std::size_t i, const SpinSystem& system) {
  return build_from_couplings(
      i, system,
      [](double dz) {
        const double eta = 2.0 * dz;
        return Couplings{1.0 / std::tanh(eta), 1.0 / std::sinh(eta), 1.0 / std::sinh(eta)};
      },
      "hyperbolic_integral");
}

}  // namespace egaudin
