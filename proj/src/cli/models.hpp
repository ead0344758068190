#ifndef EGAUDIN_CLI_MODELS_HPP
#define EGAUDIN_CLI_MODELS_HPP

#include <vector>

#include "egaudin/spinops.hpp"

namespace egaudin::cli {

// Default three-spin example: spins 1/2, 1, 3/2 at z = 0, 0.2, 0.4, k = 1/2,
// H = -R_1 / 2 - R_2 / 4.
inline constexpr double kThreeSpinK = 0.5;

inline std::vector<SpinSite> three_spin_sites() { return {{0.5, 0.0}, {1.0, 0.2}, {1.5, 0.4}}; }

inline std::vector<Coefficient> three_spin_coefficients() { return {{0, -0.5}, {1, -0.25}}; }

inline SpinSystem three_spin_system(CouplingConvention convention = CouplingConvention::Modulus) {
  return SpinSystem(three_spin_sites(), make_context(kThreeSpinK), convention);
}

}  // namespace egaudin::cli

#endif  // EGAUDIN_CLI_MODELS_HPP
