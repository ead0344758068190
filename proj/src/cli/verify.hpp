#ifndef EGAUDIN_CLI_VERIFY_HPP
#define EGAUDIN_CLI_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "egaudin/spinops.hpp"

namespace egaudin::cli {

struct VerifyOptions {
  std::vector<std::string> only;  // empty = default set
  std::uint64_t seed = 1976;
  int random_points = 1000;
  int random_systems = 20;
  // Test hook: build every spin system with this convention. ModulusSquared
  // is the wrong one and must make the commutator check fail.
  CouplingConvention convention = CouplingConvention::Modulus;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;     // worst observed deviation (or ratio, see detail)
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  const CheckResult* first_failure() const;
  nlohmann::ordered_json to_json() const;
};

/// Names accepted by --only, in run order. The last one ("acsm-ed") is not
/// part of the default set because it diagonalizes a 4096-dimensional matrix.
const std::vector<std::string>& check_names();
const std::vector<std::string>& default_check_names();

/// Runs the selected checks. Throws DomainError for unknown names.
VerifyReport run_verification(const VerifyOptions& options);

// Individual checks, exposed for the test suites.
CheckResult check_identities(const VerifyOptions& options);
CheckResult check_commutators(const VerifyOptions& options);
CheckResult check_limits(const VerifyOptions& options);
CheckResult check_bethe_ed(const VerifyOptions& options);
CheckResult check_root_patterns(const VerifyOptions& options);
CheckResult check_degeneration(const VerifyOptions& options);
CheckResult check_acsm_ed(const VerifyOptions& options);

/// Largest spectral deviation between the triplet-compressed integral of the
/// third site (two spin-1/2 sites at z and z + eps) and the same integral with
/// the pair replaced by one spin-1 site at z.
double degeneration_error(double eps, double k = 0.5, double z = 0.2, double z_third = 0.5,
                          double s_third = 0.5);

}  // namespace egaudin::cli

#endif  // EGAUDIN_CLI_VERIFY_HPP
