#pragma once

// The oracle registry behind `lagfsi verify`: every derived quantity that
// feeds the solver (quadrature, element matrices, coefficient derivatives,
// sparse solves, eigenmodes) is cross-checked against its independent route
// from oracles.hpp. One machine-parseable line per check; the registry
// itself is checked for completeness, so a missing oracle is a failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace lagfsi {

struct OracleCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;   // the discrepancy that was measured
  double tolerance = 0.0;  // the bound it must satisfy
  std::string detail;
};

struct VerifyReport {
  std::vector<OracleCheck> checks;
  bool all_passed = false;
};

/// Names every check below must register; completeness is itself a check.
const std::vector<std::string>& required_oracle_names();

/// Runs the whole registry. Lines look like
///   oracle <name>: PASS measured=<v> tol=<t>
VerifyReport run_verification(std::ostream& os);

}  // namespace lagfsi
