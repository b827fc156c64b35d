// ars2d - acceptance suite: one check per release criterion, each pinned to
// its stated tolerance.  Used by the `verify` CLI command and by the
// acceptance test binary.

#ifndef ARS2D_ACCEPTANCE_HPP
#define ARS2D_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace ars2d {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, one line
  double seconds = 0.0;
};

/// Run the full suite.  tol is the baseline integrator tolerance; individual
/// criteria use tighter internal tolerances where their bounds require it.
std::vector<CriterionResult> run_acceptance(double tol = 1e-10);

std::string acceptance_report_json(const std::vector<CriterionResult>& results);

}  // namespace ars2d

#endif
