// Acceptance suite runner: one pass/fail line per criterion.

#include <cstdio>
#include <cstdlib>

#include "ars2d/acceptance.hpp"

int main() {
  const char* env = std::getenv("ARS_TOL");
  double tol = 1e-10;
  if (env) tol = std::atof(env);
  const auto results = ars2d::run_acceptance(tol);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d: %s — %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
