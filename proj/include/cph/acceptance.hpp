#pragma once

// Acceptance checks shared by the `cph verify` command and the acceptance
// test binary. Every tolerance and time budget is fixed here.

#include <cstdint>
#include <string>
#include <vector>

namespace cph::acceptance {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

/// Reads CPH_SEED (default 0).
std::uint64_t seed_from_env();

CriterionResult incompleteness_and_bypass();
CriterionResult closed_form_residuals(std::uint64_t seed);
CriterionResult first_integral_conservation(std::uint64_t seed);
CriterionResult generic_oracle_agreement(std::uint64_t seed);
CriterionResult pole_localization();
CriterionResult exponential_boundary(std::uint64_t seed);
CriterionResult elliptic_kernel(std::uint64_t seed);
CriterionResult discreteness_evidence(std::uint64_t seed);
CriterionResult isometry_invariance(std::uint64_t seed);

std::vector<CriterionResult> run_all(std::uint64_t seed);

/// One line per criterion: "[PASS] 1 name (0.012 s): detail".
std::string format(const CriterionResult& r);

}  // namespace cph::acceptance
