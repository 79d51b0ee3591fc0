// pipeline.hpp
// End-to-end verification: condition check, operator identities, isometry
// extraction, and factorization, aggregated into one report.

#pragma once

#include "selftest/conditions.hpp"
#include "selftest/isometry.hpp"
#include "selftest/strategy.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace selftest {

struct SelfTestReport {
  FamilyParams params;
  CheckReport conditions;
  std::optional<CheckReport> identities;
  std::optional<CheckReport> measurement;
  double isometry_fidelity = 0.0;
  double isometry_residual = 0.0;
  Dims junk_dims;
  bool isometry_ran = false;
  double tol = 0.0;
  double fidelity_tol = 0.0;

  // The verification gate: conditions pass and the isometry recovers the
  // target within the fidelity tolerance.
  bool passed() const;
};

// Isometry and measurement checks run only when the condition set passes;
// a failing strategy is reported by its condition residuals.
SelfTestReport run_selftest(const Strategy& s, const FamilyParams& params, double tol,
                            double fidelity_tol);

nlohmann::json selftest_report_to_json(const SelfTestReport& r);
std::string selftest_report_to_csv(const SelfTestReport& r);

}  // namespace selftest
