// conditions.hpp
// Self-testing condition sets for each state family, plus the operator
// identities the extraction arguments rest on. Generators are deterministic;
// checking is pure and parallel across specs.

#pragma once

#include "selftest/correlations.hpp"
#include "selftest/strategy.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace selftest {

struct ConditionSet {
  Family family;
  std::string params;  // human-readable parameter summary
  std::vector<CorrelatorSpec> specs;
};

struct ResidualEntry {
  std::string label;
  double residual;
};

struct CheckReport {
  std::vector<ResidualEntry> residuals;
  double max_residual = 0.0;
  double tol = 0.0;
  bool passed = true;

  void add(std::string label, double residual);
  void finalize(double tolerance);
};

// Marginal/pair specs, the sigma_x-prefix pattern specs, and the projected
// tilted-CHSH specs, one per outcome pattern of the first n-2 parties.
ConditionSet ghz_conditions(int n, double theta);

// Per party i < n: projected weight 2/n, projected CHSH 4*sqrt(2)/n, and the
// two 1/n marginal/pattern specs.
ConditionSet w_conditions(int n);

// Projected (and sign-transformed) W conditions for every (n-1-k)-subset of
// the first n-1 parties, plus the zero-target pattern specs. Requires
// floor(n/2) <= k <= n-1; smaller k is covered by the bit-flip equivalence.
ConditionSet dicke_conditions(int n, int k);

// Requires vertices labeled so n-2 and n-1 are adjacent and n-1 has minimal
// degree (relabel_for_selftest provides the labeling).
ConditionSet graph_conditions(const Graph& g);

CheckReport check(const Strategy& s, const ConditionSet& conditions, double tol);

// Vector-norm residuals of the operator identities each theorem concludes.
CheckReport ghz_operator_identities(const Strategy& s, double theta, double tol);
// Two-party version: Z_A|psi> = Z_B|psi> and the cos/sin exchange identity.
CheckReport tilted_identities(const Strategy& s, double theta, double tol);
CheckReport w_operator_identities(const Strategy& s, double tol);
CheckReport graph_anticommutation_check(const Strategy& s, const Graph& g, double tol);

// Computes the block-structure tables from the strategy and delegates to
// block_structure_check.
CheckReport schmidt_condition_check(const Strategy& s, const SchmidtCoefficients& c, double tol);

// Dispatches to the family's condition set (n=2 GHZ uses the bare tilted
// maximum, which is the whole two-party self-test).
CheckReport family_condition_check(const Strategy& s, const FamilyParams& params, double tol);

nlohmann::json condition_set_to_json(const ConditionSet& cs);
nlohmann::json check_report_to_json(const CheckReport& report);

}  // namespace selftest
