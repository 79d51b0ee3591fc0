// correlations.hpp
// Correlation data of a strategy: full probability tables, correlators built
// from per-party operator roles, tilted-CHSH values (plain and projected),
// table export, and the block-structure validation for Schmidt strategies.

#pragma once

#include "selftest/strategy.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace selftest {

struct QuestionTuple {
  std::vector<int> x;  // one setting index per party
};

struct CorrelationTable {
  QuestionTuple question;
  std::vector<int> outcome_counts;  // per party
  std::vector<double> probs;        // flat, party 0 most significant

  long n_entries() const { return static_cast<long>(probs.size()); }
  double at(const std::vector<int>& outcomes) const;
};

struct PartyRole {
  enum class Kind { Identity, Observable, Projector };
  Kind kind = Kind::Identity;
  int setting = 0;
  int outcome = 0;
};

PartyRole identity_role();
PartyRole observable_role(int setting);
PartyRole projector_role(int setting, int outcome);

// One product operator ⊗_p role_p with a scalar coefficient.
struct CorrelatorTerm {
  double coeff = 1.0;
  std::vector<PartyRole> roles;  // one per party
};

// A checkable condition: sum of product terms compared against a target.
struct CorrelatorSpec {
  std::string label;
  double target = 0.0;
  std::vector<CorrelatorTerm> terms;
};

// T_x(a) = <psi| ⊗_p M^{a_p}_{x_p} |psi>, or its white-noise trace form.
CorrelationTable probability_table(const Strategy& s, const QuestionTuple& q);

double correlator(const Strategy& s, const CorrelatorTerm& term);
double correlator(const Strategy& s, const CorrelatorSpec& spec);

// Optional relabellings A_1 -> -A_1 / B_1 -> -B_1 of the Bell expression.
struct ChshSigns {
  bool flip_a1 = false;
  bool flip_b1 = false;
};

// alpha<A0> + <A0 B0> + <A0 B1> + <A1 B0> - <A1 B1> on settings {0,1}.
double tilted_chsh_value(const Strategy& s, int party_a, int party_b, double alpha,
                         ChshSigns signs = {});

struct OutcomeProjection {
  int party;
  int setting;
  int outcome;
};

// Unnormalized projected Bell value <psi| Π P ⊗ (tilted operator) |psi>.
double conditional_chsh(const Strategy& s, const std::vector<OutcomeProjection>& projections,
                        int party_a, int party_b, double alpha, ChshSigns signs = {});

// 17-significant-digit CSV: one header row of outcome tuples, one row per question.
std::string tables_to_csv(const std::vector<CorrelationTable>& tables);
nlohmann::json tables_to_json(const std::vector<CorrelationTable>& tables);

struct BlockResidual {
  std::string label;
  double residual;
};

struct BlockStructureReport {
  std::vector<BlockResidual> entries;
  double max_residual = 0.0;
  double tol = 0.0;
  bool passed = false;
};

// Question sets the block check consumes: x in {0,1}^n, and the shifted set
// x_i in {0,2} for i < n-1 with x_{n-1} in {2,3}.
std::vector<QuestionTuple> schmidt_plain_questions(int n);
std::vector<QuestionTuple> schmidt_shifted_questions(int n);

// Verifies both block-diagonal structures of the ideal Schmidt correlation:
// off-block entries vanish and each block is the weighted reference table of
// a partially entangled GHZ strategy at the block angle. Failures are
// reported, not thrown.
BlockStructureReport block_structure_check(const std::map<std::vector<int>, CorrelationTable>& tables,
                                           const SchmidtCoefficients& c, double tol);

}  // namespace selftest
