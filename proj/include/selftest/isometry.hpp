// isometry.hpp
// The local isometries that certify junk ⊗ target factorization: the qubit
// SWAP circuit (one qubit ancilla per party) and the qudit construction with
// Fourier ancilla registers, plus the operator extraction feeding them.

#pragma once

#include "selftest/conditions.hpp"
#include "selftest/strategy.hpp"

#include <vector>

namespace selftest {

// Per-party Hermitian unitaries driving the SWAP circuit.
struct PartyZX {
  Matrix z;
  Matrix x;
};

// Parties < n-1 contribute their setting-0/1 observables verbatim; the last
// party goes through the regularized extraction at angle mu.
std::vector<PartyZX> strategy_swap_operators(const Strategy& s, double mu);

// sum_tau X^tau Z^(tau) |v> ⊗ |tau>, one qubit ancilla per party appended
// after the original registers.
Vector apply_qubit_swap_isometry(const std::vector<PartyZX>& ops, const Dims& dims,
                                 const Vector& v);
StateVector qubit_swap_isometry(const std::vector<PartyZX>& ops, const StateVector& psi);

// Inputs of the qudit isometry: complete orthogonal projector sets for
// parties < n-1 (the last party's set may be incomplete; the completion term
// enters its clock operator) and the unitary chains X^{(k)} with chain 0 = I.
struct QuditIsometryOperators {
  int d = 0;
  std::vector<std::vector<Matrix>> projectors;
  std::vector<std::vector<Matrix>> chains;
};

Vector apply_qudit_isometry(const QuditIsometryOperators& ops, const Dims& dims, const Vector& v);
StateVector qudit_isometry(const QuditIsometryOperators& ops, const StateVector& psi);

// Builds the projector sets and X-chains from a strategy reproducing the
// ideal Schmidt correlation (checked first at tol).
QuditIsometryOperators extract_schmidt_operators(const Strategy& s, const SchmidtCoefficients& c,
                                                 double tol = 1e-8);

// Residuals of the projector-match and chain-descent conditions the qudit
// isometry construction rests on.
CheckReport schmidt_operator_identities(const Strategy& s, const QuditIsometryOperators& ops,
                                        const SchmidtCoefficients& c, double tol);

struct FactorizationReport {
  double target_fidelity = 0.0;
  StateVector junk_state;       // empty on the degenerate (zero-overlap) case
  double residual_norm = 0.0;
  bool degenerate = false;
};

// Fidelity of the reduced state on target_registers with |target><target|,
// the extracted junk vector on the complementary registers, and the norm
// residual ||output - junk ⊗ target||.
FactorizationReport factorization_check(const StateVector& output, const StateVector& target,
                                        const std::vector<int>& target_registers);

// ||Phi(M|psi>) - junk ⊗ M~|target>|| for every party and setting of the
// qubit-path families (GHZ, W, Dicke, Graph).
CheckReport measurement_selftest_check(const Strategy& s, const FamilyParams& params, double tol);

// Reference target state and the SWAP extraction angle per family.
StateVector family_target_state(const FamilyParams& params);
double family_swap_angle(const FamilyParams& params);

}  // namespace selftest
