// observables.hpp
// Ideal measurement families (tilted pairs, direct-sum block bases, Pauli
// settings) and the regularized-operator extraction used by every self-test.

#pragma once

#include "selftest/linalg.hpp"
#include "selftest/states.hpp"

#include <utility>
#include <vector>

namespace selftest {

// Hermitian operator with spectrum in {-1, +1}; M^2 = I within 1e-10.
struct BinaryObservable {
  Matrix matrix;

  explicit BinaryObservable(Matrix m);
  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Complete projective measurement: idempotent, pairwise orthogonal outcomes
// summing to the identity.
struct PVM {
  std::vector<Matrix> outcomes;

  PVM() = default;
  explicit PVM(std::vector<Matrix> o, double tol = kUnitaryTol);
  int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes[0].rows()); }
  int n_outcomes() const { return static_cast<int>(outcomes.size()); }
};

struct PartyMeasurements {
  std::vector<PVM> settings;

  int dim() const { return settings.empty() ? 0 : settings[0].dim(); }
  int n_settings() const { return static_cast<int>(settings.size()); }
};

// Outcome 0 is the +1 eigenspace, outcome 1 the -1 eigenspace.
PVM pvm_from_binary(const BinaryObservable& w);
// P_0 - P_1 of a two-outcome PVM.
Matrix pvm_observable(const PVM& p);

// B_{0/1} = cos(mu) sigma_z ± sin(mu) sigma_x, mu in (0, pi/2).
std::pair<BinaryObservable, BinaryObservable> tilted_pair(double mu);

double alpha_from_theta(double theta);  // 2 cos(2 theta) / sqrt(1 + sin^2(2 theta))
double mu_from_theta(double theta);     // arctan(sin(2 theta))
double theta_from_alpha(double alpha);  // inverse of alpha_from_theta

// Z = regularized_polar((B0+B1)/2cos(mu)), X = regularized_polar((B0-B1)/2sin(mu)).
std::pair<BinaryObservable, BinaryObservable> extract_zx(const BinaryObservable& b0,
                                                         const BinaryObservable& b1, double mu,
                                                         double zero_tol = kDefaultZeroTol);

// A 2x2 Hermitian block embedded at basis {|2m>,|2m+1>} (unshifted) or
// {|(2m+1) mod d>, |(2m+2) mod d>} (shifted); zero elsewhere.
Matrix block_observable(const Matrix& a, int m, int d, bool shifted);

// Which observable pair party N uses in the ideal GHZ strategy. Mu is the
// value that attains sqrt(8+2 alpha^2); Theta is kept for the negative check.
enum class GhzPartyNAngle { Mu, Theta };

// Parties 0..n-2: {sigma_z, sigma_x}; party n-1: the tilted pair.
std::vector<PartyMeasurements> ideal_ghz_measurements(int n, double theta,
                                                      GhzPartyNAngle angle = GhzPartyNAngle::Mu);

// Three d-outcome settings for parties 0..n-2 (computational, direct-sum
// sigma_x blocks, shifted blocks) and four for party n-1 (per-block tilted
// pairs, plain and shifted), with rank-1 padding for odd d.
std::vector<PartyMeasurements> ideal_schmidt_measurements(const SchmidtCoefficients& c, int n);

// Parties 0..n-2: {sigma_z, sigma_x}; party n-1: D/E = (sigma_z ± sigma_x)/sqrt(2).
std::vector<PartyMeasurements> ideal_w_measurements(int n);
std::vector<PartyMeasurements> ideal_graph_measurements(const Graph& g);

}  // namespace selftest
