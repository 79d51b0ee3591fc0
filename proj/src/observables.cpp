#include "selftest/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace selftest {

namespace {

constexpr double pi = 3.14159265358979323846;

Matrix basis_projector(int d, int i) {
  Matrix p = Matrix::Zero(d, d);
  p(i, i) = 1.0;
  return p;
}

// Rank-1 projectors onto the ±1 eigenvectors of cos(phi) sigma_z + sin(phi) sigma_x
// embedded in the two-level subspace {|i0>, |i1>} of a d-dimensional space.
std::pair<Matrix, Matrix> two_level_projectors(int d, int i0, int i1, double phi) {
  Vector plus = Vector::Zero(d), minus = Vector::Zero(d);
  plus[i0] = std::cos(phi / 2.0);
  plus[i1] = std::sin(phi / 2.0);
  minus[i0] = -std::sin(phi / 2.0);
  minus[i1] = std::cos(phi / 2.0);
  return {plus * plus.adjoint(), minus * minus.adjoint()};
}

}  // namespace

BinaryObservable::BinaryObservable(Matrix m) : matrix(std::move(m)) {
  if (!is_hermitian(matrix, 1e-10))
    throw std::invalid_argument("BinaryObservable: matrix is not Hermitian");
  Matrix sq = matrix * matrix - Matrix::Identity(matrix.rows(), matrix.cols());
  if (sq.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("BinaryObservable: matrix is not an involution");
}

PVM::PVM(std::vector<Matrix> o, double tol) : outcomes(std::move(o)) {
  if (outcomes.empty()) throw std::invalid_argument("PVM: no outcomes");
  const int d = static_cast<int>(outcomes[0].rows());
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    const Matrix& p = outcomes[a];
    if (p.rows() != d || p.cols() != d) throw std::invalid_argument("PVM: outcome dimension mismatch");
    if (!is_hermitian(p, tol)) throw std::invalid_argument("PVM: outcome is not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("PVM: outcome is not idempotent");
    for (std::size_t b = a + 1; b < outcomes.size(); ++b)
      if ((p * outcomes[b]).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("PVM: outcomes are not orthogonal");
    sum += p;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("PVM: outcomes do not sum to the identity");
}

PVM pvm_from_binary(const BinaryObservable& w) {
  auto [plus, minus] = projectors_from_binary(w.matrix);
  return PVM({plus, minus});
}

Matrix pvm_observable(const PVM& p) {
  if (p.n_outcomes() != 2) throw std::invalid_argument("pvm_observable: PVM is not two-outcome");
  return p.outcomes[0] - p.outcomes[1];
}

std::pair<BinaryObservable, BinaryObservable> tilted_pair(double mu) {
  if (!(mu > 0.0 && mu < pi / 2.0)) throw std::invalid_argument("tilted_pair: mu must lie in (0, pi/2)");
  const Matrix b0 = std::cos(mu) * pauli_z() + std::sin(mu) * pauli_x();
  const Matrix b1 = std::cos(mu) * pauli_z() - std::sin(mu) * pauli_x();
  return {BinaryObservable(b0), BinaryObservable(b1)};
}

double alpha_from_theta(double theta) {
  if (!(theta > 0.0 && theta <= pi / 4.0 + 1e-15))
    throw std::invalid_argument("alpha_from_theta: theta must lie in (0, pi/4]");
  const double s = std::sin(2.0 * theta);
  return 2.0 * std::cos(2.0 * theta) / std::sqrt(1.0 + s * s);
}

double mu_from_theta(double theta) {
  if (!(theta > 0.0 && theta < pi / 2.0))
    throw std::invalid_argument("mu_from_theta: theta must lie in (0, pi/2)");
  return std::atan(std::sin(2.0 * theta));
}

double theta_from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("theta_from_alpha: alpha must lie in [0, 2)");
  const double s = std::sqrt((4.0 - alpha * alpha) / (4.0 + alpha * alpha));
  return std::asin(s) / 2.0;
}

std::pair<BinaryObservable, BinaryObservable> extract_zx(const BinaryObservable& b0,
                                                         const BinaryObservable& b1, double mu,
                                                         double zero_tol) {
  if (!(mu > 0.0 && mu < pi / 2.0)) throw std::invalid_argument("extract_zx: mu must lie in (0, pi/2)");
  // The scaling is inert for the sign operator but kept as written.
  const Matrix zs = (b0.matrix + b1.matrix) / (2.0 * std::cos(mu));
  const Matrix xs = (b0.matrix - b1.matrix) / (2.0 * std::sin(mu));
  return {BinaryObservable(regularized_polar(zs, zero_tol)),
          BinaryObservable(regularized_polar(xs, zero_tol))};
}

Matrix block_observable(const Matrix& a, int m, int d, bool shifted) {
  if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("block_observable: block must be 2x2");
  if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("block_observable: block must be Hermitian");
  const int i0 = shifted ? (2 * m + 1) % d : 2 * m;
  const int i1 = shifted ? (2 * m + 2) % d : 2 * m + 1;
  if (m < 0 || i0 >= d || (!shifted && i1 >= d))
    throw std::invalid_argument("block_observable: block index out of range");
  Matrix out = Matrix::Zero(d, d);
  out(i0, i0) = a(0, 0);
  out(i0, i1) = a(0, 1);
  out(i1, i0) = a(1, 0);
  out(i1, i1) = a(1, 1);
  return out;
}

std::vector<PartyMeasurements> ideal_ghz_measurements(int n, double theta, GhzPartyNAngle angle) {
  if (n < 2) throw std::invalid_argument("ideal_ghz_measurements: need at least 2 parties");
  const double mu = (angle == GhzPartyNAngle::Mu) ? mu_from_theta(theta) : theta;
  auto [b0, b1] = tilted_pair(mu);
  std::vector<PartyMeasurements> out(n);
  for (int p = 0; p + 1 < n; ++p)
    out[p].settings = {pvm_from_binary(BinaryObservable(pauli_z())),
                       pvm_from_binary(BinaryObservable(pauli_x()))};
  out[n - 1].settings = {pvm_from_binary(b0), pvm_from_binary(b1)};
  return out;
}

std::vector<PartyMeasurements> ideal_schmidt_measurements(const SchmidtCoefficients& c, int n) {
  if (n < 2) throw std::invalid_argument("ideal_schmidt_measurements: need at least 2 parties");
  const int d = c.d();
  const bool odd = (d % 2 != 0);
  const int n_plain = odd ? (d - 1) / 2 : d / 2;    // blocks {2m, 2m+1}
  const int n_shift = odd ? (d - 1) / 2 : d / 2;    // blocks {(2m+1)%d, (2m+2)%d}

  auto theta_m = [&](int m) { return std::atan(c.c[2 * m + 1] / c.c[2 * m]); };
  auto theta_shift_m = [&](int m) { return std::atan(c.c[(2 * m + 2) % d] / c.c[2 * m + 1]); };

  // Computational basis.
  std::vector<Matrix> comp(d);
  for (int k = 0; k < d; ++k) comp[k] = basis_projector(d, k);
  const PVM computational(comp);

  // Direct-sum setting: per block the ±1 eigenprojectors of the 2x2 observable
  // cos(phi) sigma_z + sin(phi) sigma_x; rank-1 padding completes odd d.
  auto block_setting = [&](bool shifted, auto phi_of_block) {
    std::vector<Matrix> outcomes(d, Matrix::Zero(d, d));
    const int nb = shifted ? n_shift : n_plain;
    for (int m = 0; m < nb; ++m) {
      const int i0 = shifted ? (2 * m + 1) % d : 2 * m;
      const int i1 = shifted ? (2 * m + 2) % d : 2 * m + 1;
      auto [plus, minus] = two_level_projectors(d, i0, i1, phi_of_block(m));
      outcomes[i0] = plus;
      outcomes[i1] = minus;
    }
    if (odd) {
      const int pad = shifted ? 0 : d - 1;
      outcomes[pad] = basis_projector(d, pad);
    }
    return PVM(outcomes);
  };

  PartyMeasurements shared;
  shared.settings = {computational, block_setting(false, [](int) { return pi / 2.0; }),
                     block_setting(true, [](int) { return pi / 2.0; })};

  PartyMeasurements last;
  last.settings = {
      block_setting(false, [&](int m) { return mu_from_theta(theta_m(m)); }),
      block_setting(false, [&](int m) { return -mu_from_theta(theta_m(m)); }),
      block_setting(true, [&](int m) { return mu_from_theta(theta_shift_m(m)); }),
      block_setting(true, [&](int m) { return -mu_from_theta(theta_shift_m(m)); })};

  std::vector<PartyMeasurements> out(n);
  for (int p = 0; p + 1 < n; ++p) out[p] = shared;
  out[n - 1] = last;
  return out;
}

std::vector<PartyMeasurements> ideal_w_measurements(int n) {
  if (n < 2) throw std::invalid_argument("ideal_w_measurements: need at least 2 parties");
  auto [d_obs, e_obs] = tilted_pair(pi / 4.0);  // (sigma_z ± sigma_x)/sqrt(2)
  std::vector<PartyMeasurements> out(n);
  for (int p = 0; p + 1 < n; ++p)
    out[p].settings = {pvm_from_binary(BinaryObservable(pauli_z())),
                       pvm_from_binary(BinaryObservable(pauli_x()))};
  out[n - 1].settings = {pvm_from_binary(d_obs), pvm_from_binary(e_obs)};
  return out;
}

std::vector<PartyMeasurements> ideal_graph_measurements(const Graph& g) {
  return ideal_w_measurements(g.n_vertices);
}

}  // namespace selftest
