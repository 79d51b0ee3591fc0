// linalg.hpp
// Dense complex linear algebra over small multipartite Hilbert spaces.
// Index convention: party 0 is the most significant digit of a flattened
// amplitude index. Every embedding/application goes through local_strides,
// which is the single source of truth for that convention.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace selftest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<int>;  // per-party local dimensions

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kDefaultZeroTol = 1e-10;

long total_dim(const Dims& dims);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kUnitaryTol);

// Normalized amplitude vector over a tensor-factored Hilbert space.
struct StateVector {
  Dims dims;
  Vector amps;

  StateVector() = default;
  StateVector(Dims d, Vector a, double norm_tol = kNormTol);

  int n_parties() const { return static_cast<int>(dims.size()); }
  long dim() const { return amps.size(); }
};

// |<a|b>| — state equality up to global phase means overlap == 1.
double state_overlap(const StateVector& a, const StateVector& b);

// Decomposition of an index as i = (block * dim + digit) * after + offset,
// digit being party `party`'s local index.
struct LocalStrides {
  long before;  // product of dims to the left
  long dim;     // this party's dimension
  long after;   // product of dims to the right
};
LocalStrides local_strides(int party, const Dims& dims);

Matrix kron(const Matrix& a, const Matrix& b);

// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at position `party`.
Matrix embed_local(const Matrix& op, int party, const Dims& dims);

// embed_local(op, party, dims) * v without forming the big matrix.
Vector apply_local(const Matrix& op, int party, const Dims& dims, const Vector& v);

// (P_plus, P_minus) = ((I±W)/2) for a Hermitian W with spectrum in {±1}.
std::pair<Matrix, Matrix> projectors_from_binary(const Matrix& w, double spectrum_tol = 1e-9);

// Sign operator of a Hermitian matrix, zero eigenvalues mapped to +1.
// The result is a Hermitian unitary.
Matrix regularized_polar(const Matrix& m, double zero_tol = kDefaultZeroTol);

// Reduced density operator on `keep` (ascending party order in the output).
Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep, const Dims& dims);

// <psi| rho |psi>.
double fidelity(const Matrix& rho, const StateVector& psi);

Matrix pauli_x();
Matrix pauli_z();

}  // namespace selftest
