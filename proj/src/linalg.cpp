#include "selftest/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace selftest {

long total_dim(const Dims& dims) {
  if (dims.empty()) throw std::invalid_argument("dims must be non-empty");
  long d = 1;
  for (int x : dims) {
    if (x <= 0) throw std::invalid_argument("party dimensions must be positive");
    d *= x;
  }
  return d;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix res = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return res.cwiseAbs().maxCoeff() <= tol;
}

StateVector::StateVector(Dims d, Vector a, double norm_tol) : dims(std::move(d)), amps(std::move(a)) {
  if (amps.size() != total_dim(dims))
    throw std::invalid_argument("amplitude length does not match product of dims");
  double n = amps.norm();
  if (std::abs(n - 1.0) > norm_tol)
    throw std::invalid_argument("state vector is not normalized (norm = " + std::to_string(n) + ")");
}

double state_overlap(const StateVector& a, const StateVector& b) {
  if (a.dims != b.dims) throw std::invalid_argument("state_overlap: dimension mismatch");
  return std::abs(a.amps.dot(b.amps));
}

LocalStrides local_strides(int party, const Dims& dims) {
  if (party < 0 || party >= static_cast<int>(dims.size()))
    throw std::invalid_argument("party index out of range");
  LocalStrides s{1, dims[party], 1};
  for (int q = 0; q < party; ++q) s.before *= dims[q];
  for (int q = party + 1; q < static_cast<int>(dims.size()); ++q) s.after *= dims[q];
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed_local(const Matrix& op, int party, const Dims& dims) {
  if (op.rows() != op.cols()) throw std::invalid_argument("embed_local: operator must be square");
  if (op.rows() != dims.at(party))
    throw std::invalid_argument("embed_local: operator dimension does not match party dimension");
  const LocalStrides s = local_strides(party, dims);
  Matrix out = kron(Matrix::Identity(s.before, s.before), op);
  return kron(out, Matrix::Identity(s.after, s.after));
}

Vector apply_local(const Matrix& op, int party, const Dims& dims, const Vector& v) {
  if (op.rows() != op.cols()) throw std::invalid_argument("apply_local: operator must be square");
  if (op.rows() != dims.at(party))
    throw std::invalid_argument("apply_local: operator dimension does not match party dimension");
  const LocalStrides s = local_strides(party, dims);
  if (v.size() != s.before * s.dim * s.after)
    throw std::invalid_argument("apply_local: vector length does not match dims");
  Vector out = Vector::Zero(v.size());
  for (long b = 0; b < s.before; ++b) {
    for (long a = 0; a < s.after; ++a) {
      const long base = b * s.dim * s.after + a;
      for (long r = 0; r < s.dim; ++r) {
        Complex acc(0.0, 0.0);
        for (long c = 0; c < s.dim; ++c) acc += op(r, c) * v[base + c * s.after];
        out[base + r * s.after] = acc;
      }
    }
  }
  return out;
}

std::pair<Matrix, Matrix> projectors_from_binary(const Matrix& w, double spectrum_tol) {
  if (!is_hermitian(w, 1e-10)) throw std::invalid_argument("projectors_from_binary: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double lam = es.eigenvalues()[i];
    if (std::abs(std::abs(lam) - 1.0) > spectrum_tol)
      throw std::invalid_argument("projectors_from_binary: spectrum is not contained in {-1,+1}");
  }
  const Matrix id = Matrix::Identity(w.rows(), w.cols());
  return {(id + w) / 2.0, (id - w) / 2.0};
}

Matrix regularized_polar(const Matrix& m, double zero_tol) {
  if (!is_hermitian(m, 1e-10)) throw std::invalid_argument("regularized_polar: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector signs(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double lam = es.eigenvalues()[i];
    signs[i] = (lam < -zero_tol) ? -1.0 : 1.0;  // zeros replaced by +1
  }
  Matrix out = es.eigenvectors() * signs.asDiagonal() * es.eigenvectors().adjoint();
  return (out + Matrix(out.adjoint())) / 2.0;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep, const Dims& dims) {
  const long dim = total_dim(dims);
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_trace: density matrix does not match dims");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int p : keep) {
    if (p < 0 || p >= n) throw std::invalid_argument("partial_trace: kept party out of range");
    if (kept[p]) throw std::invalid_argument("partial_trace: duplicate kept party");
    kept[p] = true;
  }

  // Strides of each party in the full index, and in the kept/traced sub-indices.
  std::vector<long> full_stride(n, 1), kept_stride, traced_stride;
  for (int p = n - 2; p >= 0; --p) full_stride[p] = full_stride[p + 1] * dims[p + 1];
  long kept_dim = 1, traced_dim = 1;
  std::vector<int> kept_parties, traced_parties;
  for (int p = 0; p < n; ++p) (kept[p] ? kept_parties : traced_parties).push_back(p);
  kept_stride.assign(kept_parties.size(), 1);
  for (int q = static_cast<int>(kept_parties.size()) - 2; q >= 0; --q)
    kept_stride[q] = kept_stride[q + 1] * dims[kept_parties[q + 1]];
  traced_stride.assign(traced_parties.size(), 1);
  for (int q = static_cast<int>(traced_parties.size()) - 2; q >= 0; --q)
    traced_stride[q] = traced_stride[q + 1] * dims[traced_parties[q + 1]];
  for (int p : kept_parties) kept_dim *= dims[p];
  for (int p : traced_parties) traced_dim *= dims[p];

  auto full_index = [&](long k, long t) {
    long idx = 0;
    for (std::size_t q = 0; q < kept_parties.size(); ++q)
      idx += ((k / kept_stride[q]) % dims[kept_parties[q]]) * full_stride[kept_parties[q]];
    for (std::size_t q = 0; q < traced_parties.size(); ++q)
      idx += ((t / traced_stride[q]) % dims[traced_parties[q]]) * full_stride[traced_parties[q]];
    return idx;
  };

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (long i = 0; i < kept_dim; ++i)
    for (long j = 0; j < kept_dim; ++j) {
      Complex acc(0.0, 0.0);
      for (long t = 0; t < traced_dim; ++t) acc += rho(full_index(i, t), full_index(j, t));
      out(i, j) = acc;
    }
  return out;
}

double fidelity(const Matrix& rho, const StateVector& psi) {
  if (rho.rows() != rho.cols() || rho.rows() != psi.dim())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex val = psi.amps.dot(rho * psi.amps);
  return val.real();
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace selftest
