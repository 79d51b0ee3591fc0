#include "selftest/isometry.hpp"

#include <cmath>
#include <stdexcept>

namespace selftest {

namespace {

constexpr double pi = 3.14159265358979323846;

void require_hermitian_unitary(const Matrix& m, const char* what) {
  if (!is_hermitian(m, 1e-8) || !is_unitary(m, 1e-8))
    throw std::invalid_argument(std::string(what) + ": operator is not a Hermitian unitary");
}

Dims extended_dims(const Dims& dims, int ancilla_dim) {
  Dims out = dims;
  out.insert(out.end(), dims.size(), ancilla_dim);
  return out;
}

// Restrict v to the components where register `reg` carries digit k.
Vector digit_slice(const Vector& v, const Dims& dims, int reg, int k) {
  const LocalStrides s = local_strides(reg, dims);
  Vector out = Vector::Zero(v.size());
  for (long b = 0; b < s.before; ++b) {
    const long base = (b * s.dim + k) * s.after;
    out.segment(base, s.after) = v.segment(base, s.after);
  }
  return out;
}

// |phi>|k> -> ops[k]|phi>|k> with the control digit on register `control`.
Vector apply_controlled(const Vector& v, const Dims& dims, int control, int target,
                        const std::vector<Matrix>& ops) {
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = 0; k < ops.size(); ++k)
    out += apply_local(ops[k], target, dims, digit_slice(v, dims, control, static_cast<int>(k)));
  return out;
}

Matrix fourier_matrix(int d) {
  Matrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double angle = 2.0 * pi * j * k / d;
      f(j, k) = norm * Complex(std::cos(angle), std::sin(angle));
    }
  return f;
}

StateVector snap_normalized(const Dims& dims, Vector v, const char* what) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::logic_error(std::string(what) + ": output norm deviates from 1 by " +
                           std::to_string(std::abs(norm - 1.0)));
  return StateVector(dims, v / norm);
}

}  // namespace

std::vector<PartyZX> strategy_swap_operators(const Strategy& s, double mu) {
  const int n = s.n_parties();
  std::vector<PartyZX> ops(n);
  for (int p = 0; p + 1 < n; ++p) {
    ops[p].z = pvm_observable(s.parties[p].settings.at(0));
    ops[p].x = pvm_observable(s.parties[p].settings.at(1));
  }
  auto [zn, xn] = extract_zx(BinaryObservable(pvm_observable(s.parties[n - 1].settings.at(0))),
                             BinaryObservable(pvm_observable(s.parties[n - 1].settings.at(1))), mu);
  ops[n - 1].z = zn.matrix;
  ops[n - 1].x = xn.matrix;
  return ops;
}

Vector apply_qubit_swap_isometry(const std::vector<PartyZX>& ops, const Dims& dims,
                                 const Vector& v) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(ops.size()) != n)
    throw std::invalid_argument("qubit_swap_isometry: one (Z,X) pair per party required");
  for (const PartyZX& o : ops) {
    require_hermitian_unitary(o.z, "qubit_swap_isometry Z");
    require_hermitian_unitary(o.x, "qubit_swap_isometry X");
  }
  const long dim_in = total_dim(dims);
  if (v.size() != dim_in) throw std::invalid_argument("qubit_swap_isometry: vector length mismatch");
  const long blocks = 1L << n;
  Vector out = Vector::Zero(dim_in * blocks);
  for (long tau = 0; tau < blocks; ++tau) {
    Vector w = v;
    for (int p = 0; p < n; ++p) {
      const int bit = static_cast<int>((tau >> (n - 1 - p)) & 1);
      const Matrix id = Matrix::Identity(dims[p], dims[p]);
      const Matrix proj = (bit == 0) ? Matrix((id + ops[p].z) / 2.0) : Matrix((id - ops[p].z) / 2.0);
      w = apply_local(proj, p, dims, w);
      if (bit) w = apply_local(ops[p].x, p, dims, w);
    }
    for (long i = 0; i < dim_in; ++i) out[i * blocks + tau] = w[i];
  }
  return out;
}

StateVector qubit_swap_isometry(const std::vector<PartyZX>& ops, const StateVector& psi) {
  Vector out = apply_qubit_swap_isometry(ops, psi.dims, psi.amps);
  return snap_normalized(extended_dims(psi.dims, 2), std::move(out), "qubit_swap_isometry");
}

Vector apply_qudit_isometry(const QuditIsometryOperators& ops, const Dims& dims, const Vector& v) {
  const int n = static_cast<int>(dims.size());
  const int d = ops.d;
  if (d < 2) throw std::invalid_argument("qudit_isometry: ancilla dimension must be >= 2");
  if (static_cast<int>(ops.projectors.size()) != n || static_cast<int>(ops.chains.size()) != n)
    throw std::invalid_argument("qudit_isometry: one projector set and chain set per party required");

  std::vector<Matrix> clock(n);
  const Complex omega(std::cos(2.0 * pi / d), std::sin(2.0 * pi / d));
  for (int p = 0; p < n; ++p) {
    if (static_cast<int>(ops.projectors[p].size()) != d ||
        static_cast<int>(ops.chains[p].size()) != d)
      throw std::invalid_argument("qudit_isometry: need d projectors and d chains per party");
    Matrix sum = Matrix::Zero(dims[p], dims[p]);
    Matrix z = Matrix::Zero(dims[p], dims[p]);
    Complex w(1.0, 0.0);
    for (int k = 0; k < d; ++k) {
      const Matrix& proj = ops.projectors[p][k];
      if (proj.rows() != dims[p] || proj.cols() != dims[p])
        throw std::invalid_argument("qudit_isometry: projector dimension mismatch");
      sum += proj;
      z += w * proj;
      w *= omega;
      if (p + 1 < n)
        for (int k2 = k + 1; k2 < d; ++k2)
          if ((proj * ops.projectors[p][k2]).cwiseAbs().maxCoeff() > 1e-8)
            throw std::invalid_argument("qudit_isometry: projector set is not orthogonal at party " +
                                        std::to_string(p));
    }
    if (p + 1 < n) {
      if ((sum - Matrix::Identity(dims[p], dims[p])).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("qudit_isometry: incomplete projector set at party " +
                                    std::to_string(p));
    } else {
      z += Matrix::Identity(dims[p], dims[p]) - sum;  // completion term for the last party
    }
    if (!is_unitary(z, 1e-7))
      throw std::invalid_argument("qudit_isometry: clock operator is not unitary at party " +
                                  std::to_string(p));
    clock[p] = std::move(z);
  }

  const long dim_in = total_dim(dims);
  if (v.size() != dim_in) throw std::invalid_argument("qudit_isometry: vector length mismatch");
  const Dims full = extended_dims(dims, d);
  long blocks = 1;
  for (int p = 0; p < n; ++p) blocks *= d;
  Vector state = Vector::Zero(dim_in * blocks);
  for (long i = 0; i < dim_in; ++i) state[i * blocks] = v[i];  // ancillas in |0...0>

  const Matrix fourier = fourier_matrix(d);
  const Matrix fourier_inv = fourier.adjoint();
  for (int p = 0; p < n; ++p) {
    const int anc = n + p;
    state = apply_local(fourier, anc, full, state);
    std::vector<Matrix> zpow(d, Matrix::Identity(dims[p], dims[p]));
    for (int k = 1; k < d; ++k) zpow[k] = zpow[k - 1] * clock[p];
    state = apply_controlled(state, full, anc, p, zpow);
    state = apply_local(fourier_inv, anc, full, state);
    state = apply_controlled(state, full, anc, p, ops.chains[p]);
  }
  return state;
}

StateVector qudit_isometry(const QuditIsometryOperators& ops, const StateVector& psi) {
  Vector out = apply_qudit_isometry(ops, psi.dims, psi.amps);
  return snap_normalized(extended_dims(psi.dims, ops.d), std::move(out), "qudit_isometry");
}

namespace {

// Orthogonal projector onto range(a) + range(b), rank revealed at threshold.
Matrix range_projector(const Matrix& a, const Matrix& b, double threshold) {
  Matrix joint(a.rows(), a.cols() + b.cols());
  joint << a, b;
  Eigen::ColPivHouseholderQR<Matrix> qr(joint);
  qr.setThreshold(threshold);
  const long rank = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(joint.rows(), rank);
  return q * q.adjoint();
}

}  // namespace

QuditIsometryOperators extract_schmidt_operators(const Strategy& s, const SchmidtCoefficients& c,
                                                 double tol) {
  const CheckReport pre = schmidt_condition_check(s, c, tol);
  if (!pre.passed)
    throw std::invalid_argument(
        "extract_schmidt_operators: strategy does not reproduce the ideal Schmidt correlation "
        "(max residual " +
        std::to_string(pre.max_residual) + ")");

  const int n = s.n_parties();
  const int d = c.d();
  const bool odd = (d % 2 != 0);
  const int n_plain = odd ? (d - 1) / 2 : d / 2;
  const int n_shift = odd ? (d - 1) / 2 : d / 2;
  auto theta_m = [&](int m) { return std::atan(c.c[2 * m + 1] / c.c[2 * m]); };
  auto theta_shift_m = [&](int m) { return std::atan(c.c[(2 * m + 2) % d] / c.c[2 * m + 1]); };

  QuditIsometryOperators ops;
  ops.d = d;
  ops.projectors.resize(n);
  ops.chains.resize(n);

  for (int p = 0; p < n; ++p) {
    const int dim = s.dims[p];
    const Matrix id = Matrix::Identity(dim, dim);
    const bool last = (p == n - 1);
    std::vector<Matrix> block_x(n_plain), block_y(n_shift);
    ops.projectors[p].assign(d, Matrix());

    if (!last) {
      // Setting 0 supplies the projectors; the unitarized block reflections
      // come from settings 1 (plain) and 2 (shifted).
      for (int k = 0; k < d; ++k) ops.projectors[p][k] = s.parties[p].settings.at(0).outcomes.at(k);
      for (int m = 0; m < n_plain; ++m)
        block_x[m] = id - 2.0 * s.parties[p].settings.at(1).outcomes.at(2 * m + 1);
      for (int m = 0; m < n_shift; ++m)
        block_y[m] = id - 2.0 * s.parties[p].settings.at(2).outcomes.at((2 * m + 2) % d);
    } else {
      for (int m = 0; m < n_plain; ++m) {
        const Matrix& p0a = s.parties[p].settings.at(0).outcomes.at(2 * m);
        const Matrix& p0b = s.parties[p].settings.at(0).outcomes.at(2 * m + 1);
        const Matrix& p1b = s.parties[p].settings.at(1).outcomes.at(2 * m + 1);
        const Matrix u0 = id - 2.0 * p0b;
        const Matrix u1 = id - 2.0 * p1b;
        const double mu = mu_from_theta(theta_m(m));
        const Matrix zu = regularized_polar((u0 + u1) / (2.0 * std::cos(mu)));
        block_x[m] = regularized_polar((u0 - u1) / (2.0 * std::sin(mu)));
        // Restriction of the regularized operator to the reachable block
        // subspace; outside it zu acts as the identity.
        const Matrix span = range_projector(p0a + p0b, s.parties[p].settings.at(1).outcomes.at(2 * m) + p1b,
                                            1e-10);
        const Matrix ztilde = span * zu * span;
        ops.projectors[p][2 * m] = (span + ztilde) / 2.0;
        ops.projectors[p][2 * m + 1] = (span - ztilde) / 2.0;
      }
      for (int m = 0; m < n_shift; ++m) {
        const Matrix u2 = id - 2.0 * s.parties[p].settings.at(2).outcomes.at((2 * m + 2) % d);
        const Matrix u3 = id - 2.0 * s.parties[p].settings.at(3).outcomes.at((2 * m + 2) % d);
        const double mu = mu_from_theta(theta_shift_m(m));
        block_y[m] = regularized_polar((u2 - u3) / (2.0 * std::sin(mu)));
      }
      if (odd) ops.projectors[p][d - 1] = s.parties[p].settings.at(0).outcomes.at(d - 1);
    }

    ops.chains[p].assign(d, id);
    for (int k = 1; k < d; ++k) {
      if (k % 2 == 1)
        ops.chains[p][k] = ops.chains[p][k - 1] * block_x[(k - 1) / 2];
      else
        ops.chains[p][k] = ops.chains[p][k - 1] * block_y[(k - 2) / 2];
    }
  }
  return ops;
}

CheckReport schmidt_operator_identities(const Strategy& s, const QuditIsometryOperators& ops,
                                        const SchmidtCoefficients& c, double tol) {
  const int n = s.n_parties();
  const int d = ops.d;
  const Vector& psi = s.state.amps;
  CheckReport report;
  for (int k = 0; k < d; ++k) {
    const Vector ref = apply_local(ops.projectors[0][k], 0, s.dims, psi);
    for (int p = 1; p < n; ++p) {
      const Vector other = apply_local(ops.projectors[p][k], p, s.dims, psi);
      report.add("projector-match[k=" + std::to_string(k) + ",p" + std::to_string(p + 1) + "]",
                 (ref - other).norm());
    }
  }
  const Vector ground = apply_local(ops.projectors[0][0], 0, s.dims, psi);
  for (int k = 1; k < d; ++k) {
    Vector v = apply_local(ops.projectors[0][k], 0, s.dims, psi);
    for (int p = 0; p < n; ++p) v = apply_local(ops.chains[p][k], p, s.dims, v);
    const Vector rhs = (c.c[k] / c.c[0]) * ground;
    report.add("chain[k=" + std::to_string(k) + "]", (v - rhs).norm());
  }
  report.finalize(tol);
  return report;
}

FactorizationReport factorization_check(const StateVector& output, const StateVector& target,
                                        const std::vector<int>& target_registers) {
  const int n = output.n_parties();
  if (static_cast<int>(target_registers.size()) != target.n_parties())
    throw std::invalid_argument("factorization_check: register count does not match target");
  std::vector<bool> is_target(n, false);
  for (std::size_t q = 0; q < target_registers.size(); ++q) {
    const int r = target_registers[q];
    if (r < 0 || r >= n) throw std::invalid_argument("factorization_check: register out of range");
    if (is_target[r]) throw std::invalid_argument("factorization_check: duplicate register");
    if (output.dims[r] != target.dims[q])
      throw std::invalid_argument("factorization_check: register dimension mismatch");
    is_target[r] = true;
  }

  std::vector<int> junk_regs;
  for (int r = 0; r < n; ++r)
    if (!is_target[r]) junk_regs.push_back(r);

  std::vector<long> full_stride(n, 1);
  for (int r = n - 2; r >= 0; --r) full_stride[r] = full_stride[r + 1] * output.dims[r + 1];
  Dims junk_dims;
  long junk_total = 1;
  for (int r : junk_regs) {
    junk_dims.push_back(output.dims[r]);
    junk_total *= output.dims[r];
  }
  if (junk_dims.empty()) junk_dims.push_back(1);  // target covers every register
  const long target_total = target.dim();

  auto full_index = [&](long jb, long t) {
    long idx = 0;
    long rem = jb;
    for (int q = static_cast<int>(junk_regs.size()) - 1; q >= 0; --q) {
      idx += (rem % output.dims[junk_regs[q]]) * full_stride[junk_regs[q]];
      rem /= output.dims[junk_regs[q]];
    }
    rem = t;
    for (int q = static_cast<int>(target_registers.size()) - 1; q >= 0; --q) {
      idx += (rem % target.dims[q]) * full_stride[target_registers[q]];
      rem /= target.dims[q];
    }
    return idx;
  };

  Vector overlap = Vector::Zero(junk_total);
  for (long jb = 0; jb < junk_total; ++jb) {
    Complex acc(0.0, 0.0);
    for (long t = 0; t < target_total; ++t)
      acc += std::conj(target.amps[t]) * output.amps[full_index(jb, t)];
    overlap[jb] = acc;
  }

  FactorizationReport report;
  report.target_fidelity = overlap.squaredNorm();
  const double norm = overlap.norm();
  if (norm < 1e-10) {
    report.degenerate = true;
    report.residual_norm = output.amps.norm();
    return report;
  }
  const Vector junk = overlap / norm;
  Vector rebuilt = Vector::Zero(output.dim());
  for (long jb = 0; jb < junk_total; ++jb)
    for (long t = 0; t < target_total; ++t)
      rebuilt[full_index(jb, t)] = junk[jb] * target.amps[t];
  report.residual_norm = (output.amps - rebuilt).norm();
  report.junk_state = StateVector(junk_dims, junk, 1e-9);
  return report;
}

StateVector family_target_state(const FamilyParams& params) {
  struct Visitor {
    StateVector operator()(const GhzParams& p) const { return ghz_state(p.n, p.theta); }
    StateVector operator()(const SchmidtParams& p) const { return schmidt_state(p.c, p.n); }
    StateVector operator()(const WParams& p) const { return x_w_state(p.n); }
    StateVector operator()(const DickeParams& p) const { return x_dicke_state(p.n, p.k); }
    StateVector operator()(const GraphParams& p) const { return graph_state(p.g); }
  };
  return std::visit(Visitor{}, params);
}

double family_swap_angle(const FamilyParams& params) {
  if (const auto* ghz = std::get_if<GhzParams>(&params)) return mu_from_theta(ghz->theta);
  if (std::holds_alternative<SchmidtParams>(params))
    throw std::invalid_argument("family_swap_angle: the Schmidt family uses the qudit isometry");
  return pi / 4.0;
}

namespace {

// Reference single-qubit observable the isometry should map setting x of
// party p onto.
Matrix ideal_mapped_observable(const FamilyParams& params, int n, int p, int x) {
  const bool last = (p == n - 1);
  if (!last) return (x == 0) ? pauli_z() : pauli_x();
  if (const auto* ghz = std::get_if<GhzParams>(&params)) {
    const double mu = mu_from_theta(ghz->theta);
    const double sign = (x == 0) ? 1.0 : -1.0;
    return std::cos(mu) * pauli_z() + sign * std::sin(mu) * pauli_x();
  }
  const double sign = (x == 0) ? 1.0 : -1.0;
  return (pauli_z() + sign * pauli_x()) / std::sqrt(2.0);
}

}  // namespace

CheckReport measurement_selftest_check(const Strategy& s, const FamilyParams& params, double tol) {
  if (std::holds_alternative<SchmidtParams>(params))
    throw std::invalid_argument(
        "measurement_selftest_check: implemented for the qubit-path families");
  const int n = s.n_parties();
  const StateVector target = family_target_state(params);
  if (target.n_parties() != n)
    throw std::invalid_argument("measurement_selftest_check: family size does not match strategy");
  const std::vector<PartyZX> ops = strategy_swap_operators(s, family_swap_angle(params));
  const StateVector mapped = qubit_swap_isometry(ops, s.state);

  std::vector<int> target_regs(n);
  for (int p = 0; p < n; ++p) target_regs[p] = n + p;
  const FactorizationReport fact = factorization_check(mapped, target, target_regs);

  CheckReport report;
  report.add("state", fact.residual_norm);
  if (fact.degenerate) {
    report.finalize(tol);
    return report;
  }

  const Dims out_dims = mapped.dims;
  const long blocks = 1L << n;
  for (int p = 0; p < n; ++p) {
    for (int x = 0; x < 2; ++x) {
      const Matrix phys = pvm_observable(s.parties[p].settings.at(x));
      const Vector moved = apply_local(phys, p, s.dims, s.state.amps);
      const Vector image = apply_qubit_swap_isometry(ops, s.dims, moved);
      const Vector mapped_target =
          apply_local(ideal_mapped_observable(params, n, p, x), p, target.dims, target.amps);
      Vector expected = Vector::Zero(image.size());
      for (long jb = 0; jb < fact.junk_state.dim(); ++jb)
        for (long t = 0; t < blocks; ++t)
          expected[jb * blocks + t] = fact.junk_state.amps[jb] * mapped_target[t];
      report.add("map[p" + std::to_string(p + 1) + ",x" + std::to_string(x) + "]",
                 (image - expected).norm());
    }
  }
  report.finalize(tol);
  return report;
}

}  // namespace selftest
