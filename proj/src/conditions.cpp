#include "selftest/conditions.hpp"

#include "selftest/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selftest {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string pattern_string(long mask, int width) {
  std::string s(width, '+');
  for (int i = 0; i < width; ++i)
    if ((mask >> (width - 1 - i)) & 1) s[i] = '-';
  return s;
}

// Linear combination of single-party operators; products of these expand
// into CorrelatorTerms.
struct RoleExpr {
  std::vector<std::pair<double, PartyRole>> parts;
};

RoleExpr single(PartyRole r) { return RoleExpr{{{1.0, r}}}; }

// sigma_z-like observable: setting-0 observable for p < n-1, (D+E)/sqrt(2)
// for the last party.
RoleExpr z_observable_expr(int p, int n) {
  if (p < n - 1) return single(observable_role(0));
  return RoleExpr{{{1.0 / kSqrt2, observable_role(0)}, {1.0 / kSqrt2, observable_role(1)}}};
}

// sigma_x-like observable: setting-1 observable for p < n-1, (D-E)/sqrt(2)
// for the last party.
RoleExpr x_observable_expr(int p, int n) {
  if (p < n - 1) return single(observable_role(1));
  return RoleExpr{{{1.0 / kSqrt2, observable_role(0)}, {-1.0 / kSqrt2, observable_role(1)}}};
}

// [1 + (-1)^tau Z_p]/2.
RoleExpr z_projector_expr(int p, int n, int tau) {
  if (p < n - 1) return single(projector_role(0, tau));
  const double s = (tau ? -1.0 : 1.0) / (2.0 * kSqrt2);
  return RoleExpr{{{0.5, identity_role()}, {s, observable_role(0)}, {s, observable_role(1)}}};
}

// Expands coeff * Π_p expr_p into terms appended to out.
void append_product(std::vector<CorrelatorTerm>& out, int n, double coeff,
                    const std::vector<std::pair<int, RoleExpr>>& factors) {
  std::vector<CorrelatorTerm> acc{CorrelatorTerm{coeff, std::vector<PartyRole>(n, identity_role())}};
  for (const auto& [party, expr] : factors) {
    std::vector<CorrelatorTerm> next;
    next.reserve(acc.size() * expr.parts.size());
    for (const CorrelatorTerm& t : acc)
      for (const auto& [c, role] : expr.parts) {
        CorrelatorTerm copy = t;
        copy.coeff *= c;
        copy.roles[party] = role;
        next.push_back(std::move(copy));
      }
    acc = std::move(next);
  }
  for (CorrelatorTerm& t : acc) out.push_back(std::move(t));
}

CorrelatorSpec product_spec(std::string label, double target, int n,
                            const std::vector<std::pair<int, RoleExpr>>& factors) {
  CorrelatorSpec spec;
  spec.label = std::move(label);
  spec.target = target;
  append_product(spec.terms, n, 1.0, factors);
  return spec;
}

}  // namespace

void CheckReport::add(std::string label, double residual) {
  residuals.push_back({std::move(label), residual});
  if (residual > max_residual) max_residual = residual;
}

void CheckReport::finalize(double tolerance) {
  tol = tolerance;
  max_residual = 0.0;
  for (const ResidualEntry& e : residuals) max_residual = std::max(max_residual, e.residual);
  passed = max_residual <= tol;
}

ConditionSet ghz_conditions(int n, double theta) {
  if (n < 3) throw std::invalid_argument("ghz_conditions: need at least 3 parties");
  const double alpha = alpha_from_theta(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double bell_target = std::sqrt(8.0 + 2.0 * alpha * alpha) / std::pow(2.0, n - 2);
  const double pattern_target = 1.0 / std::pow(2.0, n - 2);

  ConditionSet cs{Family::GHZ, params_label(GhzParams{n, theta}), {}};

  for (int i = 0; i + 1 < n; ++i)
    cs.specs.push_back(product_spec("marginal[p" + std::to_string(i + 1) + "]", c2, n,
                                    {{i, single(projector_role(0, 0))}}));
  for (int i = 0; i + 2 < n; ++i)
    cs.specs.push_back(
        product_spec("pair[p" + std::to_string(i + 1) + ",p" + std::to_string(n - 1) + "]", c2, n,
                     {{i, single(projector_role(0, 0))}, {n - 2, single(projector_role(0, 0))}}));

  const int prefix = n - 2;
  for (long mask = 0; mask < (1L << prefix); ++mask) {
    std::vector<std::pair<int, RoleExpr>> proj;
    for (int i = 0; i < prefix; ++i) {
      const int bit = static_cast<int>((mask >> (prefix - 1 - i)) & 1);
      proj.emplace_back(i, single(projector_role(1, bit)));
    }
    const std::string pat = pattern_string(mask, prefix);
    cs.specs.push_back(product_spec("x-pattern[a=" + pat + "]", pattern_target, n, proj));

    // Tilted Bell operator between parties n-1 and n, its sigma_x-side sign
    // set by the parity of the pattern.
    const double sign = (__builtin_popcountl(mask) % 2 == 0) ? 1.0 : -1.0;
    CorrelatorSpec bell;
    bell.label = "projected-tilted[a=" + pat + "]";
    bell.target = bell_target;
    auto with = [&](double coeff, std::vector<std::pair<int, RoleExpr>> extra) {
      std::vector<std::pair<int, RoleExpr>> factors = proj;
      for (auto& f : extra) factors.push_back(std::move(f));
      append_product(bell.terms, n, coeff, factors);
    };
    with(alpha, {{n - 2, single(observable_role(0))}});
    with(1.0, {{n - 2, single(observable_role(0))}, {n - 1, single(observable_role(0))}});
    with(1.0, {{n - 2, single(observable_role(0))}, {n - 1, single(observable_role(1))}});
    with(sign, {{n - 2, single(observable_role(1))}, {n - 1, single(observable_role(0))}});
    with(-sign, {{n - 2, single(observable_role(1))}, {n - 1, single(observable_role(1))}});
    cs.specs.push_back(std::move(bell));
  }
  return cs;
}

namespace {

// Transformed conditions for the W sub-test on parties `members` (last one is
// the global party n-1), conditioned on + outcomes of `prefix_parties`.
// `flip` swaps Z^(+) <-> Z^(-) on the first-n-1 parties (the Dicke variant).
void append_w_family_specs(ConditionSet& cs, int n, const std::vector<int>& prefix_parties,
                           const std::vector<int>& members, bool flip, double weight,
                           const std::string& tag) {
  const int n_sub = static_cast<int>(members.size());  // includes party n-1
  const int role_minus = flip ? 0 : 1;                 // outcome playing the "-" role
  const int role_plus = 1 - role_minus;

  std::vector<std::pair<int, RoleExpr>> prefix;
  for (int p : prefix_parties) prefix.emplace_back(p, single(projector_role(0, 0)));
  if (!prefix_parties.empty()) {
    cs.specs.push_back(product_spec("subset-weight" + tag, weight, n, prefix));
  }

  for (int idx = 0; idx + 1 < n_sub; ++idx) {
    const int i = members[idx];
    const std::string who = tag + "[i=p" + std::to_string(i + 1) + "]";
    std::vector<std::pair<int, RoleExpr>> others = prefix;
    for (int jdx = 0; jdx + 1 < n_sub; ++jdx)
      if (jdx != idx) others.emplace_back(members[jdx], single(projector_role(0, role_plus)));

    cs.specs.push_back(
        product_spec("projected-weight" + who, 2.0 / n_sub * weight, n, others));

    // Bell operator Z_i (D+E) + X_i (D-E); invariant under the Dicke flip.
    CorrelatorSpec bell;
    bell.label = "projected-chsh" + who;
    bell.target = 4.0 * kSqrt2 / n_sub * weight;
    for (const auto& [zi_coeff, zi_setting] :
         std::vector<std::pair<double, int>>{{1.0, 0}, {1.0, 1}}) {
      // zi_setting 0 -> Z_i branch pairing with D+E, 1 -> X_i branch with D-E.
      const double e_sign = (zi_setting == 0) ? 1.0 : -1.0;
      for (const auto& [nd_coeff, nd_setting] :
           std::vector<std::pair<double, int>>{{1.0, 0}, {e_sign, 1}}) {
        std::vector<std::pair<int, RoleExpr>> factors = others;
        factors.emplace_back(i, single(observable_role(zi_setting)));
        factors.emplace_back(n - 1, single(observable_role(nd_setting)));
        append_product(bell.terms, n, zi_coeff * nd_coeff, factors);
      }
    }
    cs.specs.push_back(std::move(bell));

    std::vector<std::pair<int, RoleExpr>> lone = prefix;
    lone.emplace_back(i, single(projector_role(0, role_minus)));
    cs.specs.push_back(product_spec("flipped-marginal" + who, 1.0 / n_sub * weight, n, lone));

    std::vector<std::pair<int, RoleExpr>> pattern = others;
    pattern.emplace_back(i, single(projector_role(0, role_minus)));
    cs.specs.push_back(product_spec("flipped-pattern" + who, 1.0 / n_sub * weight, n, pattern));
  }
}

}  // namespace

ConditionSet w_conditions(int n) {
  if (n < 3) throw std::invalid_argument("w_conditions: need at least 3 parties");
  ConditionSet cs{Family::W, params_label(WParams{n}), {}};
  std::vector<int> members(n);
  for (int p = 0; p < n; ++p) members[p] = p;
  append_w_family_specs(cs, n, {}, members, /*flip=*/false, 1.0, "");
  return cs;
}

ConditionSet dicke_conditions(int n, int k) {
  if (n < 3) throw std::invalid_argument("dicke_conditions: need at least 3 parties");
  if (k < n / 2 || k > n - 1)
    throw std::invalid_argument(
        "dicke_conditions: need floor(n/2) <= k <= n-1 (smaller k via the bit-flip equivalence)");
  ConditionSet cs{Family::Dicke, params_label(DickeParams{n, k}), {}};

  const int subset_size = n - 1 - k;
  const double weight = static_cast<double>(k + 1) / static_cast<double>(binom(n, k));

  for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
    if (__builtin_popcountl(mask) != subset_size) continue;
    std::vector<int> subset, rest;
    for (int p = 0; p + 1 < n; ++p)
      (((mask >> (n - 2 - p)) & 1) ? subset : rest).push_back(p);
    rest.push_back(n - 1);
    std::string tag = "[S={";
    for (std::size_t i = 0; i < subset.size(); ++i)
      tag += (i ? "," : "") + std::to_string(subset[i] + 1);
    tag += "}]";
    append_w_family_specs(cs, n, subset, rest, /*flip=*/true, weight, tag);
  }

  // Zero-target patterns: k+1 minus outcomes among the first n-1 parties,
  // both values of the last party's sign.
  for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
    if (__builtin_popcountl(mask) != k + 1) continue;
    std::vector<std::pair<int, RoleExpr>> factors;
    for (int p = 0; p + 1 < n; ++p)
      factors.emplace_back(p, single(projector_role(0, ((mask >> (n - 2 - p)) & 1) ? 1 : 0)));
    for (int tau_n : {0, 1}) {
      std::vector<std::pair<int, RoleExpr>> all = factors;
      all.emplace_back(n - 1, z_projector_expr(n - 1, n, tau_n));
      cs.specs.push_back(product_spec(
          "zero-pattern[tau=" + pattern_string(static_cast<long>(mask), n - 1) +
              (tau_n ? "-" : "+") + "]",
          0.0, n, all));
    }
  }
  return cs;
}

ConditionSet graph_conditions(const Graph& g) {
  const int n = g.n_vertices;
  if (n < 2) throw std::invalid_argument("graph_conditions: need at least 2 vertices");
  if (!g.adjacent(n - 2, n - 1))
    throw std::invalid_argument("graph_conditions: parties n-1 and n must be adjacent "
                                "(apply relabel_for_selftest)");
  for (int v = 0; v + 1 < n; ++v)
    if (g.degree(v) >= 1 && g.degree(v) < g.degree(n - 1))
      throw std::invalid_argument("graph_conditions: party n must have minimal degree "
                                  "(apply relabel_for_selftest)");

  ConditionSet cs{Family::Graph, params_label(GraphParams{g}), {}};

  auto tau_bit = [](long mask, const std::vector<int>& nu, int party) {
    for (std::size_t q = 0; q < nu.size(); ++q)
      if (nu[q] == party) return static_cast<int>((mask >> (nu.size() - 1 - q)) & 1);
    return 0;
  };

  // Bell conditions for the anchored pair (n-2, n-1).
  {
    const std::vector<int> nu = pair_neighbors(g, n - 2, n - 1);
    const double inv = 1.0 / std::pow(2.0, nu.size());
    const std::vector<int> nb_a = neighbors(g, n - 2), nb_b = neighbors(g, n - 1);
    for (long mask = 0; mask < (1L << nu.size()); ++mask) {
      std::vector<std::pair<int, RoleExpr>> prefix;
      for (std::size_t q = 0; q < nu.size(); ++q)
        prefix.emplace_back(nu[q],
                            z_projector_expr(nu[q], n, static_cast<int>((mask >> (nu.size() - 1 - q)) & 1)));
      const std::string pat = "[tau=" + pattern_string(mask, static_cast<int>(nu.size())) + "]";
      if (!nu.empty())
        cs.specs.push_back(product_spec("bell-weight" + pat, inv, n, prefix));

      int m_a = 0, m_b = 0;  // minus outcomes among each party's own neighbours
      for (int v : nb_a)
        if (v != n - 1) m_a += tau_bit(mask, nu, v);
      for (int v : nb_b)
        if (v != n - 2) m_b += tau_bit(mask, nu, v);

      CorrelatorSpec bell;
      bell.label = "bell" + pat;
      bell.target = 2.0 * kSqrt2 * inv;
      // A minus outcome on a neighbour of party n-1 conjugates its qubit of
      // the residual Bell pair by sigma_z, flipping the X_{n-1} term; a minus
      // on a neighbour of party n flips the (D-E) term.
      const double sx = (m_a % 2 == 0) ? 1.0 : -1.0;  // sign of X_{n-1} ⊗ (D+E)
      const double sz = (m_b % 2 == 0) ? 1.0 : -1.0;  // sign of Z_{n-1} ⊗ (D-E)
      auto with = [&](double coeff, int ab_setting, int last_setting) {
        std::vector<std::pair<int, RoleExpr>> factors = prefix;
        factors.emplace_back(n - 2, single(observable_role(ab_setting)));
        factors.emplace_back(n - 1, single(observable_role(last_setting)));
        append_product(bell.terms, n, coeff, factors);
      };
      with(sx, 1, 0);
      with(sx, 1, 1);
      with(sz, 0, 0);
      with(-sz, 0, 1);
      cs.specs.push_back(std::move(bell));
    }
  }

  // Stabilizer-like conditions for every other connected ordered pair.
  for (const auto& [a, b] : g.edges) {
    if (a == n - 2 && b == n - 1) continue;
    for (const auto& [i, j] : {std::make_pair(a, b), std::make_pair(b, a)}) {
      const std::vector<int> nu = pair_neighbors(g, i, j);
      const double inv = 1.0 / std::pow(2.0, nu.size());
      const std::vector<int> nb_j = neighbors(g, j);
      for (long mask = 0; mask < (1L << nu.size()); ++mask) {
        std::vector<std::pair<int, RoleExpr>> prefix;
        for (std::size_t q = 0; q < nu.size(); ++q)
          prefix.emplace_back(nu[q], z_projector_expr(nu[q], n,
                                                      static_cast<int>((mask >> (nu.size() - 1 - q)) & 1)));
        const std::string pat = "[(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ")|tau=" + pattern_string(mask, static_cast<int>(nu.size())) + "]";
        if (i < j && !nu.empty())
          cs.specs.push_back(product_spec("pair-weight" + pat, inv, n, prefix));

        int m_j = 0;
        for (int v : nb_j)
          if (v != i) m_j += tau_bit(mask, nu, v);
        const double target = ((m_j % 2 == 0) ? 1.0 : -1.0) * inv;
        std::vector<std::pair<int, RoleExpr>> factors = prefix;
        factors.emplace_back(i, z_observable_expr(i, n));
        factors.emplace_back(j, x_observable_expr(j, n));
        cs.specs.push_back(product_spec("pair-zx" + pat, target, n, factors));
      }
    }
  }
  return cs;
}

CheckReport check(const Strategy& s, const ConditionSet& conditions, double tol) {
  CheckReport report;
  report.residuals.resize(conditions.specs.size());
  detail::parallel_for(conditions.specs.size(), [&](std::size_t i) {
    const CorrelatorSpec& spec = conditions.specs[i];
    const double value = correlator(s, spec);
    report.residuals[i] = {spec.label, std::abs(value - spec.target)};
  });
  report.finalize(tol);
  return report;
}

namespace {

// Setting-0/1 observables for parties < n-1 and the regularized pair for the
// last party.
struct ZxOperators {
  std::vector<Matrix> z, x;
};

ZxOperators strategy_zx(const Strategy& s, double mu) {
  const int n = s.n_parties();
  ZxOperators ops;
  ops.z.resize(n);
  ops.x.resize(n);
  for (int p = 0; p + 1 < n; ++p) {
    ops.z[p] = pvm_observable(s.parties[p].settings.at(0));
    ops.x[p] = pvm_observable(s.parties[p].settings.at(1));
  }
  auto [zn, xn] = extract_zx(BinaryObservable(pvm_observable(s.parties[n - 1].settings.at(0))),
                             BinaryObservable(pvm_observable(s.parties[n - 1].settings.at(1))), mu);
  ops.z[n - 1] = zn.matrix;
  ops.x[n - 1] = xn.matrix;
  return ops;
}

}  // namespace

CheckReport ghz_operator_identities(const Strategy& s, double theta, double tol) {
  const int n = s.n_parties();
  if (n < 2) throw std::invalid_argument("ghz_operator_identities: need at least 2 parties");
  const ZxOperators ops = strategy_zx(s, mu_from_theta(theta));
  const Vector& psi = s.state.amps;

  CheckReport report;
  const Vector z0psi = apply_local(ops.z[0], 0, s.dims, psi);
  for (int i = 1; i < n; ++i) {
    const Vector zi = apply_local(ops.z[i], i, s.dims, psi);
    report.add("z-chain[p1=p" + std::to_string(i + 1) + "]", (z0psi - zi).norm());
  }
  Vector v = psi - z0psi;
  for (int p = 0; p < n; ++p) v = apply_local(ops.x[p], p, s.dims, v);
  const Vector rhs = std::tan(theta) * (psi + z0psi);
  report.add("x-product", (v - rhs).norm());
  report.finalize(tol);
  return report;
}

CheckReport tilted_identities(const Strategy& s, double theta, double tol) {
  if (s.n_parties() != 2) throw std::invalid_argument("tilted_identities: need exactly 2 parties");
  const ZxOperators ops = strategy_zx(s, mu_from_theta(theta));
  const Vector& psi = s.state.amps;
  const Matrix& za = pvm_observable(s.parties[0].settings.at(0));
  const Matrix& xa = pvm_observable(s.parties[0].settings.at(1));

  CheckReport report;
  const Vector za_psi = apply_local(za, 0, s.dims, psi);
  report.add("z-match", (za_psi - apply_local(ops.z[1], 1, s.dims, psi)).norm());
  const Vector lhs = std::cos(theta) * apply_local(xa, 0, s.dims, psi - za_psi);
  const Vector rhs = std::sin(theta) * apply_local(ops.x[1], 1, s.dims, psi + za_psi);
  report.add("x-exchange", (lhs - rhs).norm());
  report.finalize(tol);
  return report;
}

CheckReport w_operator_identities(const Strategy& s, double tol) {
  const int n = s.n_parties();
  if (n < 3) throw std::invalid_argument("w_operator_identities: need at least 3 parties");
  const ZxOperators ops = strategy_zx(s, std::atan(1.0));  // mu = pi/4
  const Vector& psi = s.state.amps;
  const double scale = std::sqrt(n / 2.0);

  CheckReport report;
  for (int i = 0; i + 1 < n; ++i) {
    Vector proj = psi;
    for (int l = 0; l + 1 < n; ++l) {
      if (l == i) continue;
      proj = apply_local(s.parties[l].settings.at(0).outcomes.at(0), l, s.dims, proj);
    }
    const Vector tilde = scale * proj;
    const std::string who = "[i=p" + std::to_string(i + 1) + "]";

    const Vector zi = apply_local(ops.z[i], i, s.dims, tilde);
    const Vector zn = apply_local(ops.z[n - 1], n - 1, s.dims, tilde);
    report.add("z-match" + who, (zi - zn).norm());

    const Vector lhs = apply_local(ops.x[i], i, s.dims, tilde + zn);
    const Vector rhs = apply_local(ops.x[n - 1], n - 1, s.dims, tilde - zi);
    report.add("x-exchange" + who, (lhs - rhs).norm());

    const Vector zx = apply_local(ops.z[i], i, s.dims, apply_local(ops.x[i], i, s.dims, tilde));
    const Vector xz = apply_local(ops.x[i], i, s.dims, apply_local(ops.z[i], i, s.dims, tilde));
    report.add("anticommute" + who, (zx + xz).norm());
  }
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 1; j + 1 < n; ++j) {
      Vector v = apply_local(s.parties[i].settings.at(0).outcomes.at(1), i, s.dims, psi);
      v = apply_local(s.parties[j].settings.at(0).outcomes.at(1), j, s.dims, v);
      report.add("double-minus[p" + std::to_string(i + 1) + ",p" + std::to_string(j + 1) + "]",
                 v.norm());
    }
  report.finalize(tol);
  return report;
}

CheckReport graph_anticommutation_check(const Strategy& s, const Graph& g, double tol) {
  const int n = s.n_parties();
  if (g.n_vertices != n)
    throw std::invalid_argument("graph_anticommutation_check: graph size does not match strategy");
  const ZxOperators ops = strategy_zx(s, std::atan(1.0));
  const Vector& psi = s.state.amps;
  CheckReport report;
  for (int p = 0; p < n; ++p) {
    const Vector zx = apply_local(ops.z[p], p, s.dims, apply_local(ops.x[p], p, s.dims, psi));
    const Vector xz = apply_local(ops.x[p], p, s.dims, apply_local(ops.z[p], p, s.dims, psi));
    report.add("anticommute[p" + std::to_string(p + 1) + "]", (zx + xz).norm());
  }
  report.finalize(tol);
  return report;
}

CheckReport schmidt_condition_check(const Strategy& s, const SchmidtCoefficients& c, double tol) {
  const int n = s.n_parties();
  for (int p = 0; p < n; ++p) {
    const int need = (p + 1 < n) ? 3 : 4;
    if (s.parties[p].n_settings() < need)
      throw std::invalid_argument("schmidt_condition_check: party " + std::to_string(p + 1) +
                                  " needs " + std::to_string(need) + " settings");
    for (const PVM& pvm : s.parties[p].settings)
      if (pvm.n_outcomes() != c.d())
        throw std::invalid_argument("schmidt_condition_check: outcome count does not match d");
  }
  std::map<std::vector<int>, CorrelationTable> tables;
  auto add_tables = [&](const std::vector<QuestionTuple>& qs) {
    for (const QuestionTuple& q : qs) tables.emplace(q.x, probability_table(s, q));
  };
  add_tables(schmidt_plain_questions(n));
  add_tables(schmidt_shifted_questions(n));
  const BlockStructureReport block = block_structure_check(tables, c, tol);

  CheckReport report;
  for (const BlockResidual& e : block.entries) report.add(e.label, e.residual);
  report.finalize(tol);
  return report;
}

CheckReport family_condition_check(const Strategy& s, const FamilyParams& params, double tol) {
  struct Visitor {
    const Strategy& s;
    double tol;
    CheckReport operator()(const GhzParams& p) const {
      if (p.n == 2) {
        const double alpha = alpha_from_theta(p.theta);
        const double value = tilted_chsh_value(s, 0, 1, alpha);
        CheckReport report;
        report.add("tilted-chsh-max", std::abs(value - std::sqrt(8.0 + 2.0 * alpha * alpha)));
        report.finalize(tol);
        return report;
      }
      return check(s, ghz_conditions(p.n, p.theta), tol);
    }
    CheckReport operator()(const SchmidtParams& p) const {
      return schmidt_condition_check(s, p.c, tol);
    }
    CheckReport operator()(const WParams& p) const { return check(s, w_conditions(p.n), tol); }
    CheckReport operator()(const DickeParams& p) const {
      return check(s, dicke_conditions(p.n, p.k), tol);
    }
    CheckReport operator()(const GraphParams& p) const {
      return check(s, graph_conditions(p.g), tol);
    }
  };
  return std::visit(Visitor{s, tol}, params);
}

nlohmann::json condition_set_to_json(const ConditionSet& cs) {
  nlohmann::json j;
  j["family"] = family_name(cs.family);
  j["params"] = cs.params;
  j["specs"] = nlohmann::json::array();
  for (const CorrelatorSpec& spec : cs.specs) {
    nlohmann::json sj;
    sj["label"] = spec.label;
    sj["target"] = spec.target;
    sj["terms"] = nlohmann::json::array();
    for (const CorrelatorTerm& t : spec.terms) {
      nlohmann::json tj;
      tj["coeff"] = t.coeff;
      tj["roles"] = nlohmann::json::array();
      for (const PartyRole& r : t.roles) {
        switch (r.kind) {
          case PartyRole::Kind::Identity:
            tj["roles"].push_back({{"kind", "identity"}});
            break;
          case PartyRole::Kind::Observable:
            tj["roles"].push_back({{"kind", "observable"}, {"setting", r.setting}});
            break;
          case PartyRole::Kind::Projector:
            tj["roles"].push_back(
                {{"kind", "projector"}, {"setting", r.setting}, {"outcome", r.outcome}});
            break;
        }
      }
      sj["terms"].push_back(std::move(tj));
    }
    j["specs"].push_back(std::move(sj));
  }
  return j;
}

nlohmann::json check_report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["passed"] = report.passed;
  j["tol"] = report.tol;
  j["max_residual"] = report.max_residual;
  j["residuals"] = nlohmann::json::array();
  for (const ResidualEntry& e : report.residuals)
    j["residuals"].push_back({{"label", e.label}, {"residual", e.residual}});
  return j;
}

}  // namespace selftest
