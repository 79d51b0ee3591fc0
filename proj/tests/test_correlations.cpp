#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "selftest/conditions.hpp"
#include "selftest/correlations.hpp"
#include "selftest/strategy.hpp"

#include <cmath>
#include <sstream>

using namespace selftest;

namespace {
constexpr double pi = 3.14159265358979323846;

Strategy random_strategy(int max_total_dim, oracles::Rng& rng) {
  Strategy s;
  const int n = rng.uniform_int(2, 3);
  long total = 1;
  for (int p = 0; p < n; ++p) {
    int d = rng.uniform_int(2, 4);
    while (total * d > max_total_dim) d = 2;
    total *= d;
    s.dims.push_back(d);
  }
  s.state = StateVector(s.dims, oracles::random_state(total, rng));
  s.parties.resize(n);
  for (int p = 0; p < n; ++p) {
    const int settings = rng.uniform_int(2, 3);
    for (int x = 0; x < settings; ++x) {
      const int outcomes = rng.uniform_int(2, s.dims[p]);
      s.parties[p].settings.push_back(
          oracles::random_pvm(s.dims[p], oracles::random_ranks(s.dims[p], outcomes, rng), rng));
    }
  }
  return s;
}

// Expands a product term into probability-table entries: identity weights 1,
// observables weight ±1 by outcome, projectors select one outcome.
double term_via_table(const Strategy& s, const CorrelatorTerm& term) {
  QuestionTuple q;
  q.x.assign(s.n_parties(), 0);
  for (int p = 0; p < s.n_parties(); ++p)
    if (term.roles[p].kind != PartyRole::Kind::Identity) q.x[p] = term.roles[p].setting;
  const CorrelationTable table = probability_table(s, q);
  double acc = 0.0;
  for (long flat = 0; flat < table.n_entries(); ++flat) {
    long rem = flat;
    std::vector<int> a(s.n_parties());
    for (int p = s.n_parties() - 1; p >= 0; --p) {
      a[p] = static_cast<int>(rem % table.outcome_counts[p]);
      rem /= table.outcome_counts[p];
    }
    double w = 1.0;
    for (int p = 0; p < s.n_parties(); ++p) {
      switch (term.roles[p].kind) {
        case PartyRole::Kind::Identity:
          break;
        case PartyRole::Kind::Observable:
          w *= (a[p] == 0) ? 1.0 : -1.0;
          break;
        case PartyRole::Kind::Projector:
          if (a[p] != term.roles[p].outcome) w = 0.0;
          break;
      }
      if (w == 0.0) break;
    }
    acc += w * table.probs[flat];
  }
  return term.coeff * acc;
}

// State with {sigma_z, sigma_x} settings on every party.
Strategy pauli_strategy(const StateVector& psi) {
  Strategy s;
  s.dims = psi.dims;
  s.state = psi;
  s.parties.resize(psi.n_parties());
  for (int p = 0; p < psi.n_parties(); ++p)
    s.parties[p].settings = {pvm_from_binary(BinaryObservable(pauli_z())),
                             pvm_from_binary(BinaryObservable(pauli_x()))};
  return s;
}

}  // namespace

TEST_CASE("probability_table basics") {
  const Strategy bell = pauli_strategy(ghz_state(2, pi / 4));
  const CorrelationTable t = probability_table(bell, QuestionTuple{{0, 0}});
  CHECK(t.at({0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.at({1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(t.at({0, 1})) <= 1e-14);
  CHECK(std::abs(t.at({1, 0})) <= 1e-14);

  const double theta = 0.5;
  const Strategy ghz3 = pauli_strategy(ghz_state(3, theta));
  const CorrelationTable t3 = probability_table(ghz3, QuestionTuple{{0, 0, 0}});
  CHECK(t3.at({0, 0, 0}) == doctest::Approx(std::cos(theta) * std::cos(theta)).epsilon(1e-12));
  CHECK(t3.at({1, 1, 1}) == doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-12));
  for (long flat = 1; flat < 7; ++flat) CHECK(std::abs(t3.probs[flat]) <= 1e-14);

  CHECK_THROWS_AS(probability_table(bell, QuestionTuple{{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(probability_table(bell, QuestionTuple{{0}}), std::invalid_argument);
}

TEST_CASE("probability_table matches the contraction oracle") {
  oracles::Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    const Strategy s = random_strategy(48, rng);
    QuestionTuple q;
    for (int p = 0; p < s.n_parties(); ++p)
      q.x.push_back(rng.uniform_int(0, s.parties[p].n_settings() - 1));
    const CorrelationTable table = probability_table(s, q);
    for (long flat = 0; flat < table.n_entries(); ++flat) {
      long rem = flat;
      std::vector<Matrix> ops(s.n_parties());
      for (int p = s.n_parties() - 1; p >= 0; --p) {
        ops[p] = s.parties[p].settings[q.x[p]].outcomes[rem % table.outcome_counts[p]];
        rem /= table.outcome_counts[p];
      }
      const Complex expected = oracles::product_expectation(s.state.amps, s.dims, ops);
      CHECK(std::abs(table.probs[flat] - expected.real()) <= 1e-12);
    }
  }
}

TEST_CASE("correlator basics and the table-summation oracle") {
  const Strategy bell = pauli_strategy(ghz_state(2, pi / 4));
  CorrelatorTerm zz{1.0, {observable_role(0), observable_role(0)}};
  CHECK(correlator(bell, zz) == doctest::Approx(1.0).epsilon(1e-12));

  const double theta = 0.4;
  const Strategy ghz3 = ideal_strategy(GhzParams{3, theta});
  CorrelatorSpec marginal{"marginal", 0.0, {CorrelatorTerm{1.0, {projector_role(0, 0), identity_role(), identity_role()}}}};
  CHECK(correlator(ghz3, marginal) ==
        doctest::Approx(std::cos(theta) * std::cos(theta)).epsilon(1e-12));

  oracles::Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const Strategy s = random_strategy(48, rng);
    CorrelatorTerm term;
    term.coeff = rng.uniform() * 2.0 - 1.0;
    for (int p = 0; p < s.n_parties(); ++p) {
      const int x = rng.uniform_int(0, s.parties[p].n_settings() - 1);
      const int kind = rng.uniform_int(0, 2);
      if (kind == 0)
        term.roles.push_back(identity_role());
      else if (kind == 1 && s.parties[p].settings[x].n_outcomes() == 2)
        term.roles.push_back(observable_role(x));
      else
        term.roles.push_back(
            projector_role(x, rng.uniform_int(0, s.parties[p].settings[x].n_outcomes() - 1)));
    }
    CHECK(correlator(s, term) == doctest::Approx(term_via_table(s, term)).epsilon(1e-11));
  }
}

TEST_CASE("tables are non-signalling") {
  oracles::Rng rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    const Strategy s = random_strategy(32, rng);
    // Marginal of party 0 must not depend on the other parties' settings.
    for (int x0 = 0; x0 < s.parties[0].n_settings(); ++x0) {
      std::vector<double> reference;
      std::vector<int> others(s.n_parties() - 1, 0);
      for (int sweep = 0; sweep < 2; ++sweep) {
        QuestionTuple q;
        q.x.push_back(x0);
        for (int p = 1; p < s.n_parties(); ++p)
          q.x.push_back(sweep == 0 ? 0 : s.parties[p].n_settings() - 1);
        const CorrelationTable t = probability_table(s, q);
        std::vector<double> marginal(t.outcome_counts[0], 0.0);
        for (long flat = 0; flat < t.n_entries(); ++flat)
          marginal[flat / (t.n_entries() / t.outcome_counts[0])] += t.probs[flat];
        if (sweep == 0)
          reference = marginal;
        else
          for (std::size_t a = 0; a < marginal.size(); ++a)
            CHECK(std::abs(marginal[a] - reference[a]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("tilted_chsh_value") {
  const Strategy chsh = ideal_strategy(GhzParams{2, pi / 4});
  CHECK(tilted_chsh_value(chsh, 0, 1, 0.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  const double theta = pi / 6;
  const double alpha = alpha_from_theta(theta);
  const Strategy tilted = ideal_strategy(GhzParams{2, theta});
  CHECK(tilted_chsh_value(tilted, 0, 1, alpha) ==
        doctest::Approx(std::sqrt(8.0 + 2.0 * alpha * alpha)).epsilon(1e-11));

  // Deterministic classical strategy: value bounded by 2 + alpha.
  Strategy classical;
  classical.dims = {2, 2};
  Vector v = Vector::Zero(4);
  v[0] = 1.0;
  classical.state = StateVector(classical.dims, v);
  const PVM zpvm = pvm_from_binary(BinaryObservable(pauli_z()));
  classical.parties.resize(2);
  classical.parties[0].settings = {zpvm, zpvm};
  classical.parties[1].settings = {zpvm, zpvm};
  for (double a : {0.0, 0.5, 1.0})
    CHECK(tilted_chsh_value(classical, 0, 1, a) <= 2.0 + a + 1e-12);
}

TEST_CASE("quantum strategies respect the tilted bound") {
  oracles::Rng rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    Strategy s;
    s.dims = {rng.uniform_int(2, 3), rng.uniform_int(2, 3)};
    s.state = StateVector(s.dims, oracles::random_state(total_dim(s.dims), rng));
    s.parties.resize(2);
    for (int p = 0; p < 2; ++p)
      for (int x = 0; x < 2; ++x)
        s.parties[p].settings.push_back(
            oracles::random_pvm(s.dims[p], oracles::random_ranks(s.dims[p], 2, rng), rng));
    for (double theta : {pi / 4, pi / 6, pi / 12}) {
      const double alpha = alpha_from_theta(theta);
      CHECK(tilted_chsh_value(s, 0, 1, alpha) <=
            std::sqrt(8.0 + 2.0 * alpha * alpha) + 1e-9);
    }
  }
}

TEST_CASE("the plain-theta party-N angle does not reach the maximum") {
  const double theta = pi / 6;
  const double alpha = alpha_from_theta(theta);
  Strategy wrong;
  wrong.state = ghz_state(2, theta);
  wrong.dims = wrong.state.dims;
  wrong.parties = ideal_ghz_measurements(2, theta, GhzPartyNAngle::Theta);
  const double value = tilted_chsh_value(wrong, 0, 1, alpha);
  CHECK(value < std::sqrt(8.0 + 2.0 * alpha * alpha) - 1e-3);
}

TEST_CASE("conditional_chsh") {
  const double theta = 0.55;
  const double alpha = alpha_from_theta(theta);
  const Strategy ghz4 = ideal_strategy(GhzParams{4, theta});
  const double expected = std::sqrt(8.0 + 2.0 * alpha * alpha) / 4.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const ChshSigns signs{(a + b) % 2 == 1, false};
      const double value = conditional_chsh(
          ghz4, {{0, 1, a}, {1, 1, b}}, 2, 3, alpha, signs);
      CHECK(value == doctest::Approx(expected).epsilon(1e-11));
    }

  const Strategy tilted = ideal_strategy(GhzParams{2, theta});
  CHECK(conditional_chsh(tilted, {}, 0, 1, alpha) ==
        doctest::Approx(tilted_chsh_value(tilted, 0, 1, alpha)).epsilon(1e-13));

  CHECK_THROWS_AS(conditional_chsh(ghz4, {{2, 1, 0}}, 2, 3, alpha), std::invalid_argument);
}

TEST_CASE("projector-only correlators are probabilities") {
  oracles::Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const Strategy s = random_strategy(36, rng);
    CorrelatorTerm term;
    term.coeff = 1.0;
    for (int p = 0; p < s.n_parties(); ++p) {
      const int x = rng.uniform_int(0, s.parties[p].n_settings() - 1);
      term.roles.push_back(
          projector_role(x, rng.uniform_int(0, s.parties[p].settings[x].n_outcomes() - 1)));
    }
    const double v = correlator(s, term);
    CHECK(v >= -1e-10);
    CHECK(v <= 1.0 + 1e-10);
  }
}

TEST_CASE("block_structure_check on the ideal Schmidt correlation") {
  oracles::Rng rng(404);
  std::vector<double> c4{0.62, 0.33, 0.49, 0.5};
  double norm2 = 0.0;
  for (double x : c4) norm2 += x * x;
  for (double& x : c4) x /= std::sqrt(norm2);
  const SchmidtCoefficients coeffs(c4);
  const Strategy s = ideal_strategy(SchmidtParams{coeffs, 3});

  std::map<std::vector<int>, CorrelationTable> tables;
  for (const QuestionTuple& q : schmidt_plain_questions(3))
    tables.emplace(q.x, probability_table(s, q));
  for (const QuestionTuple& q : schmidt_shifted_questions(3))
    tables.emplace(q.x, probability_table(s, q));

  const BlockStructureReport report = block_structure_check(tables, coeffs, 1e-10);
  CHECK(report.passed);
  CHECK(report.max_residual <= 1e-10);

  // White noise breaks the block structure by roughly its weight.
  const Strategy noisy = noise_mix(s, 0.01);
  std::map<std::vector<int>, CorrelationTable> noisy_tables;
  for (const QuestionTuple& q : schmidt_plain_questions(3))
    noisy_tables.emplace(q.x, probability_table(noisy, q));
  for (const QuestionTuple& q : schmidt_shifted_questions(3))
    noisy_tables.emplace(q.x, probability_table(noisy, q));
  const BlockStructureReport bad = block_structure_check(noisy_tables, coeffs, 1e-10);
  CHECK(!bad.passed);
  CHECK(bad.max_residual > 1e-4);
}

TEST_CASE("block check at d=2 is the GHZ table comparison") {
  const double theta = 0.72;  // atan(c1/c0) with c = (cos, sin)
  const SchmidtCoefficients c({std::cos(theta), std::sin(theta)});
  const Strategy s = ideal_strategy(SchmidtParams{c, 3});
  const CheckReport report = schmidt_condition_check(s, c, 1e-10);
  CHECK(report.passed);
}

TEST_CASE("table export") {
  const Strategy bell = ideal_strategy(GhzParams{2, pi / 4});
  std::vector<CorrelationTable> tables;
  tables.push_back(probability_table(bell, QuestionTuple{{0, 0}}));
  tables.push_back(probability_table(bell, QuestionTuple{{0, 1}}));

  const std::string csv = tables_to_csv(tables);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "question,0 0,0 1,1 0,1 1");
  std::getline(lines, row);
  CHECK(row.substr(0, 4) == "0 0,");
  // Re-parse the first data row; 17 significant digits round-trip exactly.
  std::istringstream cells(row.substr(4));
  std::string cell;
  for (long flat = 0; std::getline(cells, cell, ','); ++flat)
    CHECK(std::stod(cell) == tables[0].probs[flat]);

  const nlohmann::json j = tables_to_json(tables);
  CHECK(j.at("tables").size() == 2);
  for (long flat = 0; flat < tables[0].n_entries(); ++flat)
    CHECK(j.at("tables").at(0).at("probs").at(flat).get<double>() == tables[0].probs[flat]);
}
