#include "selftest/correlations.hpp"

#include "selftest/states.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace selftest {

namespace {

constexpr double kImagTol = 1e-10;

void check_question(const Strategy& s, const QuestionTuple& q) {
  if (static_cast<int>(q.x.size()) != s.n_parties())
    throw std::invalid_argument("question arity does not match party count");
  for (int p = 0; p < s.n_parties(); ++p)
    if (q.x[p] < 0 || q.x[p] >= s.parties[p].n_settings())
      throw std::invalid_argument("question setting out of range at party " + std::to_string(p));
}

Matrix role_operator(const Strategy& s, int party, const PartyRole& r) {
  const PartyMeasurements& pm = s.parties.at(party);
  switch (r.kind) {
    case PartyRole::Kind::Identity:
      return Matrix::Identity(s.dims[party], s.dims[party]);
    case PartyRole::Kind::Observable: {
      if (r.setting < 0 || r.setting >= pm.n_settings())
        throw std::invalid_argument("observable setting out of range at party " + std::to_string(party));
      return pvm_observable(pm.settings[r.setting]);
    }
    case PartyRole::Kind::Projector: {
      if (r.setting < 0 || r.setting >= pm.n_settings())
        throw std::invalid_argument("projector setting out of range at party " + std::to_string(party));
      const PVM& pvm = pm.settings[r.setting];
      if (r.outcome < 0 || r.outcome >= pvm.n_outcomes())
        throw std::invalid_argument("projector outcome out of range at party " + std::to_string(party));
      return pvm.outcomes[r.outcome];
    }
  }
  throw std::logic_error("unknown role kind");
}

// <psi|⊗ops|psi> for the pure part plus the white-noise trace part.
Complex term_value(const Strategy& s, const CorrelatorTerm& term) {
  if (static_cast<int>(term.roles.size()) != s.n_parties())
    throw std::invalid_argument("correlator term arity does not match party count");
  Vector v = s.state.amps;
  Complex trace_product(1.0, 0.0);
  for (int p = 0; p < s.n_parties(); ++p) {
    const PartyRole& r = term.roles[p];
    if (r.kind == PartyRole::Kind::Identity) {
      trace_product *= static_cast<double>(s.dims[p]);
      continue;
    }
    const Matrix op = role_operator(s, p, r);
    v = apply_local(op, p, s.dims, v);
    trace_product *= op.trace();
  }
  const Complex pure = s.state.amps.dot(v);
  if (s.noise_epsilon == 0.0) return term.coeff * pure;
  const double d_total = static_cast<double>(total_dim(s.dims));
  return term.coeff * ((1.0 - s.noise_epsilon) * pure + s.noise_epsilon * trace_product / d_total);
}

}  // namespace

double CorrelationTable::at(const std::vector<int>& outcomes) const {
  if (outcomes.size() != outcome_counts.size())
    throw std::invalid_argument("outcome tuple arity mismatch");
  long idx = 0;
  for (std::size_t p = 0; p < outcomes.size(); ++p) {
    if (outcomes[p] < 0 || outcomes[p] >= outcome_counts[p])
      throw std::invalid_argument("outcome out of range");
    idx = idx * outcome_counts[p] + outcomes[p];
  }
  return probs[idx];
}

PartyRole identity_role() { return PartyRole{}; }

PartyRole observable_role(int setting) {
  return PartyRole{PartyRole::Kind::Observable, setting, 0};
}

PartyRole projector_role(int setting, int outcome) {
  return PartyRole{PartyRole::Kind::Projector, setting, outcome};
}

CorrelationTable probability_table(const Strategy& s, const QuestionTuple& q) {
  check_question(s, q);
  const int n = s.n_parties();
  CorrelationTable table;
  table.question = q;
  table.outcome_counts.resize(n);
  long entries = 1;
  for (int p = 0; p < n; ++p) {
    table.outcome_counts[p] = s.parties[p].settings[q.x[p]].n_outcomes();
    entries *= table.outcome_counts[p];
  }
  table.probs.assign(entries, 0.0);

  const double eps = s.noise_epsilon;
  const double d_total = static_cast<double>(total_dim(s.dims));
  long flat = 0;
  std::function<void(int, const Vector&, double)> recurse = [&](int p, const Vector& v,
                                                                double trace_acc) {
    if (p == n) {
      table.probs[flat++] = (1.0 - eps) * v.squaredNorm() + eps * trace_acc / d_total;
      return;
    }
    const PVM& pvm = s.parties[p].settings[q.x[p]];
    for (int a = 0; a < pvm.n_outcomes(); ++a) {
      const Matrix& proj = pvm.outcomes[a];
      recurse(p + 1, apply_local(proj, p, s.dims, v), trace_acc * proj.trace().real());
    }
  };
  recurse(0, s.state.amps, 1.0);

  double sum = 0.0;
  for (double x : table.probs) {
    if (x < -1e-12) throw std::logic_error("probability table has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw std::logic_error("probability table does not sum to 1");
  return table;
}

double correlator(const Strategy& s, const CorrelatorTerm& term) {
  const Complex v = term_value(s, term);
  if (std::abs(v.imag()) > kImagTol)
    throw std::invalid_argument("correlator has a non-negligible imaginary part (malformed spec)");
  return v.real();
}

double correlator(const Strategy& s, const CorrelatorSpec& spec) {
  if (spec.terms.empty()) throw std::invalid_argument("correlator spec has no terms");
  bool nontrivial = false;
  for (const CorrelatorTerm& t : spec.terms)
    for (const PartyRole& r : t.roles) nontrivial = nontrivial || r.kind != PartyRole::Kind::Identity;
  if (!nontrivial)
    throw std::invalid_argument("correlator spec \"" + spec.label + "\" has only identity roles");
  Complex acc(0.0, 0.0);
  for (const CorrelatorTerm& t : spec.terms) acc += term_value(s, t);
  if (std::abs(acc.imag()) > kImagTol)
    throw std::invalid_argument("correlator \"" + spec.label +
                                "\" has a non-negligible imaginary part (malformed spec)");
  return acc.real();
}

namespace {

// The five tilted-CHSH terms on settings {0,1} of two parties, with optional
// prefix projections on other parties.
std::vector<CorrelatorTerm> tilted_terms(int n, const std::vector<OutcomeProjection>& projections,
                                         int party_a, int party_b, double alpha, ChshSigns signs) {
  std::vector<PartyRole> base(n, identity_role());
  for (const OutcomeProjection& pr : projections) {
    if (pr.party == party_a || pr.party == party_b)
      throw std::invalid_argument("projected parties overlap the Bell pair");
    if (base[pr.party].kind != PartyRole::Kind::Identity)
      throw std::invalid_argument("duplicate projection on party " + std::to_string(pr.party));
    base[pr.party] = projector_role(pr.setting, pr.outcome);
  }
  const double sa = signs.flip_a1 ? -1.0 : 1.0;
  const double sb = signs.flip_b1 ? -1.0 : 1.0;
  auto term = [&](double coeff, int xa, int xb, bool marginal = false) {
    CorrelatorTerm t;
    t.coeff = coeff;
    t.roles = base;
    t.roles[party_a] = observable_role(xa);
    if (!marginal) t.roles[party_b] = observable_role(xb);
    return t;
  };
  return {term(alpha, 0, 0, true), term(1.0, 0, 0), term(sb, 0, 1), term(sa, 1, 0),
          term(-sa * sb, 1, 1)};
}

}  // namespace

double tilted_chsh_value(const Strategy& s, int party_a, int party_b, double alpha,
                         ChshSigns signs) {
  return conditional_chsh(s, {}, party_a, party_b, alpha, signs);
}

double conditional_chsh(const Strategy& s, const std::vector<OutcomeProjection>& projections,
                        int party_a, int party_b, double alpha, ChshSigns signs) {
  const int n = s.n_parties();
  if (party_a == party_b) throw std::invalid_argument("Bell pair parties must be distinct");
  if (party_a < 0 || party_a >= n || party_b < 0 || party_b >= n)
    throw std::invalid_argument("Bell pair party out of range");
  for (int p : {party_a, party_b})
    if (s.parties[p].n_settings() < 2)
      throw std::invalid_argument("Bell pair party " + std::to_string(p) +
                                  " needs at least two settings");
  CorrelatorSpec spec;
  spec.label = "tilted-chsh";
  spec.terms = tilted_terms(n, projections, party_a, party_b, alpha, signs);
  return correlator(s, spec);
}

namespace {

std::string outcome_header(const std::vector<int>& counts) {
  // Flattened outcome tuples, party 0 most significant, cells like "0 1 0".
  long entries = 1;
  for (int c : counts) entries *= c;
  std::string header = "question";
  for (long i = 0; i < entries; ++i) {
    std::vector<int> tup(counts.size());
    long rem = i;
    for (int p = static_cast<int>(counts.size()) - 1; p >= 0; --p) {
      tup[p] = static_cast<int>(rem % counts[p]);
      rem /= counts[p];
    }
    header += ",";
    for (std::size_t p = 0; p < tup.size(); ++p)
      header += (p ? " " : "") + std::to_string(tup[p]);
  }
  return header;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string tables_to_csv(const std::vector<CorrelationTable>& tables) {
  if (tables.empty()) return "question\n";
  for (const CorrelationTable& t : tables)
    if (t.outcome_counts != tables[0].outcome_counts)
      throw std::invalid_argument("tables_to_csv: tables have differing outcome spaces");
  std::ostringstream out;
  out << outcome_header(tables[0].outcome_counts) << "\n";
  for (const CorrelationTable& t : tables) {
    for (std::size_t p = 0; p < t.question.x.size(); ++p)
      out << (p ? " " : "") << t.question.x[p];
    for (double v : t.probs) out << "," << fmt17(v);
    out << "\n";
  }
  return out.str();
}

nlohmann::json tables_to_json(const std::vector<CorrelationTable>& tables) {
  nlohmann::json j;
  j["tables"] = nlohmann::json::array();
  for (const CorrelationTable& t : tables) {
    nlohmann::json tj;
    tj["question"] = t.question.x;
    tj["outcome_counts"] = t.outcome_counts;
    tj["probs"] = t.probs;
    j["tables"].push_back(std::move(tj));
  }
  return j;
}

std::vector<QuestionTuple> schmidt_plain_questions(int n) {
  std::vector<QuestionTuple> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    QuestionTuple q;
    q.x.resize(n);
    for (int p = 0; p < n; ++p) q.x[p] = static_cast<int>((mask >> (n - 1 - p)) & 1);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QuestionTuple> schmidt_shifted_questions(int n) {
  std::vector<QuestionTuple> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    QuestionTuple q;
    q.x.resize(n);
    for (int p = 0; p < n; ++p) {
      const int bit = static_cast<int>((mask >> (n - 1 - p)) & 1);
      q.x[p] = (p == n - 1) ? 2 + bit : 2 * bit;  // {0,2} for i<n-1, {2,3} for party n-1
    }
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

BlockStructureReport block_structure_check(const std::map<std::vector<int>, CorrelationTable>& tables,
                                           const SchmidtCoefficients& c, double tol) {
  if (tables.empty()) throw std::invalid_argument("block_structure_check: no tables");
  const int n = static_cast<int>(tables.begin()->first.size());
  const int d = c.d();
  const bool odd = (d % 2 != 0);
  const int n_plain = odd ? (d - 1) / 2 : d / 2;
  const int n_shift = odd ? (d - 1) / 2 : d / 2;

  // Reference GHZ strategies at the block angles; theta may exceed pi/4 here.
  std::map<long long, CorrelationTable> ref_cache;
  auto ref_table = [&](double theta, const std::vector<int>& y, long key) -> const CorrelationTable& {
    long long cache_key = key * (1LL << (2 * n));
    for (int b : y) cache_key = cache_key * 2 + b;
    auto it = ref_cache.find(cache_key);
    if (it != ref_cache.end()) return it->second;
    Strategy ref;
    ref.state = detail::ghz_state_unchecked(n, theta);
    ref.dims = ref.state.dims;
    ref.parties = ideal_ghz_measurements(n, theta);
    QuestionTuple q;
    q.x = y;
    return ref_cache.emplace(cache_key, probability_table(ref, q)).first->second;
  };

  BlockStructureReport report;
  report.tol = tol;
  auto note = [&](const std::string& label, double residual) {
    report.entries.push_back({label, residual});
    if (residual > report.max_residual) report.max_residual = residual;
  };

  auto fetch = [&](const std::vector<int>& q) -> const CorrelationTable& {
    auto it = tables.find(q);
    if (it == tables.end())
      throw std::invalid_argument("block_structure_check: missing table for question " + join_ints(q));
    if (static_cast<int>(it->second.question.x.size()) != n ||
        it->second.outcome_counts != std::vector<int>(n, d))
      throw std::invalid_argument("block_structure_check: table shape mismatch at question " +
                                  join_ints(q));
    return it->second;
  };

  // One pass per question: every entry is either inside some block, the
  // odd-d rank-1 corner, or expected to vanish.
  auto scan = [&](const QuestionTuple& question, bool shifted) {
    const CorrelationTable& table = fetch(question.x);
    const int blocks = shifted ? n_shift : n_plain;
    std::vector<int> y(n);
    for (int p = 0; p < n; ++p)
      y[p] = (p == n - 1) ? (shifted ? question.x[p] - 2 : question.x[p])
                          : (shifted ? question.x[p] / 2 : question.x[p]);

    std::vector<double> weight(blocks);
    std::vector<const CorrelationTable*> refs(blocks);
    for (int m = 0; m < blocks; ++m) {
      const int lo = shifted ? (2 * m + 1) % d : 2 * m;
      const int hi = shifted ? (2 * m + 2) % d : 2 * m + 1;
      weight[m] = c.c[lo] * c.c[lo] + c.c[hi] * c.c[hi];
      const double theta = std::atan(c.c[hi] / c.c[lo]);
      refs[m] = &ref_table(theta, y, shifted * (d + 1) + m);
    }

    double off_max = 0.0;
    std::vector<double> block_max(blocks, 0.0);
    double corner_res = -1.0;
    std::vector<int> a(n, 0);
    for (long flat = 0; flat < table.n_entries(); ++flat) {
      long rem = flat;
      for (int p = n - 1; p >= 0; --p) {
        a[p] = static_cast<int>(rem % d);
        rem /= d;
      }
      // Which block holds this outcome tuple, if any.
      int block = -1;
      for (int m = 0; m < blocks && block < 0; ++m) {
        const int lo = shifted ? (2 * m + 1) % d : 2 * m;
        const int hi = shifted ? (2 * m + 2) % d : 2 * m + 1;
        bool inside = true;
        for (int p = 0; p < n && inside; ++p) inside = (a[p] == lo || a[p] == hi);
        if (inside) block = m;
      }
      const double actual = table.probs[flat];
      if (block >= 0) {
        const int lo = shifted ? (2 * block + 1) % d : 2 * block;
        std::vector<int> bits(n);
        for (int p = 0; p < n; ++p) bits[p] = (a[p] == lo) ? 0 : 1;
        const double expected = weight[block] * refs[block]->at(bits);
        block_max[block] = std::max(block_max[block], std::abs(actual - expected));
      } else if (odd) {
        const int pad = shifted ? 0 : d - 1;
        bool corner = true;
        for (int p = 0; p < n && corner; ++p) corner = (a[p] == pad);
        if (corner) {
          corner_res = std::abs(actual - c.c[pad] * c.c[pad]);
          continue;
        }
        off_max = std::max(off_max, std::abs(actual));
      } else {
        off_max = std::max(off_max, std::abs(actual));
      }
    }

    const std::string qlabel = (shifted ? "shifted q=" : "plain q=") + join_ints(question.x);
    note(qlabel + "|off-block", off_max);
    for (int m = 0; m < blocks; ++m) note(qlabel + "|block " + std::to_string(m), block_max[m]);
    if (corner_res >= 0.0) note(qlabel + "|corner", corner_res);
  };

  for (const QuestionTuple& q : schmidt_plain_questions(n)) scan(q, false);
  for (const QuestionTuple& q : schmidt_shifted_questions(n)) scan(q, true);

  report.passed = report.max_residual <= tol;
  return report;
}

}  // namespace selftest
