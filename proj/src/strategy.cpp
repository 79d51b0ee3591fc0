#include "selftest/strategy.hpp"

#include "selftest/conditions.hpp"

#include <cmath>
#include <stdexcept>

namespace selftest {

std::string family_name(Family f) {
  switch (f) {
    case Family::GHZ: return "ghz";
    case Family::Schmidt: return "schmidt";
    case Family::W: return "w";
    case Family::Dicke: return "dicke";
    case Family::Graph: return "graph";
  }
  throw std::logic_error("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "ghz") return Family::GHZ;
  if (name == "schmidt") return Family::Schmidt;
  if (name == "w") return Family::W;
  if (name == "dicke") return Family::Dicke;
  if (name == "graph") return Family::Graph;
  throw std::invalid_argument("unknown family \"" + name + "\"");
}

Family family_of(const FamilyParams& p) {
  struct Visitor {
    Family operator()(const GhzParams&) const { return Family::GHZ; }
    Family operator()(const SchmidtParams&) const { return Family::Schmidt; }
    Family operator()(const WParams&) const { return Family::W; }
    Family operator()(const DickeParams&) const { return Family::Dicke; }
    Family operator()(const GraphParams&) const { return Family::Graph; }
  };
  return std::visit(Visitor{}, p);
}

std::string params_label(const FamilyParams& p) {
  struct Visitor {
    std::string operator()(const GhzParams& g) const {
      return "ghz(n=" + std::to_string(g.n) + ",theta=" + std::to_string(g.theta) + ")";
    }
    std::string operator()(const SchmidtParams& s) const {
      return "schmidt(n=" + std::to_string(s.n) + ",d=" + std::to_string(s.c.d()) + ")";
    }
    std::string operator()(const WParams& w) const { return "w(n=" + std::to_string(w.n) + ")"; }
    std::string operator()(const DickeParams& d) const {
      return "dicke(n=" + std::to_string(d.n) + ",k=" + std::to_string(d.k) + ")";
    }
    std::string operator()(const GraphParams& g) const {
      return "graph(n=" + std::to_string(g.g.n_vertices) +
             ",edges=" + std::to_string(g.g.edges.size()) + ")";
    }
  };
  return std::visit(Visitor{}, p);
}

void Strategy::validate(double tol) const {
  if (dims.size() != parties.size())
    throw std::invalid_argument("strategy: party count mismatch between dims and measurements");
  if (state.dims != dims) throw std::invalid_argument("strategy: state dims do not match party dims");
  if (noise_epsilon < 0.0 || noise_epsilon > 1.0)
    throw std::invalid_argument("strategy: noise epsilon out of [0,1]");
  for (std::size_t p = 0; p < parties.size(); ++p) {
    if (parties[p].settings.empty())
      throw std::invalid_argument("strategy: party " + std::to_string(p) + " has no settings");
    for (const PVM& pvm : parties[p].settings) {
      if (pvm.dim() != dims[p])
        throw std::invalid_argument("strategy: measurement dimension mismatch at party " +
                                    std::to_string(p));
      PVM revalidated(pvm.outcomes, tol);  // throws with the failing invariant
    }
  }
}

Strategy ideal_strategy(const FamilyParams& params) {
  Strategy s;
  struct Builder {
    Strategy& s;
    void operator()(const GhzParams& p) {
      s.state = ghz_state(p.n, p.theta);
      s.parties = ideal_ghz_measurements(p.n, p.theta);
    }
    void operator()(const SchmidtParams& p) {
      s.state = schmidt_state(p.c, p.n);
      s.parties = ideal_schmidt_measurements(p.c, p.n);
    }
    void operator()(const WParams& p) {
      s.state = x_w_state(p.n);
      s.parties = ideal_w_measurements(p.n);
    }
    void operator()(const DickeParams& p) {
      s.state = x_dicke_state(p.n, p.k);
      s.parties = ideal_w_measurements(p.n);
    }
    void operator()(const GraphParams& p) {
      s.state = graph_state(p.g);
      s.parties = ideal_graph_measurements(p.g);
    }
  };
  std::visit(Builder{s}, params);
  s.dims = s.state.dims;
  s.family = params;
  s.validate();
  CheckReport report = family_condition_check(s, params, 1e-9);
  if (!report.passed)
    throw std::logic_error("ideal_strategy: " + params_label(params) +
                           " failed its own condition set (max residual " +
                           std::to_string(report.max_residual) + ")");
  return s;
}

namespace detail {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double gaussian(std::uint64_t& state) {
  const double u1 = uniform01(state);
  const double u2 = uniform01(state);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

Matrix seeded_unitary(int dim, std::uint64_t seed) {
  std::uint64_t state = seed ^ 0xda3e39cb94b95bdbULL;
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gaussian(state), gaussian(state));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  // Fix the phase of each column so the result does not depend on QR details.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace detail

Strategy adversarial_embed(const Strategy& s, const AdversarialTransform& t) {
  const int n = s.n_parties();
  if (static_cast<int>(t.junk_dims.size()) != n)
    throw std::invalid_argument("adversarial_embed: junk_dims size must match party count");
  Dims new_dims(n);
  long total = 1;
  Dims junk_dims = t.junk_dims;
  for (int p = 0; p < n; ++p) {
    if (junk_dims[p] < 1) throw std::invalid_argument("adversarial_embed: junk dims must be >= 1");
    new_dims[p] = s.dims[p] * junk_dims[p];
    total *= new_dims[p];
    if (total > kEmbedDimGuard)
      throw std::invalid_argument("adversarial_embed: total dimension exceeds guard (" +
                                  std::to_string(kEmbedDimGuard) + ")");
  }

  long junk_total = 1;
  for (int p = 0; p < n; ++p) junk_total *= junk_dims[p];
  Vector junk = Vector::Zero(junk_total);
  if (t.junk_state) {
    if (t.junk_state->size() != junk_total)
      throw std::invalid_argument("adversarial_embed: junk state length mismatch");
    junk = *t.junk_state;
    if (std::abs(junk.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("adversarial_embed: junk state is not normalized");
  } else {
    junk[0] = 1.0;
  }

  // Interleave: party p's local index is orig_p * junk_p + junk index.
  Vector amps = Vector::Zero(total);
  std::vector<long> orig_stride(n, 1), junk_stride(n, 1), new_stride(n, 1);
  for (int p = n - 2; p >= 0; --p) {
    orig_stride[p] = orig_stride[p + 1] * s.dims[p + 1];
    junk_stride[p] = junk_stride[p + 1] * junk_dims[p + 1];
    new_stride[p] = new_stride[p + 1] * new_dims[p + 1];
  }
  for (long a = 0; a < s.state.dim(); ++a) {
    if (s.state.amps[a] == Complex(0.0, 0.0)) continue;
    for (long b = 0; b < junk_total; ++b) {
      if (junk[b] == Complex(0.0, 0.0)) continue;
      long idx = 0;
      for (int p = 0; p < n; ++p) {
        const long ap = (a / orig_stride[p]) % s.dims[p];
        const long bp = (b / junk_stride[p]) % junk_dims[p];
        idx += (ap * junk_dims[p] + bp) * new_stride[p];
      }
      amps[idx] = s.state.amps[a] * junk[b];
    }
  }

  std::vector<Matrix> unitaries(n);
  std::uint64_t mix = t.seed;
  for (int p = 0; p < n; ++p) {
    mix = mix * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
    unitaries[p] = detail::seeded_unitary(new_dims[p], mix);
    amps = apply_local(unitaries[p], p, new_dims, amps);
  }

  Strategy out;
  out.dims = new_dims;
  out.state = StateVector(new_dims, std::move(amps));
  out.noise_epsilon = s.noise_epsilon;
  out.family = s.family;
  out.parties.resize(n);
  for (int p = 0; p < n; ++p) {
    const Matrix id_junk = Matrix::Identity(junk_dims[p], junk_dims[p]);
    for (const PVM& pvm : s.parties[p].settings) {
      std::vector<Matrix> outcomes;
      outcomes.reserve(pvm.outcomes.size());
      for (const Matrix& proj : pvm.outcomes)
        outcomes.push_back(unitaries[p] * kron(proj, id_junk) * unitaries[p].adjoint());
      out.parties[p].settings.emplace_back(std::move(outcomes));
    }
  }
  return out;
}

Strategy noise_mix(const Strategy& s, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("noise_mix: epsilon out of [0,1]");
  Strategy out = s;
  out.noise_epsilon = epsilon;
  return out;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.contains("re")) throw std::invalid_argument("strategy json: missing field \"" + where + ".re\"");
  if (!j.contains("im")) throw std::invalid_argument("strategy json: missing field \"" + where + ".im\"");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || re.empty() || re.size() != im.size())
    throw std::invalid_argument("strategy json: malformed matrix at " + where);
  const std::size_t rows = re.size(), cols = re.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (re.at(i).size() != cols || im.at(i).size() != cols)
      throw std::invalid_argument("strategy json: ragged matrix at " + where);
    for (std::size_t j2 = 0; j2 < cols; ++j2)
      m(i, j2) = Complex(re.at(i).at(j2).get<double>(), im.at(i).at(j2).get<double>());
  }
  return m;
}

}  // namespace

nlohmann::json family_params_to_json(const FamilyParams& p) {
  nlohmann::json j;
  j["family"] = family_name(family_of(p));
  struct Visitor {
    nlohmann::json& j;
    void operator()(const GhzParams& g) const {
      j["n"] = g.n;
      j["theta"] = g.theta;
    }
    void operator()(const SchmidtParams& s) const {
      j["n"] = s.n;
      j["coeffs"] = s.c.c;
    }
    void operator()(const WParams& w) const { j["n"] = w.n; }
    void operator()(const DickeParams& d) const {
      j["n"] = d.n;
      j["k"] = d.k;
    }
    void operator()(const GraphParams& g) const { j["graph"] = graph_to_json(g.g); }
  };
  std::visit(Visitor{j}, p);
  return j;
}

FamilyParams family_params_from_json(const nlohmann::json& j) {
  if (!j.contains("family")) throw std::invalid_argument("params json: missing field \"family\"");
  const Family f = family_from_name(j.at("family").get<std::string>());
  auto need = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("params json: missing field \"") + field + "\"");
    return j.at(field);
  };
  switch (f) {
    case Family::GHZ:
      return GhzParams{need("n").get<int>(), need("theta").get<double>()};
    case Family::Schmidt:
      return SchmidtParams{SchmidtCoefficients(need("coeffs").get<std::vector<double>>()),
                           need("n").get<int>()};
    case Family::W:
      return WParams{need("n").get<int>()};
    case Family::Dicke:
      return DickeParams{need("n").get<int>(), need("k").get<int>()};
    case Family::Graph:
      return GraphParams{graph_from_json(need("graph"))};
  }
  throw std::logic_error("unreachable");
}

nlohmann::json strategy_to_json(const Strategy& s) {
  nlohmann::json j;
  j["dims"] = s.dims;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (long i = 0; i < s.state.dim(); ++i) {
    re.push_back(s.state.amps[i].real());
    im.push_back(s.state.amps[i].imag());
  }
  j["state"] = {{"re", std::move(re)}, {"im", std::move(im)}};
  j["parties"] = nlohmann::json::array();
  for (const PartyMeasurements& pm : s.parties) {
    nlohmann::json settings = nlohmann::json::array();
    for (const PVM& pvm : pm.settings) {
      nlohmann::json projectors = nlohmann::json::array();
      for (const Matrix& p : pvm.outcomes) projectors.push_back(matrix_to_json(p));
      settings.push_back({{"projectors", std::move(projectors)}});
    }
    j["parties"].push_back({{"settings", std::move(settings)}});
  }
  if (s.noise_epsilon != 0.0) j["noise_epsilon"] = s.noise_epsilon;
  if (s.family) j["params"] = family_params_to_json(*s.family);
  return j;
}

Strategy strategy_from_json(const nlohmann::json& j) {
  for (const char* field : {"dims", "state", "parties"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("strategy json: missing field \"") + field + "\"");
  Strategy s;
  s.dims = j.at("dims").get<Dims>();
  const auto& st = j.at("state");
  if (!st.contains("re")) throw std::invalid_argument("strategy json: missing field \"state.re\"");
  if (!st.contains("im")) throw std::invalid_argument("strategy json: missing field \"state.im\"");
  const auto re = st.at("re").get<std::vector<double>>();
  const auto im = st.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) throw std::invalid_argument("strategy json: state re/im length mismatch");
  Vector amps(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) amps[i] = Complex(re[i], im[i]);
  s.state = StateVector(s.dims, std::move(amps), 1e-9);
  for (const auto& pj : j.at("parties")) {
    if (!pj.contains("settings"))
      throw std::invalid_argument("strategy json: missing field \"parties[].settings\"");
    PartyMeasurements pm;
    for (const auto& sj : pj.at("settings")) {
      if (!sj.contains("projectors"))
        throw std::invalid_argument("strategy json: missing field \"settings[].projectors\"");
      std::vector<Matrix> outcomes;
      for (const auto& mj : sj.at("projectors"))
        outcomes.push_back(matrix_from_json(mj, "projectors[]"));
      pm.settings.emplace_back(std::move(outcomes), 1e-8);
    }
    s.parties.push_back(std::move(pm));
  }
  if (j.contains("noise_epsilon")) s.noise_epsilon = j.at("noise_epsilon").get<double>();
  if (j.contains("params")) s.family = family_params_from_json(j.at("params"));
  s.validate(1e-8);
  return s;
}

std::string serialize(const Strategy& s) { return strategy_to_json(s).dump(2) + "\n"; }

Strategy deserialize(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("strategy json: parse error: ") + e.what());
  }
  return strategy_from_json(j);
}

}  // namespace selftest
