// Command-line driver: generate ideal strategies, verify strategy files,
// export correlation tables, and produce adversarially embedded variants.
//
// Exit codes: 0 verification passed / command succeeded, 1 verification
// failure, 2 usage or input error.

#include "selftest/correlations.hpp"
#include "selftest/pipeline.hpp"
#include "selftest/strategy.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace selftest;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write \"" + out_path + "\"");
  out << content;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

// "path:4", "ring:5", "star:4" or a JSON graph file.
Graph load_graph(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const int n = std::stoi(spec.substr(colon + 1));
    if (kind == "path") return path_graph(n);
    if (kind == "ring") return ring_graph(n);
    if (kind == "star") return star_graph(n);
  }
  return graph_from_json(nlohmann::json::parse(read_file(spec)));
}

struct FamilyFlags {
  std::string family;
  int n = 0;
  double theta = 0.0;
  int k = -1;
  int d = 0;
  std::string coeffs;
  std::string graph;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f, bool require_family) {
  auto* fam = cmd->add_option("--family", f.family, "ghz | schmidt | w | dicke | graph");
  if (require_family) fam->required();
  cmd->add_option("--n", f.n, "party count");
  cmd->add_option("--theta", f.theta, "GHZ angle in (0, pi/4]");
  cmd->add_option("--k", f.k, "Dicke excitation count");
  cmd->add_option("--d", f.d, "local dimension (consistency check for schmidt)");
  cmd->add_option("--coeffs", f.coeffs, "comma-separated Schmidt coefficients");
  cmd->add_option("--graph", f.graph, "graph JSON file, or path:N / ring:N / star:N");
}

FamilyParams params_from_flags(const FamilyFlags& f) {
  const Family family = family_from_name(f.family);
  switch (family) {
    case Family::GHZ:
      if (f.n < 2) throw std::invalid_argument("ghz needs --n >= 2");
      return GhzParams{f.n, f.theta};
    case Family::Schmidt: {
      if (f.coeffs.empty()) throw std::invalid_argument("schmidt needs --coeffs");
      std::vector<double> c = parse_doubles(f.coeffs);
      double norm2 = 0.0;
      for (double x : c) norm2 += x * x;
      if (norm2 <= 0.0) throw std::invalid_argument("coefficients must be positive");
      if (std::abs(norm2 - 1.0) > 1e-12) {
        for (double& x : c) x /= std::sqrt(norm2);
        std::cerr << "note: coefficients renormalized to unit square sum\n";
      }
      if (f.d > 0 && f.d != static_cast<int>(c.size()))
        throw std::invalid_argument("--d does not match the number of coefficients");
      if (f.n < 2) throw std::invalid_argument("schmidt needs --n >= 2");
      return SchmidtParams{SchmidtCoefficients(c), f.n};
    }
    case Family::W:
      if (f.n < 3) throw std::invalid_argument("w needs --n >= 3");
      return WParams{f.n};
    case Family::Dicke:
      if (f.n < 3 || f.k < 0) throw std::invalid_argument("dicke needs --n >= 3 and --k");
      return DickeParams{f.n, f.k};
    case Family::Graph: {
      if (f.graph.empty()) throw std::invalid_argument("graph needs --graph");
      return GraphParams{relabel_for_selftest(load_graph(f.graph))};
    }
  }
  throw std::logic_error("unreachable");
}

int cmd_gen_ideal(const FamilyFlags& flags, const std::string& out_path) {
  const FamilyParams params = params_from_flags(flags);
  const Strategy s = ideal_strategy(params);
  write_output(out_path, serialize(s));
  return 0;
}

int cmd_verify(const std::string& in_path, const FamilyFlags& flags, double tol,
               double fidelity_tol, const std::string& format, const std::string& out_path) {
  if (tol <= 0.0 || fidelity_tol <= 0.0) throw std::invalid_argument("tolerances must be positive");
  const Strategy s = deserialize(read_file(in_path));
  std::optional<FamilyParams> params;
  if (!flags.family.empty())
    params = params_from_flags(flags);
  else if (s.family)
    params = s.family;
  if (!params)
    throw std::invalid_argument("strategy file carries no family header; pass --family and params");

  const SelfTestReport report = run_selftest(s, *params, tol, fidelity_tol);
  write_output(out_path, format == "csv" ? selftest_report_to_csv(report)
                                         : selftest_report_to_json(report).dump(2) + "\n");
  return report.passed() ? 0 : 1;
}

int cmd_emit_correlations(const std::string& in_path, const std::string& questions,
                          const std::string& format, const std::string& out_path) {
  const Strategy s = deserialize(read_file(in_path));
  std::vector<QuestionTuple> qs;
  if (questions == "all") {
    std::vector<int> counts(s.n_parties());
    long total = 1;
    for (int p = 0; p < s.n_parties(); ++p) {
      counts[p] = s.parties[p].n_settings();
      total *= counts[p];
    }
    for (long flat = 0; flat < total; ++flat) {
      QuestionTuple q;
      q.x.resize(s.n_parties());
      long rem = flat;
      for (int p = s.n_parties() - 1; p >= 0; --p) {
        q.x[p] = static_cast<int>(rem % counts[p]);
        rem /= counts[p];
      }
      qs.push_back(std::move(q));
    }
  } else {
    std::stringstream ss(questions);
    std::string part;
    while (std::getline(ss, part, ';')) {
      QuestionTuple q;
      std::stringstream ps(part);
      int x;
      while (ps >> x) q.x.push_back(x);
      if (!q.x.empty()) qs.push_back(std::move(q));
    }
    if (qs.empty()) throw std::invalid_argument("no questions given (use e.g. \"0 0;0 1\" or all)");
  }

  std::vector<CorrelationTable> tables;
  tables.reserve(qs.size());
  for (const QuestionTuple& q : qs) tables.push_back(probability_table(s, q));
  write_output(out_path, format == "csv" ? tables_to_csv(tables)
                                         : tables_to_json(tables).dump(2) + "\n");
  return 0;
}

int cmd_adversarial(const std::string& in_path, std::uint64_t seed, const std::string& junk,
                    const std::string& out_path) {
  const Strategy s = deserialize(read_file(in_path));
  AdversarialTransform t;
  t.seed = seed;
  std::vector<int> dims = parse_ints(junk);
  if (dims.size() == 1) dims.assign(s.n_parties(), dims[0]);
  if (static_cast<int>(dims.size()) != s.n_parties())
    throw std::invalid_argument("--junk-dims needs one entry (broadcast) or one per party");
  t.junk_dims = std::move(dims);
  write_output(out_path, serialize(adversarial_embed(s, t)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of multipartite self-testing strategies"};
  app.require_subcommand(1);

  FamilyFlags gen_flags;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen-ideal", "write an ideal strategy file");
  add_family_flags(gen, gen_flags, true);
  gen->add_option("--out", gen_out, "output path (default stdout)");

  FamilyFlags verify_flags;
  std::string verify_in, verify_out, verify_format = "json";
  double tol = 1e-9, fidelity_tol = 1e-9;
  CLI::App* verify = app.add_subcommand("verify", "run the full self-test pipeline on a file");
  verify->add_option("--in", verify_in, "strategy JSON file")->required();
  add_family_flags(verify, verify_flags, false);
  verify->add_option("--tol", tol, "condition tolerance (default 1e-9)");
  verify->add_option("--fidelity-tol", fidelity_tol, "isometry fidelity tolerance (default 1e-9)");
  verify->add_option("--format", verify_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", verify_out, "report path (default stdout)");

  std::string emit_in, emit_questions = "all", emit_format = "json", emit_out;
  CLI::App* emit = app.add_subcommand("emit-correlations", "write probability tables");
  emit->add_option("--in", emit_in, "strategy JSON file")->required();
  emit->add_option("--questions", emit_questions,
                   "semicolon-separated setting tuples, e.g. \"0 0;0 1\", or all");
  emit->add_option("--format", emit_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  emit->add_option("--out", emit_out, "output path (default stdout)");

  std::string adv_in, adv_junk = "2", adv_out;
  std::uint64_t adv_seed = 0;
  CLI::App* adv = app.add_subcommand("adversarial", "embed junk factors and local unitaries");
  adv->add_option("--in", adv_in, "strategy JSON file")->required();
  adv->add_option("--seed", adv_seed, "unitary seed");
  adv->add_option("--junk-dims", adv_junk, "per-party junk dimensions, e.g. 2,2,3");
  adv->add_option("--out", adv_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_ideal(gen_flags, gen_out);
    if (verify->parsed())
      return cmd_verify(verify_in, verify_flags, tol, fidelity_tol, verify_format, verify_out);
    if (emit->parsed()) return cmd_emit_correlations(emit_in, emit_questions, emit_format, emit_out);
    if (adv->parsed()) return cmd_adversarial(adv_in, adv_seed, adv_junk, adv_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
