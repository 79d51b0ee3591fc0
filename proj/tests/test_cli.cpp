#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selftest/correlations.hpp"
#include "selftest/strategy.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace selftest;

namespace {

const std::string cli = SELFTEST_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tmp(const std::string& name) { return "/tmp/selftest_cli_" + name; }

}  // namespace

TEST_CASE("gen-ideal then verify exits 0") {
  const std::string f = tmp("ghz.json");
  CHECK(run("gen-ideal --family ghz --n 3 --theta 0.5 --out " + f) == 0);
  CHECK(run("verify --in " + f) == 0);

  const std::string g = tmp("graph.json");
  CHECK(run("gen-ideal --family graph --graph path:3 --out " + g) == 0);
  CHECK(run("verify --in " + g) == 0);
}

TEST_CASE("invalid parameters exit 2") {
  CHECK(run("gen-ideal --family ghz --n 3 --theta 0.0 --out /tmp/never.json") == 2);
  CHECK(run("gen-ideal --family nosuch --n 3 --out /tmp/never.json") == 2);
  CHECK(run("verify --in /tmp/definitely_missing_file.json") == 2);
  // Dicke below the mirrored range: the caller targets n-k instead.
  CHECK(run("gen-ideal --family dicke --n 5 --k 1 --out /tmp/never.json") == 2);
  CHECK(run("gen-ideal --family schmidt --n 3 --coeffs 0.6,0.8 --d 3 --out /tmp/never.json") == 2);
}

TEST_CASE("non-positive tolerances exit 2") {
  const std::string f = tmp("tolcheck.json");
  CHECK(run("gen-ideal --family ghz --n 3 --theta 0.5 --out " + f) == 0);
  CHECK(run("verify --in " + f + " --tol -1") == 2);
  CHECK(run("verify --in " + f + " --fidelity-tol 0") == 2);
}

TEST_CASE("graph files load through the CLI") {
  const std::string graph_file = tmp("graph_def.json");
  std::ofstream(graph_file) << R"({"n": 4, "edges": [[0,1],[1,2],[2,3]]})";
  const std::string f = tmp("graph_from_file.json");
  CHECK(run("gen-ideal --family graph --graph " + graph_file + " --out " + f) == 0);
  CHECK(run("verify --in " + f) == 0);

  std::ofstream(graph_file) << R"({"edges": [[0,1]]})";  // missing "n"
  CHECK(run("gen-ideal --family graph --graph " + graph_file + " --out /tmp/never.json") == 2);
}

TEST_CASE("wrong-family parameters against a file exit 2") {
  const std::string f = tmp("w4.json");
  CHECK(run("gen-ideal --family w --n 4 --out " + f) == 0);
  CHECK(run("verify --in " + f + " --family ghz --n 3 --theta 0.5") == 2);
}

TEST_CASE("noisy strategies are rejected with exit 1") {
  const Strategy noisy = noise_mix(ideal_strategy(GhzParams{3, 0.5}), 0.01);
  const std::string f = tmp("noisy.json");
  std::ofstream(f) << serialize(noisy);
  const std::string report = tmp("noisy_report.json");
  const int code = std::system((cli + " verify --in " + f + " --out " + report).c_str());
  CHECK(WEXITSTATUS(code) == 1);
  const nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j.at("passed").get<bool>() == false);
  // The report names the failing specs.
  bool found_failing = false;
  for (const auto& r : j.at("conditions").at("residuals"))
    if (r.at("residual").get<double>() > 1e-4) {
      found_failing = true;
      CHECK(!r.at("label").get<std::string>().empty());
    }
  CHECK(found_failing);
}

TEST_CASE("adversarial embedding is deterministic and verifiable") {
  const std::string f = tmp("ghz_for_adv.json");
  CHECK(run("gen-ideal --family ghz --n 3 --theta 0.6 --out " + f) == 0);

  const std::string a1 = tmp("adv1.json"), a2 = tmp("adv2.json");
  CHECK(run("adversarial --in " + f + " --seed 42 --junk-dims 2 --out " + a1) == 0);
  CHECK(run("adversarial --in " + f + " --seed 42 --junk-dims 2 --out " + a2) == 0);
  CHECK(slurp(a1) == slurp(a2));
  CHECK(run("verify --in " + a1) == 0);

  CHECK(run("adversarial --in " + f + " --seed 1 --junk-dims 64,64,64 --out /tmp/never.json") ==
        2);
}

TEST_CASE("SELFTEST_THREADS caps evaluation parallelism") {
  const std::string f = tmp("threads.json");
  CHECK(run("gen-ideal --family w --n 4 --out " + f) == 0);
  const std::string cmd = "SELFTEST_THREADS=1 " + cli + " verify --in " + f + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("emit-correlations round trip") {
  const std::string f = tmp("bell.json");
  CHECK(run("gen-ideal --family ghz --n 2 --theta 0.7853981633974483 --out " + f) == 0);

  const std::string out = tmp("tables.json");
  CHECK(run("emit-correlations --in " + f + " --questions \"0 0\" --out " + out) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  REQUIRE(j.at("tables").size() == 1);
  double sum = 0.0;
  for (const auto& p : j.at("tables").at(0).at("probs")) sum += p.get<double>();
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // All questions of a three-party strategy: 2^3 tables.
  const std::string g = tmp("ghz3.json");
  CHECK(run("gen-ideal --family ghz --n 3 --theta 0.5 --out " + g) == 0);
  const std::string out3 = tmp("tables3.json");
  CHECK(run("emit-correlations --in " + g + " --questions all --out " + out3) == 0);
  CHECK(nlohmann::json::parse(slurp(out3)).at("tables").size() == 8);

  // CSV values re-read equal the in-memory ones.
  const std::string csv_path = tmp("tables.csv");
  CHECK(run("emit-correlations --in " + f + " --questions \"0 0\" --format csv --out " +
            csv_path) == 0);
  const Strategy s = deserialize(slurp(f));
  const CorrelationTable table = probability_table(s, QuestionTuple{{0, 0}});
  std::istringstream lines(slurp(csv_path));
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream cells(row.substr(row.find(',') + 1));
  std::string cell;
  for (long flat = 0; std::getline(cells, cell, ','); ++flat)
    CHECK(std::stod(cell) == table.probs[flat]);
}
