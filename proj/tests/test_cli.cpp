#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fisherwit/cli.hpp"

using namespace fisherwit;
using io::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kWorkedTask = R"({
  "family": {"type": "unitary", "generator": [[0, [0, -0.5]], [[0, 0.5], 0]]},
  "povm": {"elements": [[[1, 0], [0, 0.5]], [[0, 0], [0, 0.5]]]},
  "state": {"ket": [1, 0]})";

}  // namespace

TEST_CASE("cfi subcommand") {
  const Run r = run({"cfi", "--json", std::string(kWorkedTask) + "}"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j.at("value").get<double>() - 0.5) < 1e-12);
}

TEST_CASE("cfi curve in tsv") {
  const Run r = run({"cfi", "--format", "tsv", "--json", std::string(kWorkedTask) + R"(, "grid": [0, 0.5, 1]})"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "theta\tp0\tfisher");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("nc over the hemisphere") {
  const Run r =
      run({"nc", "--jobs", "2", "--json", std::string(kWorkedTask) + R"(, "free_set": {"variant": "hemisphere"}})"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(json::parse(r.out).at("n_value").get<double>() - 1.0 / 6.0) < 1e-9);
}

TEST_CASE("robustness reports infinity as a string") {
  const Run r = run({"robustness", "--json",
                     R"({"state": {"ket": [0.7071067811865476, 0.7071067811865476]},
                         "free_set": {"variant": "incoherent", "dim": 2}})"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("standard").at("value") == "inf");
  CHECK(std::abs(j.at("generalized").at("value").get<double>() - 1.0) < 1e-7);
}

TEST_CASE("criterion and op-witness") {
  const Run c = run({"criterion", "--json",
                     R"({"generator": [[1, 0], [0, -1]],
                         "free_set": {"variant": "singleton", "state": {"ket": [1, 0]}}})"});
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out).at("certified").get<bool>());

  const Run o = run({"op-witness", "--json", R"({
      "target": {"kraus": [[[0.7071067811865476, 0.7071067811865476], [0.7071067811865476, -0.7071067811865476]]]},
      "game": {"probabilities": [0.5, 0.5],
               "states": [{"ket": [1, 1]}, {"ket": [1, -1]}],
               "guesses": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
               "free_ops": ["identity", "dephasing", {"kraus": [[[0, 1], [1, 0]]]}]}})"});
  REQUIRE(o.code == 0);
  CHECK(std::abs(json::parse(o.out).at("gap").get<double>() - 1.0) < 1e-9);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run({"cfi", "--json", "{not json"}).code == 2);
  CHECK(run({"cfi", "--json", "{}"}).code == 2);
  CHECK(run({"nosuch"}).code == 2);
  CHECK(run({"reproduce", "nosuch"}).code == 2);
  const Run r = run({"robustness", "--json", R"({"state": {"matrix": [[1, 0], [0, 1]]},
                                                 "free_set": {"variant": "incoherent", "dim": 2}})"});
  CHECK(r.code == 2);
  CHECK(r.err.find("TraceNotOne") != std::string::npos);
  CHECK(run({"cfi", "--input", "/nonexistent/file.json"}).code == 2);
}

TEST_CASE("help exits with 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("reproduce is deterministic") {
  for (const auto& name : cli::reproduce_targets()) {
    const std::string first = cli::reproduce(name).dump();
    CHECK(cli::reproduce(name).dump() == first);
  }
}

TEST_CASE("empty grid gives an empty table") {
  const Run r = run({"cfi", "--json", std::string(kWorkedTask) + R"(, "grid": []})"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).empty());
}

TEST_CASE("malformed matrix is a schema error") {
  const Run r = run({"qfi", "--json", R"({"family": {"type": "unitary", "generator": [[1, 0], [0]]},
                                          "state": {"ket": [1, 0]}})"});
  CHECK(r.code == 2);
  CHECK(r.err.find("schema") != std::string::npos);
}

TEST_CASE("output file") {
  const std::string path = "cli_output_test.json";
  REQUIRE(run({"reproduce", "coherence-criterion", "--output", path}).code == 0);
  std::ifstream f(path);
  CHECK(json::parse(f).at("certified").get<bool>());
}
