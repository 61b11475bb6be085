#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "campana/cli.hpp"
#include "campana/run_config.hpp"
#include "doctest.h"

using namespace campana;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("predict") {
  auto r = run({"predict", "--model", "p3-heisenberg", "--m", "2"});
  REQUIRE(r.code == 0);
  CHECK(parse(r)["a"] == 3.5);
  CHECK(parse(r)["b"] == 1);
  CHECK(parse(r)["a_exact"] == "7/2");
  r = run({"predict", "--model", "p3-heisenberg", "--m", "1"});
  CHECK(parse(r)["a"] == 4);
  r = run({"predict", "--m", "infinity"});
  CHECK(parse(r)["a"] == 1);
  CHECK(parse(r)["b_prime"] == 1);
}

TEST_CASE("densities --formal") {
  auto r = run({"densities", "--model", "p3-heisenberg", "--m", "2", "--prime", "2", "--formal", "--depth", "4"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["numerator"] == nlohmann::json({"1", "-1", "7/8"}));
  CHECK(j["denominator"] == nlohmann::json({"1", "-1"}));
  CHECK(j["series"] == nlohmann::json({"1", "0", "7/8", "7/8", "7/8"}));
  r = run({"densities", "--m", "2", "--prime", "3", "--formal", "--oracle", "--depth", "6"});
  CHECK(parse(r)["oracle"] == parse(r)["series"]);
  CHECK(run({"densities", "--formal"}).code == 2);
}

TEST_CASE("densities and constant reports") {
  auto r = run({"densities", "--m", "2", "--s", "4", "--prime-bound", "100"});
  REQUIRE(r.code == 0);
  auto j = parse(r);
  CHECK(j["prime_bound"] == 100);
  CHECK(j["factors"].size() == 25);
  CHECK(run({"densities", "--m", "2", "--s", "3.1"}).code == 2);
  r = run({"constant", "--m", "1", "--prime-bound", "1000"});
  REQUIRE(r.code == 0);
  CHECK(parse(r)["c_bar"].get<double>() == doctest::Approx(29.56).epsilon(1e-3));
}

TEST_CASE("count, csv and sweep") {
  auto r = run({"count", "--m", "2", "--T", "10,20,40"});
  REQUIRE(r.code == 0);
  auto j = parse(r);
  CHECK(j["rows"].size() == 3);
  r = run({"count", "--m", "2", "--T", "10,20,40", "--format", "csv"});
  CHECK(r.out.rfind("T,N,predicted,fitted,rel_err\n", 0) == 0);
  r = run({"count", "--m", "2", "--T", "5,6,7", "--method", "brute"});
  CHECK(r.code == 0);
  r = run({"sweep", "--ms", "1,2", "--T", "10,20,30"});
  REQUIRE(r.code == 0);
  CHECK(parse(r).size() == 6);
  r = run({"sweep", "--ms", "1,2", "--T", "10,20,30", "--format", "csv"});
  CHECK(r.out.rfind("m,T,N,predicted,rel_err\n", 0) == 0);
}

TEST_CASE("verify exit codes") {
  auto r = run({"verify", "--m", "1", "--prime-bound", "10000"});
  CHECK(r.code == 0);
  CHECK(parse(r)["pass"] == true);
  r = run({"verify", "--m", "1", "--prime-bound", "10000", "--const-tol", "0.0001"});
  CHECK(r.code == 3);
  CHECK(parse(r)["pass"] == false);
  r = run({"verify", "--m", "infinity"});
  CHECK(r.code == 0);
}

TEST_CASE("validation errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"predict", "--bogus"}).code == 2);
  CHECK(run({"predict", "--model", "p9"}).code == 2);
  CHECK(run({"predict", "--m", "0"}).code == 2);
  CHECK(run({"predict", "--lambda", "-1"}).code == 2);
  CHECK(run({"predict", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic across runs and thread counts") {
  const auto a = run({"verify", "--m", "2", "--prime-bound", "5000", "--threads", "1"});
  const auto b = run({"verify", "--m", "2", "--prime-bound", "5000", "--threads", "3"});
  const auto c = run({"verify", "--m", "2", "--prime-bound", "5000", "--threads", "1"});
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("run config round trip") {
  RunConfig cfg;
  cfg.model = "p2-unipotent";
  cfg.m = 3;
  cfg.S = PlaceSet::parse("inf,2,5");
  cfg.lambda = Rational(3, 2);
  cfg.T = {100, 141.5, 1e6};
  cfg.prime_bound = 12345;
  cfg.s = {3.25, 4};
  cfg.format = "csv";
  cfg.threads = 3;
  cfg.output = "/tmp/x.json";
  cfg.prime = 7;
  cfg.ms = {1, std::nullopt};
  cfg.slope_tol = 0.125;
  cfg.const_tol = 0.3;
  cfg.method = "brute";
  cfg.depth = 9;
  CHECK(RunConfig::parse(cfg.serialize()) == cfg);
  CHECK(RunConfig::parse(RunConfig{}.serialize()) == RunConfig{});
  CHECK_THROWS_AS(RunConfig::parse("colour = red\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse("m 2\n"), std::invalid_argument);
  const auto parsed = RunConfig::parse("# comment\nmodel = p1-vector  \n\nm = infinity # trailing\n");
  CHECK(parsed.model == "p1-vector");
  CHECK_FALSE(parsed.m.has_value());
}

TEST_CASE("config file with flag override and env threads") {
  const std::string path = "test_cli_config.txt";
  {
    std::ofstream f(path);
    f << "model = p3-heisenberg\nm = 1\n";
  }
  auto r = run({"predict", "--config", path});
  CHECK(parse(r)["a"] == 4);
  r = run({"predict", "--config", path, "--m", "2"});
  CHECK(parse(r)["a"] == 3.5);
  {
    std::ofstream f(path);
    f << "unknown = 1\n";
  }
  CHECK(run({"predict", "--config", path}).code == 2);
  std::remove(path.c_str());

  setenv("CAMPANA_THREADS", "2", 1);
  CHECK(run({"count", "--m", "2", "--T", "10,20,30"}).code == 0);
  setenv("CAMPANA_THREADS", "two", 1);
  CHECK(run({"count", "--m", "2", "--T", "10,20,30"}).code == 2);
  unsetenv("CAMPANA_THREADS");
}

TEST_CASE("output file") {
  const std::string path = "test_cli_out.json";
  auto r = run({"predict", "--m", "2", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  CHECK(nlohmann::json::parse(f)["b"] == 1);
  std::remove(path.c_str());
}
