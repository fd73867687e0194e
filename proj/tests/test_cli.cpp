#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "gravity/cli_app.hpp"

using namespace gravity;

namespace {

struct RunOut {
  int code;
  std::string out;
  std::string err;
};

RunOut run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("dissections command") {
  auto r = run({"dissections", "--n", "5", "--k", "2", "--count"});
  CHECK(r.code == 0);
  CHECK(r.out.find("5 dissections") != std::string::npos);
  r = run({"dissections", "--n", "6", "--k", "3", "--count"});
  CHECK(r.out.find("14 dissections") != std::string::npos);
  r = run({"dissections", "--n", "3", "--k", "0", "--count"});
  CHECK(r.out.find("1 dissections") != std::string::npos);
  r = run({"dissections", "--n", "10", "--count", "--verify-cayley"});
  CHECK(r.code == 0);
  CHECK(r.out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("betti command") {
  auto r = run({"betti", "--space", "moduli", "--n", "6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1,9,26,24") != std::string::npos);
  r = run({"betti", "--space", "brown", "--n", "5", "--all-methods"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1,0,1") != std::string::npos);
  CHECK(r.out.find("3/3 methods agree") != std::string::npos);
  r = run({"betti", "--space", "brown", "--n", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 1) == "1");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"dissections"}).code == 2);                       // missing --n
  CHECK(run({"dissections", "--n", "99"}).code == 2);          // out of range
  CHECK(run({"nonsense"}).code == 2);                          // unknown command
  // kernel method above the default linear-algebra cap
  CHECK(run({"betti", "--space", "brown", "--n", "9", "--method", "kernel"}).code == 2);
  CHECK(run({"dump", "row", "--n", "5", "--q", "7"}).code == 2);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "exactness", "--n", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("suite exactness: PASS") != std::string::npos);
  r = run({"verify", "phi", "--n", "5", "--with-psi"});
  CHECK(r.code == 0);
  r = run({"verify", "welldefined", "--n", "4"});
  CHECK(r.code == 0);
  r = run({"verify", "betti", "--n", "4", "--n-max", "6"});
  CHECK(r.code == 0);
}

TEST_CASE("dump command") {
  auto r = run({"--format", "json", "dump", "row", "--n", "5", "--q", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"dims\": [") != std::string::npos);
  CHECK(r.out.find("6,") != std::string::npos);
  Json j = Json::parse(r.out);
  CHECK(j["tool"] == "gravity");
  CHECK(j["command"] == "dump row");
  CHECK(j["result"]["dims"] == Json::array({6, 10, 5}));
  r = run({"--format", "json", "dump", "space", "--n", "5", "--k", "1"});
  CHECK(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["result"]["monomials"] == 5);
  CHECK(j["result"]["relations"] == 0);
  r = run({"--format", "json", "dump", "row", "--n", "3", "--q", "0"});
  j = Json::parse(r.out);
  CHECK(j["result"]["dims"] == Json::array({1}));
}

TEST_CASE("deterministic output, cold and warm cache") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gravity_cache_test";
  fs::remove_all(dir);
  std::vector<std::string> args{"--format", "json", "--cache-dir", dir.string(),
                                "verify", "welldefined", "--n", "5"};
  auto cold = run(args);
  CHECK(cold.code == 0);
  CHECK(fs::exists(dir));
  bool sawSpace = false, sawNbc = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto name = e.path().filename().string();
    if (name.rfind("space_", 0) == 0) sawSpace = true;
    if (name.rfind("nbc_", 0) == 0) sawNbc = true;
  }
  CHECK(sawSpace);
  CHECK(sawNbc);
  auto warm = run(args);
  CHECK(warm.code == cold.code);
  CHECK(warm.out == cold.out);
  // and identical without any cache
  auto plain = run({"--format", "json", "verify", "welldefined", "--n", "5"});
  CHECK(plain.out == cold.out);
  fs::remove_all(dir);
}

TEST_CASE("output does not depend on the worker pool width") {
  auto one = run({"--format", "json", "verify", "exactness", "--n", "4", "--n-max", "6",
                  "--jobs", "1"});
  auto four = run({"--format", "json", "verify", "exactness", "--n", "4", "--n-max", "6",
                   "--jobs", "4"});
  CHECK(one.code == 0);
  CHECK(four.code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("rational serialization round trip") {
  Rat v(-7, 12);
  CHECK(rat_to_string(v) == "-7/12");
  CHECK(rat_from_string("-7/12") == v);
  RationalMatrix m(2, 2);
  m.set(0, 1, Rat(1, 3));
  Json j = matrix_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["entries"][0][2] == "1/3");
}
