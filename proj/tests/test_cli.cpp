#include "cftspec/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using cftspec::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cftspec_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("invariants command") {
  const auto ok = call({"invariants", "--m", "3", "--sector", "vacuum"});
  CHECK(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["schema"] == 1);
  CHECK(j["fits"][0]["a0"].get<std::string>().rfind("1.3089969", 0) == 0);

  const auto bad_m = call({"invariants", "--m", "2"});
  CHECK(bad_m.code == 1);
  const auto e = nlohmann::json::parse(bad_m.err);
  CHECK(e["message"] == "m must be >= 3");

  CHECK(call({"invariants", "--m", "3", "--grid", "0.5:1:4"}).code == 2);
  CHECK(call({"invariants", "--m", "3", "--grid", "0:1:4"}).code == 1);
  CHECK(call({"invariants", "--m", "3", "--precision", "20"}).code == 1);
  CHECK(call({"invariants", "--m", "3", "--cutoff", "5"}).code == 1);
}

TEST_CASE("bh command") {
  const auto m = call({"bh", "--mass", "1"});
  REQUIRE(m.code == 0);
  const auto j = nlohmann::json::parse(m.out);
  CHECK(j["S"].get<std::string>().rfind("1.2566370614", 0) == 0);

  const auto c = call({"bh", "--central-charge", "0.5"});
  REQUIRE(c.code == 0);
  const auto k = nlohmann::json::parse(c.out);
  CHECK(k["S"].get<std::string>().rfind("2.6179938779914943653855", 0) == 0);  // pi/12
  CHECK(k["S"] == k["F_mean"]);
  CHECK(k["S_equals_F_mean"] == true);

  CHECK(call({"bh", "--mass", "1", "--area", "5"}).code == 1);
  CHECK(call({"bh"}).code == 1);
  CHECK(call({"bh", "--mass", "-1"}).code == 1);
  CHECK(call({"bh", "--mass", "abc"}).code == 1);
}

TEST_CASE("verify subsets and the built-in negative control") {
  const auto lab = call({"verify", "--lab", "--dims", "2,3,2"});
  CHECK(lab.code == 0);
  CHECK(lab.out.find("PASS lab.triple") != std::string::npos);
  CHECK(lab.out.find("value=9.000e+00") != std::string::npos);

  const auto bad = call({"verify", "--fock", "--corrupt-sign"});
  CHECK(bad.code == 2);
  CHECK(bad.out.find("FAIL fock.log_trace_over_bound.bose") != std::string::npos);
  CHECK(bad.out.find("PASS fock.closed_form_over_bound.bose") != std::string::npos);
  CHECK(call({"verify", "--fock"}).code == 0);
}

TEST_CASE("reports are byte-identical for identical configs") {
  const std::string a = temp_path("a.json"), b = temp_path("b.json");
  CHECK(call({"verify", "--bridge", "--virasoro", "--seed", "7", "-o", a}).code == 0);
  CHECK(call({"verify", "--bridge", "--virasoro", "--seed", "7", "-o", b}).code == 0);
  CHECK(!slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("config file precedence") {
  const std::string cfg = temp_path("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# model selection\nm = 4\nformat = csv\n";
  }
  const auto r = call({"model", "--config", cfg});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("index,r,s,h,d\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);  // m = 4 has six sectors

  const auto flag_wins = call({"model", "--config", cfg, "--m", "3"});
  CHECK(std::count(flag_wins.out.begin(), flag_wins.out.end(), '\n') == 4);

  {
    std::ofstream f(cfg);
    f << "nonsense = 3\n";
  }
  CHECK(call({"model", "--config", cfg}).code == 1);
  CHECK(call({"model", "--config", temp_path("missing.cfg")}).code == 1);
  std::remove(cfg.c_str());
}

TEST_CASE("malformed input never crashes") {
  CHECK(call({}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"model", "--m", "x"}).code == 1);
  CHECK(call({"characters", "--sector", "9,9"}).code == 1);
  CHECK(call({"fock"}).code == 1);
  CHECK(call({"fock", "--spectrum", "1.5"}).code == 1);
  CHECK(call({"lab", "--battery", "triple"}).code == 1);
  CHECK(call({"lab", "--battery", "triple", "--dims", "2,0,2"}).code == 1);
  CHECK(call({"verify", "--format", "csv"}).code == 1);
  CHECK(call({"model", "--help"}).code == 0);
}

TEST_CASE("characters and fock output") {
  const auto c = call({"characters", "--m", "3", "--sector", "2,2", "--cutoff", "10",
                       "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("sector,k,coefficient\n1,0,1\n1,1,1\n", 0) == 0);

  const auto f = call({"fock", "--spectrum", "0.5", "--stat", "bose"});
  REQUIRE(f.code == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j["traces"][0]["closed_form"].get<std::string>().rfind("2.0000000000", 0) == 0);

  const auto r = call({"fock", "--linear", "5000", "--grid", "0.01:0.01:1", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["rows"][0]["ratio"].get<std::string>().rfind("8.23", 0) == 0);
}

}  // TEST_SUITE
