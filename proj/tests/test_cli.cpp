#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "kronsheaf/errors.hpp"

using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

std::string data_path(const std::string& name) { return std::string(KS_DATA_DIR) + "/" + name; }

Outcome call(std::vector<std::string> args) {
  for (auto& a : args)
    if (a.ends_with(".json") && a.find('/') == std::string::npos) a = data_path(a);
  std::ostringstream out, err;
  int code = ks::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("documented examples") {
  Outcome ss = call({"ss-module", "--in", "m0.json", "--field", "F2"});
  REQUIRE(ss.code == 0);
  CHECK(ss.json()["verdict"] == "semistable");
  CHECK(ss.json()["command"] == "ss-module");
  CHECK(ss.json()["seed"].is_null());

  Outcome adj = call({"adjoint-check", "--sheaf", "o1.json", "--n", "0", "--m", "1"});
  REQUIRE(adj.code == 0);
  CHECK(adj.json()["counit"] == true);
  CHECK(adj.json()["unit"] == true);

  Outcome td = call({"theta-detect", "--in", "zero_action.json", "--seed", "1"});
  REQUIRE(td.code == 0);
  CHECK(td.json()["verdict"] == "inconclusive");
}

TEST_CASE("exit codes") {
  Outcome no_seed = call({"theta-detect", "--in", "zero_action.json"});
  CHECK(no_seed.code == 2);
  CHECK(no_seed.error()["error"] == "ParseError");
  CHECK(no_seed.out.empty());
  CHECK(call({"separate", "--in", "sky_1_0.json", "--in", "sky_0_1.json"}).code == 2);
  CHECK(call({"hilbert", "--in", "missing.json"}).code == 2);
  CHECK(call({"hilbert"}).code == 2);
  CHECK(call({"no-such-command"}).code == 2);
  CHECK(call({"regular", "--in", "o.json", "--n", "x"}).code == 2);

  Outcome cap = call({"hilbert", "--in", "om1_plus_o1.json", "--degree-cap", "1"});
  CHECK(cap.code == 3);
  CHECK(cap.error()["error"] == "DegreeCapExceeded");

  Outcome nr = call({"phi", "--sheaf", "om1_plus_o1.json"});
  CHECK(nr.code == 5);
  CHECK(nr.error()["error"] == "NotRegular");
  CHECK(call({"theta", "--module", "m0.json", "--field", "Fp:5", "--gamma", "delta_y.json"}).code == 2);
  CHECK(call({"s-equiv", "--in", "m0.json", "--in", "sky_1_0.json", "--field", "Fp:5", "--seed", "1"}).code == 0);

  CHECK(ks::exit_code_for(ks::ErrorCategory::Resolution) == 4);
  CHECK(ks::exit_code_for(ks::ErrorCategory::Precondition) == 5);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::vector<std::string>> cmds{
      {"theta-detect", "--in", "m0_sum.json", "--seed", "11"},
      {"separate", "--in", "sky_1_0.json", "--in", "sky_0_1.json", "--in", "sky_1_1.json", "--budget", "16", "--seed", "3"},
      {"gr", "--in", "m0_sum.json", "--seed", "5"},
      {"ss-sheaf", "--sheaf", "o1.json"}};
  for (const auto& c : cmds) {
    Outcome a = call(c), b = call(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.back() == '\n');
  }
}

TEST_CASE("--out writes the report") {
  const std::string path = (std::filesystem::temp_directory_path() / "ks_test_cli_out.json").string();
  Outcome o = call({"pure", "--in", "impure.json", "--out", path});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream f(path);
  Json j = Json::parse(f);
  CHECK(j["pure"] == false);
  std::remove(path.c_str());
}

TEST_CASE("every command runs on a small input") {
  struct Case {
    std::vector<std::string> args;
    std::string key;
    Json expect;
  };
  const std::vector<Case> cases{
      {{"hilbert", "--in", "o1.json"}, "dim", 1},
      {{"cohomology", "--in", "om1_plus_o1.json", "--n", "-2"}, "h", Json::array({0, 2})},
      {{"regular", "--in", "o.json", "--n", "0"}, "regular", true},
      {{"regular", "--in", "om1_plus_o1.json", "--n", "0"}, "regular", false},
      {{"pure", "--in", "impure.json"}, "pure", false},
      {{"phi", "--sheaf", "o.json"}, "command", "phi"},
      {{"phidual", "--module", "m0.json", "--field", "Fp:5"}, "command", "phidual"},
      {{"adjoint-check", "--module", "m0.json", "--field", "Fp:5"}, "unit", true},
      {{"ss-module", "--in", "m0_sum.json"}, "verdict", "semistable"},
      {{"ss-sheaf", "--sheaf", "impure.json"}, "verdict", "not_applicable"},
      {{"ss-sheaf", "--sheaf", "o_plus_o2.json"}, "verdict", "unstable"},
      {{"gr", "--in", "m0_sum.json"}, "command", "gr"},
      {{"s-equiv", "--in", "m0_sum.json", "--in", "m0_sum.json", "--seed", "2"}, "s_equivalent", true},
      {{"theta", "--module", "m0.json", "--field", "Fp:5", "--gamma", "gamma_m0.json"}, "theta", "1"},
      {{"theta", "--sheaf", "point_x.json", "--delta", "delta_y.json"}, "agrees_with_module", true},
      {{"theta-detect", "--in", "m0_sum.json", "--seed", "4"}, "verdict", "semistable"},
      {{"conditions", "--sheaf", "o.json", "--sheaf", "skyscraper.json"}, "C5", true},
      {{"correspondence", "--sheaf", "o1.json"}, "all_match", true},
      {{"faltings", "--sheaf", "point_y.json", "--delta", "delta_y.json"}, "theta_nonzero", false},
      {{"separate", "--in", "sky_1_0.json", "--in", "sky_1_1.json", "--budget", "16", "--seed", "9"}, "ok", true}};
  for (const auto& c : cases) {
    CAPTURE(c.args[0]);
    Outcome o = call(c.args);
    REQUIRE(o.code == 0);
    Json j = o.json();
    CHECK(j[c.key] == c.expect);
    CHECK(j["version"] == "0.1.0");
  }
}
