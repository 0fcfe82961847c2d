#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Run {
  int code;
  std::string out;
  Json report;
};

Run run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / ("pigeom_cli_" + std::to_string(std::hash<std::string>{}(args)) + ".json");
  fs::remove(out);
  const std::string cmd = std::string(PIGEOM_CLI) + " " + args + " --out " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r{WEXITSTATUS(status), "", Json()};
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  if (!r.out.empty()) r.report = Json::parse(r.out);
  return r;
}

std::string config(const std::string& name) { return "--config " + std::string(PIGEOM_CLI_CONFIGS) + "/" + name; }

bool all_zero(const Json& x) {
  if (x.is_array()) {
    for (const Json& y : x)
      if (!all_zero(y)) return false;
    return true;
  }
  if (x.is_object()) return all_zero(x.contains("coords") ? x["coords"] : x["coeffs"]);
  return x.get<std::string>() == "0";
}

}  // namespace

TEST_CASE("flat Levi-Civita has vanishing Christoffel symbols") {
  const Run r = run("levi-civita " + config("lc_flat.json"));
  CHECK(r.code == 0);
  CHECK(r.report["pass"] == true);
  CHECK(all_zero(r.report["christoffel_at_identity"]));
}

TEST_CASE("scalar Chern connection over Z/125") {
  const Run r = run("chern " + config("chern_scalar.json"));
  CHECK(r.code == 0);
  CHECK(r.report["legendre"]["symbol"] == -1);
  CHECK(r.report["legendre"]["pass"] == true);
  CHECK(r.report["lambdas"][0][0][0]["coords"][0]["coeffs"][0] == "121");
}

TEST_CASE("wild ramification is a config error") {
  const Run r = run("chern " + config("wild.json"));
  CHECK(r.code == 2);
  CHECK(r.report["error"]["code"] == "config-invalid");
  CHECK(r.report["error"]["message"].get<std::string>().find("does not divide p^m - 1") != std::string::npos);
  CHECK(run("chern --config /nonexistent.json").code == 2);
}

TEST_CASE("every command passes on its sample config") {
  const std::pair<const char*, const char*> cases[] = {
      {"derivation-check", "derivation.json"}, {"jet-group-check", "jet_group.json"},
      {"levi-civita", "lc_jet.json"},          {"chern", "chern_jet.json"},
      {"geodesic", "geodesic.json"},           {"parallel-transport", "transport.json"},
      {"exp-map", "exp_map.json"},             {"trans-map", "trans_map.json"},
      {"witt-coords", "witt.json"},            {"overconvergence", "overconv.json"},
      {"ring-info", "lc_flat.json"}};
  for (const auto& [command, file] : cases) {
    INFO(command);
    const Run r = run(std::string(command) + " " + config(file) + " --seed 5");
    CHECK(r.code == 0);
    CHECK(r.report["pass"] == true);
  }
}

TEST_CASE("unscaled torsion fails the overconvergence comparison") {
  const Run r = run("overconvergence " + config("overconv_unscaled.json"));
  CHECK(r.code == 1);
  CHECK(r.report["results"][0]["pass"] == false);
  CHECK(r.report["results"][0]["first_failure"]["in_base"] == false);
}

TEST_CASE("reports are deterministic") {
  const Run a = run("derivation-check " + config("derivation.json") + " --seed 11 --jobs 1");
  const Run b = run("derivation-check " + config("derivation.json") + " --seed 11 --jobs 4");
  CHECK(a.out == b.out);
  CHECK(run("geodesic " + config("geodesic.json") + " --seed 2").out ==
        run("geodesic " + config("geodesic.json") + " --seed 2").out);
  setenv("PIGEOM_SEED", "2", 1);
  CHECK(run("geodesic " + config("geodesic.json")).out == run("geodesic " + config("geodesic.json") + " --seed 2").out);
  unsetenv("PIGEOM_SEED");
}

TEST_CASE("depth flag controls the solver precision") {
  const Run r = run("geodesic " + config("geodesic.json") + " --seed 5 --depth 4");
  CHECK(r.code == 0);
  CHECK(r.report["depth"] == 4);
  CHECK(r.report["c"][0]["prec"] == 4);
}
