#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pigeom/error.hpp"

using namespace pigeom;
using namespace pigeom::cli;

namespace {

constexpr int exit_ok = 0, exit_identity = 1, exit_config = 2;

u64 seed_from_env() {
  const char* env = std::getenv("PIGEOM_SEED");
  if (!env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(ErrorCode::config_invalid, "PIGEOM_SEED must be a non-negative integer");
  }
}

void emit(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::config_invalid, "cannot write " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic differential geometry over ramified p-adic rings"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<int> depth;
  std::optional<u64> seed;
  unsigned jobs = 1;
  for (const auto& [name, command] : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config with ring and problem")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--depth", depth, "precision of the computation");
    sub->add_option("--seed", seed, "seed for randomized suites (default PIGEOM_SEED or 0)");
    sub->add_option("--jobs", jobs, "worker threads for randomized suites")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Json config;
  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::config_invalid, "cannot read " + config_path);
    config = Json::parse(in);
    Options opts{depth, seed ? *seed : seed_from_env(), jobs};
    const Outcome outcome = commands().at(name)(config, opts);
    Json report = outcome.report;
    report["pass"] = outcome.failures.empty();
    emit(report, out_path);
    for (const auto& f : outcome.failures) std::cerr << name << ": identity failed: " << f << "\n";
    return outcome.failures.empty() ? exit_ok : exit_identity;
  } catch (const Json::exception& e) {
    std::cerr << name << ": config error: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << name << ": config error: " << e.what() << "\n";
    Json report;
    report["command"] = name;
    report["pass"] = false;
    report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    try {
      emit(report, out_path);
    } catch (const Error&) {
    }
  }
  return exit_config;
}
