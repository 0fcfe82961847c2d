#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "io.hpp"

namespace pigeom::cli {

struct Options {
  std::optional<int> depth;
  u64 seed = 0;
  unsigned jobs = 1;
};

struct Outcome {
  Json report;
  std::vector<std::string> failures;  // names of identities that did not hold
};

using Command = std::function<Outcome(const Json& config, const Options& opts)>;

const std::map<std::string, Command>& commands();

}  // namespace pigeom::cli
