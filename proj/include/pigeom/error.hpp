#pragma once

#include <stdexcept>
#include <string>

namespace pigeom {

enum class ErrorCode {
  config_invalid,
  precision_exhausted,
  not_a_unit,
  not_divisible,
  singular_residue,
  not_congruent_to_one,
  hypothesis_violated,
  degenerate_denominator,
  degenerate_curve,
  hyperplane_violation,
  context_mismatch,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pigeom
