#pragma once

#include <stdexcept>
#include <string>

namespace lorenzlab {

enum class ErrorCode {
  invalid_spec,
  undirected_critical,
  critical_point,
  budget_exhausted,
  not_found,
  hypothesis_violated,
  no_returns,
  not_invariant,
  insufficient_data,
  precondition,
};

[[nodiscard]] const char* to_string(ErrorCode code);

class LorenzError : public std::runtime_error {
 public:
  LorenzError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lorenzlab
