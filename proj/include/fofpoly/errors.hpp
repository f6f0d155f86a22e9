#pragma once

#include <stdexcept>
#include <string>

namespace fofpoly {

enum class errc {
  invalid_argument,
  grid_mismatch,
  domain_error,
  numeric_error,
  resource_limit,
  degenerate_oracle,
  search_failure,
  epsilon_too_large,
  construction_bug,
  out_of_range,
  config_error,
  io_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::grid_mismatch: return "grid-mismatch";
    case errc::domain_error: return "domain-error";
    case errc::numeric_error: return "numeric-error";
    case errc::resource_limit: return "resource-limit";
    case errc::degenerate_oracle: return "degenerate-oracle";
    case errc::search_failure: return "search-failure";
    case errc::epsilon_too_large: return "epsilon-too-large";
    case errc::construction_bug: return "construction-bug";
    case errc::out_of_range: return "out-of-range";
    case errc::config_error: return "config-error";
    case errc::io_error: return "io-error";
  }
  return "unknown-error";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace fofpoly
