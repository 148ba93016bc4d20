#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fairway {

// Every domain failure carries a stable machine-checkable code plus a
// human-readable detail string. Codes in use:
//   EmptyAllocation, InvalidValue, DegenerateMean, InvalidSpec, InvalidFlow,
//   NoConvergence, UnknownMetric, DegenerateEfficiency, DegenerateMetric,
//   ConfigError, IoError
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// The detail half of what(), i.e. everything after the "code: " prefix.
inline std::string error_detail(const Error& e) {
  return std::string(e.what()).substr(e.code().size() + 2);
}

}  // namespace fairway
