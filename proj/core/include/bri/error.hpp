#pragma once

#include <stdexcept>
#include <string>

namespace bri {

// Every user-facing failure carries a stable machine-readable code
// (e.g. "entailment-failed") plus a human-readable detail line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(detail) {}

  const std::string& code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

}  // namespace bri
